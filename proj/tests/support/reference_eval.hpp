#ifndef TESTS_REFERENCE_EVAL_HPP
#define TESTS_REFERENCE_EVAL_HPP

// Naive set-semantics XPath evaluator, written independently of the library's
// evaluator: axes are computed by filtering every node of the page against a
// pairwise relation predicate, and nothing is shared with ixp::evaluate
// beyond the document model and AST types. Covers the core language (the
// twelve XPath 1.0 axes, node tests, predicates, unions, comparisons and the
// core functions); extension axes are out of scope here.

#include <map>
#include <string>
#include <vector>

#include "inferxpath/ast.hpp"
#include "inferxpath/dom.hpp"

namespace refeval {

struct RefValue {
    enum class Kind { Nodes, Str, Num, Bool } kind = Kind::Nodes;
    std::vector<ixp::NodeId> nodes; // kept sorted by (page, index)
    std::string str;
    double num = 0;
    bool boolean = false;

    static RefValue of_nodes(std::vector<ixp::NodeId> n);
    static RefValue of_string(std::string s);
    static RefValue of_number(double d);
    static RefValue of_bool(bool b);
};

struct RefEnv {
    const ixp::Corpus* corpus = nullptr;
    std::map<std::string, std::string> variables;
};

RefValue ref_evaluate(const ixp::ExprPtr& e, const std::vector<ixp::NodeId>& context,
                      const RefEnv& env);

// Single full step (axis/test/predicates) from one node, sorted result.
std::vector<ixp::NodeId> ref_step(const ixp::Step& step, const ixp::NodeId& from,
                                  const RefEnv& env);

std::string ref_string_value(const ixp::NodeId& id, const RefEnv& env);

} // namespace refeval

#endif
