#ifndef INFERXPATH_EVAL_HPP
#define INFERXPATH_EVAL_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "inferxpath/ast.hpp"
#include "inferxpath/dom.hpp"
#include "inferxpath/fetch.hpp"

namespace ixp {

// Ordered, duplicate-free set of nodes: document order within a page, pages
// ordered by URL. The universal query answer type.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::vector<NodeId> items);
    static NodeSet single(NodeId id);

    void insert(NodeId id);
    bool contains(const NodeId& id) const;
    const std::vector<NodeId>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const NodeId& front() const { return items_.front(); }

    NodeSet united(const NodeSet& other) const;
    bool subset_of(const NodeSet& other) const;

    friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
    std::vector<NodeId> items_;
};

using Value = std::variant<NodeSet, std::string, double, bool>;

bool value_truthy(const Value& v);
std::string value_to_string(const Value& v, const class EvalEnv& env);
double value_to_number(const Value& v, const class EvalEnv& env);

class EvalEnv {
public:
    Corpus* corpus = nullptr;
    Fetcher* fetcher = nullptr; // optional; without it link axes fail closed
    std::map<std::string, std::string> variables;
    int max_fetch = 100;      // per-evaluation link budget
    double epsilon = 0.5;     // visual-axis tolerance in CSS px
    double tag_confidence = 0.5;

    const Document& document(const std::string& page) const;
    std::string string_value(const NodeId& id) const; // normalized text
};

// Evaluate an expression against a context node-set. Node-set results are
// canonically ordered; predicates filter by truthiness with 1-based positions
// along the axis direction. A fresh fetch budget of env.max_fetch covers one
// evaluation.
Value evaluate(const ExprPtr& e, const NodeSet& context, const EvalEnv& env);

// As evaluate, but requires a node-set result (TypeError otherwise).
NodeSet evaluate_nodes(const ExprPtr& e, const NodeSet& context, const EvalEnv& env);

// One axis step from one node, canonical order, no predicates.
NodeSet axis_step(Axis axis, const NodeTest& test, const NodeId& from, const EvalEnv& env);

// One full step (axis, test, predicates) from one node; used by inference.
NodeSet step_from_node(const Step& step, const NodeId& from, const EvalEnv& env);

// Direct function application (arity already validated).
Value eval_function(FnName fn, const std::vector<Value>& args,
                    const std::optional<NodeId>& context, const EvalEnv& env);

// Roots of all corpus pages, the default evaluation context.
NodeSet corpus_roots(const Corpus& corpus);

} // namespace ixp

#endif
