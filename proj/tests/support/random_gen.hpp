#ifndef TESTS_RANDOM_GEN_HPP
#define TESTS_RANDOM_GEN_HPP

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "inferxpath/ast.hpp"
#include "inferxpath/dom.hpp"

namespace testgen {

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) { // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0, 1)(rng) < p;
}

// Random document: elements from a small tag alphabet, text nodes, a few
// attributes, occasionally a comment. Root is always an element.
ixp::Document random_document(Rng& rng, int max_nodes, const std::string& url = "rand.html");

// Random core-XPath expression of at most `max_steps` steps: the twelve core
// axes, name/*/text()/node() tests, positional and comparison predicates,
// core functions, unions and an optional leading / or //.
ixp::ExprPtr random_core_expr(Rng& rng, const std::vector<std::string>& tags,
                              const std::vector<std::string>& attrs, int max_steps);

// Random syntactically valid AST over the full grammar, for round-trip tests.
ixp::ExprPtr random_ast(Rng& rng, int depth);

} // namespace testgen

#endif
