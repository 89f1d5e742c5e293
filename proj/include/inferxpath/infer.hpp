#ifndef INFERXPATH_INFER_HPP
#define INFERXPATH_INFER_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "inferxpath/eval.hpp"
#include "inferxpath/semantic.hpp"

namespace ixp {

// Axis preference rank: child/attribute 1, siblings 2, descendant 3,
// parent/ancestor 4; table, visual and link axes rank 5 and only join the
// search when admitted explicitly. Self is free.
int axis_rank(Axis a);

// Axes that may jump multiple tree levels.
bool axis_multi_level(Axis a);

// Path complexity, compared lexicographically: steps on multi-level axes
// first, then the axis rank sum, then the step count (self steps free).
// Predicate contents count toward every component.
struct Cost {
    int multi_level = 0;
    int rank_sum = 0;
    int length = 0;

    friend bool operator==(const Cost&, const Cost&) = default;
    friend auto operator<=>(const Cost&, const Cost&) = default;
};

Cost cost_of(const ExprPtr& e);

enum class MatchMode { Exact, Sample };

struct Constraint {
    enum class Kind { WithPrefixExpr, WithPrefixSet, ByAxis, DropPrefix, WithinPrefix };
    Kind kind = Kind::ByAxis;
    ExprPtr expr;           // WithPrefixExpr / DropPrefix / WithinPrefix
    NodeSet set;            // WithPrefixSet
    std::vector<Axis> axes; // ByAxis

    static Constraint with_prefix(ExprPtr e);
    static Constraint with_prefix(NodeSet s);
    static Constraint by_axis(std::vector<Axis> axes);
    static Constraint drop_prefix(ExprPtr e);
    static Constraint within_prefix(ExprPtr e);
};

struct PathQuery {
    NodeSet source;
    NodeSet target;
    MatchMode mode = MatchMode::Exact;
    std::vector<Constraint> constraints;
    int limit = 10;
    int depth = 6;            // max steps per candidate
    int predicate_budget = 2; // max predicates per candidate
    int max_expansions = 500000;
};

struct RankedPath {
    ExprPtr expr;
    Cost cost;
    bool verified = false;
};

struct InferStats {
    int verifications = 0; // candidate re-evaluations through the evaluator
    int expansions = 0;
    bool space_exhausted = false; // bounded search space ran out
    bool bound_hit = false;       // stopped at the expansion valve
};

// Lazy best-first enumeration of connecting paths, cheapest cost first.
// Candidates are reconstructed backwards from the target (upward moves are
// tried first because prepending a child step is the cheapest extension),
// specialize node tests to the tag names observed, and grow positional or
// attribute-value predicates only where they change an answer set. Every
// emitted path has been re-evaluated against the query before emission.
class PathStream {
public:
    PathStream(PathQuery q, const EvalEnv& env);
    PathStream(PathStream&&) noexcept;
    ~PathStream();

    std::optional<RankedPath> next();
    const InferStats& stats() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Paths whose answer set from the source equals the target exactly.
PathStream all_paths(PathQuery q, const EvalEnv& env);

// Paths whose answer set contains every target node.
PathStream sample_paths(PathQuery q, const EvalEnv& env);

// Filter/rewrite semantics of one constraint on one candidate, evaluated
// against `origin`. Returns the (possibly rewritten) candidate, or nullopt
// when the constraint rejects it.
std::optional<ExprPtr> apply_constraint(const Constraint& c, const ExprPtr& candidate,
                                        const NodeSet& origin, const EvalEnv& env);

struct Table {
    std::vector<std::string> column_names; // key column first
    std::vector<std::string> column_paths; // inferred xpath per value column ("" for key)
    std::vector<Cost> column_costs;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> failed_columns; // value-set indices with no inferred path
};

// One row per key member: the key's text plus, per value set, the text of the
// inferred path applied to that member. Exact inference first, sample as the
// fallback; value sets that yield no path are recorded in failed_columns and
// omitted from the rows.
Table assemble_table(const SemanticSet& key, const std::vector<SemanticSet>& values,
                     const EvalEnv& env, int depth = 6, int max_expansions = 500000);

} // namespace ixp

#endif
