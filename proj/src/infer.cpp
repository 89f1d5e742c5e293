#include "inferxpath/infer.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <set>
#include <unordered_map>

#include "inferxpath/util.hpp"

namespace ixp {

// ----------------------------------------------------------------------------
// Cost model
// ----------------------------------------------------------------------------

int axis_rank(Axis a) {
    switch (a) {
    case Axis::Self: return 0;
    case Axis::Child:
    case Axis::Attribute: return 1;
    case Axis::FollowingSibling:
    case Axis::PrecedingSibling: return 2;
    case Axis::Descendant:
    case Axis::DescendantOrSelf: return 3;
    case Axis::Parent:
    case Axis::Ancestor:
    case Axis::AncestorOrSelf: return 4;
    default: return 5; // table, visual, link, following/preceding
    }
}

bool axis_multi_level(Axis a) {
    switch (a) {
    case Axis::Descendant:
    case Axis::DescendantOrSelf:
    case Axis::Ancestor:
    case Axis::AncestorOrSelf:
    case Axis::Following:
    case Axis::Preceding: return true;
    default: return false;
    }
}

Cost cost_of(const ExprPtr& e) {
    Cost c;
    if (!e)
        return c;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Step>) {
                if (n.axis != Axis::Self) {
                    c.multi_level += axis_multi_level(n.axis) ? 1 : 0;
                    c.rank_sum += axis_rank(n.axis);
                    c.length += 1;
                }
                for (const auto& p : n.predicates) {
                    Cost pc = cost_of(p);
                    c.multi_level += pc.multi_level;
                    c.rank_sum += pc.rank_sum;
                    c.length += pc.length;
                }
            } else if constexpr (std::is_same_v<T, Seq> || std::is_same_v<T, Union>) {
                Cost l = cost_of(n.lhs), r = cost_of(n.rhs);
                c = Cost{l.multi_level + r.multi_level, l.rank_sum + r.rank_sum,
                         l.length + r.length};
            } else if constexpr (std::is_same_v<T, FnCall>) {
                for (const auto& a : n.args) {
                    Cost ac = cost_of(a);
                    c.multi_level += ac.multi_level;
                    c.rank_sum += ac.rank_sum;
                    c.length += ac.length;
                }
            } else if constexpr (std::is_same_v<T, Comparison>) {
                Cost l = cost_of(n.lhs), r = cost_of(n.rhs);
                c = Cost{l.multi_level + r.multi_level, l.rank_sum + r.rank_sum,
                         l.length + r.length};
            }
            // Root, Literal, VarRef cost nothing
        },
        e->node);
    return c;
}

// ----------------------------------------------------------------------------
// Constraints
// ----------------------------------------------------------------------------

Constraint Constraint::with_prefix(ExprPtr e) {
    Constraint c;
    c.kind = Kind::WithPrefixExpr;
    c.expr = std::move(e);
    return c;
}
Constraint Constraint::with_prefix(NodeSet s) {
    Constraint c;
    c.kind = Kind::WithPrefixSet;
    c.set = std::move(s);
    return c;
}
Constraint Constraint::by_axis(std::vector<Axis> axes) {
    Constraint c;
    c.kind = Kind::ByAxis;
    c.axes = std::move(axes);
    return c;
}
Constraint Constraint::drop_prefix(ExprPtr e) {
    Constraint c;
    c.kind = Kind::DropPrefix;
    c.expr = std::move(e);
    return c;
}
Constraint Constraint::within_prefix(ExprPtr e) {
    Constraint c;
    c.kind = Kind::WithinPrefix;
    c.expr = std::move(e);
    return c;
}

// ----------------------------------------------------------------------------
// Search internals
// ----------------------------------------------------------------------------

namespace {

constexpr int kMaxPositional = 10;
constexpr std::size_t kMaxAttrPredicates = 16;

struct Universe {
    struct Page {
        std::string url;
        std::uint32_t offset = 0;
        std::uint32_t count = 0;
    };
    std::vector<Page> pages; // sorted by url
    std::uint32_t total = 0;

    std::optional<std::uint32_t> dense(const NodeId& id) const {
        for (const Page& p : pages)
            if (p.url == id.page)
                return id.index < p.count ? std::optional(p.offset + id.index)
                                          : std::nullopt;
        return std::nullopt;
    }

    NodeId node_id(std::uint32_t dense_id) const {
        for (const Page& p : pages)
            if (dense_id >= p.offset && dense_id < p.offset + p.count)
                return NodeId{p.url, dense_id - p.offset};
        return NodeId{};
    }
};

// Flat dynamic bitsets: per universe node, the set of target members its
// suffix evaluation reaches plus one bit for "reaches non-target nodes too".
struct Abstraction {
    std::vector<std::uint64_t> reach; // node_count * words
    std::vector<std::uint64_t> dirty; // node_count bits

    static std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }
};

struct SearchEntry {
    Cost cost;
    std::string pretty;
    std::uint64_t seq = 0;
    std::vector<Step> steps; // forward order; steps[0] runs first
    int preds_used = 0;
    std::uint64_t state_hash = 0;
};

struct EntryOrder {
    bool operator()(const SearchEntry& a, const SearchEntry& b) const {
        if (a.cost != b.cost)
            return a.cost > b.cost; // min-heap
        if (a.pretty != b.pretty)
            return a.pretty > b.pretty;
        return a.seq > b.seq;
    }
};

struct Letter {
    Step step;
    Cost cost;
    bool has_predicate = false;
    std::vector<std::vector<std::uint32_t>> adj; // per dense node, dense results
};

std::uint64_t fnv1a(const std::uint64_t* data, std::size_t n, std::uint64_t seed) {
    std::uint64_t h = seed ^ 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
        h ^= h >> 29;
    }
    return h;
}

} // namespace

struct PathStream::Impl {
    PathQuery query;
    const EvalEnv& env;
    InferStats stats;

    Universe universe;
    std::uint32_t node_count = 0;
    std::size_t target_words = 0;
    std::vector<std::uint32_t> target_dense;       // dense ids of target members
    std::map<std::uint32_t, std::size_t> target_ix; // dense id -> member bit
    std::vector<std::uint32_t> source_dense;
    std::vector<std::uint64_t> full_mask;

    std::vector<Letter> letters;
    std::vector<Axis> admitted;
    std::optional<std::vector<Axis>> first_axis_filter;
    std::optional<NodeSet> zone_set; // withinPrefix answer set
    std::vector<char> in_zone;       // per dense node
    ExprPtr prefix_expr;             // withPrefixExpr
    Cost prefix_cost;
    NodeSet search_source;           // after prefix/set rewiring
    NodeSet verify_origin;           // context for verification
    std::vector<ExprPtr> drop_prefixes;

    std::priority_queue<SearchEntry, std::vector<SearchEntry>, EntryOrder> frontier;
    // state hash -> Pareto frontier of (cost, depth_used, preds_used)
    std::unordered_map<std::uint64_t, std::vector<std::tuple<Cost, int, int>>> expanded;
    std::uint64_t next_seq = 0;
    int emitted = 0;
    bool finished = false;

    Impl(PathQuery q, const EvalEnv& e) : query(std::move(q)), env(e) {}

    // --- setup ---------------------------------------------------------------

    void build() {
        if (query.source.empty())
            throw EmptySourceError("inference source set is empty");
        if (query.target.empty())
            throw EmptyTargetError("inference target set is empty");

        search_source = query.source;
        verify_origin = query.source;
        admitted = {Axis::Child, Axis::Attribute, Axis::FollowingSibling,
                    Axis::PrecedingSibling, Axis::Descendant, Axis::Parent};

        for (const Constraint& c : query.constraints) {
            switch (c.kind) {
            case Constraint::Kind::ByAxis: {
                first_axis_filter = c.axes;
                for (Axis a : c.axes)
                    if (std::find(admitted.begin(), admitted.end(), a) == admitted.end())
                        admitted.push_back(a);
                break;
            }
            case Constraint::Kind::WithPrefixExpr: {
                prefix_expr = c.expr;
                prefix_cost = cost_of(c.expr);
                search_source = evaluate_nodes(c.expr, query.source, env);
                if (search_source.empty())
                    throw EmptySourceError("withPrefix answer set is empty");
                break;
            }
            case Constraint::Kind::WithPrefixSet:
                search_source = c.set;
                verify_origin = c.set;
                if (search_source.empty())
                    throw EmptySourceError("withPrefix node set is empty");
                break;
            case Constraint::Kind::WithinPrefix: {
                NodeSet w = evaluate_nodes(c.expr, corpus_roots(*env.corpus), env);
                if (w.empty())
                    throw EvalError("withinPrefix scope evaluates to an empty set: " +
                                    pretty_print(c.expr));
                zone_set = std::move(w);
                break;
            }
            case Constraint::Kind::DropPrefix:
                drop_prefixes.push_back(c.expr);
                break;
            }
        }

        build_universe();
        build_letters();
        push_initial();
    }

    void build_universe() {
        std::set<std::string> urls;
        for (const NodeId& id : search_source)
            urls.insert(id.page);
        for (const NodeId& id : query.target)
            urls.insert(id.page);
        std::uint32_t offset = 0;
        for (const std::string& url : urls) {
            const Document& doc = env.document(url);
            universe.pages.push_back({url, offset, doc.size()});
            offset += doc.size();
        }
        universe.total = offset;
        node_count = offset;

        for (const NodeId& id : query.target) {
            auto d = universe.dense(id);
            if (!d)
                continue;
            target_ix[*d] = target_dense.size();
            target_dense.push_back(*d);
        }
        target_words = Abstraction::words_for(target_dense.size());
        full_mask.assign(target_words, 0);
        for (std::size_t j = 0; j < target_dense.size(); ++j)
            full_mask[j / 64] |= 1ULL << (j % 64);

        for (const NodeId& id : search_source)
            if (auto d = universe.dense(id))
                source_dense.push_back(*d);

        in_zone.assign(node_count, 1);
        if (zone_set) {
            std::fill(in_zone.begin(), in_zone.end(), 0);
            for (const Universe::Page& p : universe.pages) {
                const Document& doc = env.document(p.url);
                std::vector<std::uint32_t> roots;
                for (const NodeId& w : *zone_set)
                    if (w.page == p.url)
                        roots.push_back(w.index);
                if (roots.empty())
                    continue;
                for (std::uint32_t i = 0; i < doc.size(); ++i)
                    for (std::uint32_t r : roots)
                        if (i == r || doc.is_ancestor(r, i)) {
                            in_zone[p.offset + i] = 1;
                            break;
                        }
            }
        }
    }

    std::vector<std::uint32_t> step_adjacency(const Step& s, std::uint32_t dense_from) {
        NodeId from = universe.node_id(dense_from);
        NodeSet result = step_from_node(s, from, env);
        std::vector<std::uint32_t> out;
        for (const NodeId& id : result) {
            auto d = universe.dense(id);
            if (d && in_zone[*d])
                out.push_back(*d);
        }
        return out;
    }

    void add_letter(Step step) {
        Letter letter;
        letter.cost = Cost{axis_multi_level(step.axis) ? 1 : 0, axis_rank(step.axis), 1};
        for (const ExprPtr& p : step.predicates) {
            Cost pc = cost_of(p);
            letter.cost.multi_level += pc.multi_level;
            letter.cost.rank_sum += pc.rank_sum;
            letter.cost.length += pc.length;
        }
        letter.has_predicate = !step.predicates.empty();
        letter.adj.resize(node_count);
        bool any = false;
        for (std::uint32_t n = 0; n < node_count; ++n) {
            letter.adj[n] = step_adjacency(step, n);
            any = any || !letter.adj[n].empty();
        }
        if (!any)
            return; // unsatisfiable everywhere
        letter.step = std::move(step);
        letters.push_back(std::move(letter));
    }

    void build_letters() {
        for (Axis axis : admitted) {
            // observe what the axis yields anywhere in the universe
            std::set<std::string> names;
            bool any_text = false;
            std::size_t max_list = 0;
            for (std::uint32_t n = 0; n < node_count; ++n) {
                NodeId from = universe.node_id(n);
                NodeSet all = axis_step(axis, NodeTest::node(), from, env);
                for (const NodeId& id : all) {
                    auto d = universe.dense(id);
                    if (!d || !in_zone[*d])
                        continue;
                    const Node& node = env.document(id.page).node(id.index);
                    if (node.kind == NodeKind::Element || node.kind == NodeKind::Attribute)
                        names.insert(node.name);
                    else if (node.kind == NodeKind::Text)
                        any_text = true;
                }
            }

            std::vector<NodeTest> tests;
            if (axis == Axis::Link) {
                tests.push_back(NodeTest::any());
            } else {
                for (const std::string& name : names)
                    tests.push_back(NodeTest::named(name));
                if (any_text && axis != Axis::Attribute)
                    tests.push_back(NodeTest::text());
            }

            for (const NodeTest& test : tests) {
                std::size_t before = letters.size();
                add_letter(Step{axis, test, {}});
                if (letters.size() == before)
                    continue; // base letter dead, predicates would be too
                // push_back below invalidates references into letters
                const std::vector<std::vector<std::uint32_t>> base_adj = letters.back().adj;

                // positional predicates only where some list can shrink
                max_list = 0;
                for (const auto& lst : base_adj)
                    max_list = std::max(max_list, lst.size());
                if (max_list >= 2) {
                    int hi = static_cast<int>(std::min<std::size_t>(max_list, kMaxPositional));
                    for (int k = 1; k <= hi; ++k)
                        add_letter(Step{axis, test, {make_number(k)}});
                }

                // attribute/value predicates drawn from the observed results
                if (axis != Axis::Attribute && !(test.kind == NodeTest::Kind::Text)) {
                    std::set<std::pair<std::string, std::string>> pairs;
                    for (std::uint32_t n = 0; n < node_count && pairs.size() < kMaxAttrPredicates;
                         ++n) {
                        for (std::uint32_t d : base_adj[n]) {
                            NodeId id = universe.node_id(d);
                            const Node& node = env.document(id.page).node(id.index);
                            if (node.kind != NodeKind::Element)
                                continue;
                            for (std::uint32_t a : node.attributes) {
                                const Node& attr = env.document(id.page).node(a);
                                pairs.insert({attr.name, normalize_ws(attr.value)});
                                if (pairs.size() >= kMaxAttrPredicates)
                                    break;
                            }
                        }
                    }
                    for (const auto& [name, value] : pairs) {
                        ExprPtr pred = make_comparison(
                            CompareOp::Eq, make_step(Axis::Attribute, NodeTest::named(name)),
                            make_string(value));
                        std::size_t at = letters.size();
                        add_letter(Step{axis, test, {pred}});
                        // drop variants that never change the base answer
                        if (letters.size() > at && letters.back().adj == base_adj)
                            letters.pop_back();
                    }
                }
            }
        }
    }

    // --- abstraction ----------------------------------------------------------

    Abstraction initial_state() const {
        Abstraction st;
        st.reach.assign(static_cast<std::size_t>(node_count) * target_words, 0);
        st.dirty.assign(Abstraction::words_for(node_count), 0);
        for (std::uint32_t n = 0; n < node_count; ++n) {
            // comments are invisible to every axis including self::node(),
            // so they contribute nothing to any answer
            NodeId id = universe.node_id(n);
            if (env.document(id.page).node(id.index).kind == NodeKind::Comment)
                continue;
            auto it = target_ix.find(n);
            if (it != target_ix.end())
                st.reach[n * target_words + it->second / 64] |= 1ULL
                                                               << (it->second % 64);
            else
                st.dirty[n / 64] |= 1ULL << (n % 64);
        }
        return st;
    }

    Abstraction apply_letter(const Letter& letter, const Abstraction& prev) const {
        Abstraction st;
        st.reach.assign(static_cast<std::size_t>(node_count) * target_words, 0);
        st.dirty.assign(Abstraction::words_for(node_count), 0);
        for (std::uint32_t n = 0; n < node_count; ++n) {
            std::uint64_t* row = &st.reach[n * target_words];
            bool dirty = false;
            for (std::uint32_t m : letter.adj[n]) {
                const std::uint64_t* src = &prev.reach[m * target_words];
                for (std::size_t w = 0; w < target_words; ++w)
                    row[w] |= src[w];
                dirty = dirty || (prev.dirty[m / 64] >> (m % 64)) & 1;
            }
            if (dirty)
                st.dirty[n / 64] |= 1ULL << (n % 64);
        }
        return st;
    }

    std::uint64_t hash_state(const Abstraction& st) const {
        std::uint64_t h = fnv1a(st.reach.data(), st.reach.size(), 0x9e3779b97f4a7c15ULL);
        return fnv1a(st.dirty.data(), st.dirty.size(), h);
    }

    Abstraction state_for(const std::vector<Step>& steps) const {
        Abstraction st = initial_state();
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
            // rebuild by prepending, so locate the matching letter
            const Letter* letter = find_letter(*it);
            if (!letter)
                throw Error("internal: search step has no matching letter");
            st = apply_letter(*letter, st);
        }
        return st;
    }

    const Letter* find_letter(const Step& s) const {
        for (const Letter& l : letters) {
            if (l.step.axis != s.axis || !(l.step.test == s.test) ||
                l.step.predicates.size() != s.predicates.size())
                continue;
            bool same = true;
            for (std::size_t i = 0; i < s.predicates.size() && same; ++i)
                same = expr_equal(l.step.predicates[i], s.predicates[i]);
            if (same)
                return &l;
        }
        return nullptr;
    }

    bool goal(const Abstraction& st) const {
        std::vector<std::uint64_t> covered(target_words, 0);
        bool dirty = false;
        for (std::uint32_t n : source_dense) {
            const std::uint64_t* row = &st.reach[n * target_words];
            for (std::size_t w = 0; w < target_words; ++w)
                covered[w] |= row[w];
            dirty = dirty || ((st.dirty[n / 64] >> (n % 64)) & 1);
        }
        for (std::size_t w = 0; w < target_words; ++w)
            if ((covered[w] & full_mask[w]) != full_mask[w])
                return false;
        if (query.mode == MatchMode::Exact)
            return !dirty && covered == full_mask;
        return true;
    }

    // No prefix can ever assemble the target from what this state offers.
    bool hopeless(const Abstraction& st) const {
        std::vector<std::uint64_t> achievable(target_words, 0);
        for (std::uint32_t n = 0; n < node_count; ++n) {
            if (query.mode == MatchMode::Exact) {
                // only clean, target-only values can contribute to an exact match
                if ((st.dirty[n / 64] >> (n % 64)) & 1)
                    continue;
            }
            const std::uint64_t* row = &st.reach[n * target_words];
            for (std::size_t w = 0; w < target_words; ++w)
                achievable[w] |= row[w];
        }
        for (std::size_t w = 0; w < target_words; ++w)
            if ((achievable[w] & full_mask[w]) != full_mask[w])
                return true;
        return false;
    }

    // --- candidates ------------------------------------------------------------

    ExprPtr compose(const std::vector<Step>& steps) const {
        ExprPtr path = steps.empty() ? make_step(Axis::Self, NodeTest::node())
                                     : path_from_steps(false, steps);
        if (!prefix_expr)
            return path;
        if (steps.empty())
            return prefix_expr;
        return make_seq(prefix_expr, std::move(path));
    }

    void push_initial() {
        Abstraction st = initial_state();
        if (hopeless(st))
            return;
        SearchEntry e;
        e.cost = prefix_cost;
        e.steps = {};
        e.preds_used = 0;
        e.state_hash = hash_state(st);
        e.pretty = pretty_print(compose(e.steps));
        e.seq = next_seq++;
        frontier.push(std::move(e));
    }

    bool first_step_admitted(const std::vector<Step>& steps) const {
        if (!first_axis_filter)
            return true;
        if (prefix_expr) {
            // the prefix supplies the first step; check its leading axis
            bool absolute = false;
            std::vector<Step> prefix_steps;
            if (flatten_path(prefix_expr, absolute, prefix_steps) && !prefix_steps.empty())
                return std::count(first_axis_filter->begin(), first_axis_filter->end(),
                                  prefix_steps.front().axis) > 0;
            return false;
        }
        if (steps.empty())
            return false; // "." has no starting axis
        return std::count(first_axis_filter->begin(), first_axis_filter->end(),
                          steps.front().axis) > 0;
    }

    // Full answer-set check from the origin, plus - under withinPrefix - a
    // step-by-step walk of the searched suffix confirming every intermediate
    // answer stays inside the scope. An explicit withPrefix segment is the
    // caller's own context path and is exempt from the zone.
    bool verify(const ExprPtr& expr, const std::vector<Step>& suffix) {
        ++stats.verifications;
        NodeSet answer;
        try {
            answer = evaluate_nodes(expr, verify_origin, env);
        } catch (const EvalError&) {
            return false;
        }
        bool match = query.mode == MatchMode::Exact ? answer == query.target
                                                    : query.target.subset_of(answer);
        if (!match)
            return false;
        if (zone_set) {
            NodeSet ctx = search_source;
            for (const Step& s : suffix) {
                NodeSet next;
                for (const NodeId& n : ctx)
                    for (const NodeId& m : step_from_node(s, n, env))
                        next.insert(m);
                for (const NodeId& m : next) {
                    auto d = universe.dense(m);
                    if (!d || !in_zone[*d])
                        return false;
                }
                ctx = std::move(next);
            }
        }
        return true;
    }

    ExprPtr apply_drops(ExprPtr expr) const {
        for (const ExprPtr& drop : drop_prefixes) {
            auto trimmed = apply_constraint(Constraint::drop_prefix(drop), expr,
                                            verify_origin, env);
            if (trimmed)
                expr = *trimmed;
        }
        return expr;
    }

    std::optional<RankedPath> next() {
        if (finished || emitted >= query.limit)
            return std::nullopt;
        while (!frontier.empty()) {
            if (stats.expansions >= query.max_expansions) {
                stats.bound_hit = true;
                finished = true;
                return std::nullopt;
            }
            SearchEntry entry = frontier.top();
            frontier.pop();

            Abstraction st = state_for(entry.steps);
            int depth_used = static_cast<int>(entry.steps.size());

            // expansion dedupe: skip when a dominating visit already expanded
            bool dominated = false;
            auto& fr = expanded[entry.state_hash];
            for (const auto& [cost, depth, preds] : fr) {
                if (cost <= entry.cost && depth <= depth_used && preds <= entry.preds_used) {
                    dominated = true;
                    break;
                }
            }

            std::optional<RankedPath> hit;
            if (goal(st) && first_step_admitted(entry.steps)) {
                ExprPtr expr = compose(entry.steps);
                if (verify(expr, entry.steps)) {
                    ExprPtr final_expr = apply_drops(expr);
                    hit = RankedPath{final_expr, cost_of(final_expr), true};
                }
            }

            if (!dominated) {
                fr.emplace_back(entry.cost, depth_used, entry.preds_used);
                ++stats.expansions;
                if (depth_used < query.depth)
                    expand(entry, st);
            }

            if (hit) {
                ++emitted;
                if (emitted >= query.limit)
                    finished = true;
                return hit;
            }
        }
        stats.space_exhausted = true;
        finished = true;
        return std::nullopt;
    }

    void expand(const SearchEntry& entry, const Abstraction& st) {
        for (const Letter& letter : letters) {
            if (letter.has_predicate && entry.preds_used >= query.predicate_budget)
                continue;
            Abstraction child = apply_letter(letter, st);
            if (hopeless(child))
                continue;
            SearchEntry e;
            e.cost = Cost{entry.cost.multi_level + letter.cost.multi_level,
                          entry.cost.rank_sum + letter.cost.rank_sum,
                          entry.cost.length + letter.cost.length};
            e.steps.reserve(entry.steps.size() + 1);
            e.steps.push_back(letter.step); // prepend: new step runs first
            e.steps.insert(e.steps.end(), entry.steps.begin(), entry.steps.end());
            e.preds_used = entry.preds_used + (letter.has_predicate ? 1 : 0);
            e.state_hash = hash_state(child);

            // push dedupe against already-expanded dominating visits
            bool dominated = false;
            auto it = expanded.find(e.state_hash);
            if (it != expanded.end()) {
                int depth = static_cast<int>(e.steps.size());
                for (const auto& [cost, d, p] : it->second)
                    if (cost <= e.cost && d <= depth && p <= e.preds_used) {
                        dominated = true;
                        break;
                    }
            }
            if (dominated)
                continue;
            e.pretty = pretty_print(compose(e.steps));
            e.seq = next_seq++;
            frontier.push(std::move(e));
        }
    }
};

PathStream::PathStream(PathQuery q, const EvalEnv& env)
    : impl_(std::make_unique<Impl>(std::move(q), env)) {
    impl_->build();
}

PathStream::PathStream(PathStream&&) noexcept = default;
PathStream::~PathStream() = default;

std::optional<RankedPath> PathStream::next() {
    return impl_->next();
}

const InferStats& PathStream::stats() const {
    return impl_->stats;
}

PathStream all_paths(PathQuery q, const EvalEnv& env) {
    q.mode = MatchMode::Exact;
    return PathStream(std::move(q), env);
}

PathStream sample_paths(PathQuery q, const EvalEnv& env) {
    q.mode = MatchMode::Sample;
    return PathStream(std::move(q), env);
}

// ----------------------------------------------------------------------------
// Constraint application on finished candidates
// ----------------------------------------------------------------------------

namespace {

// Answer sets of every leading segment of a step path, origin first.
std::vector<NodeSet> segment_answers(const std::vector<Step>& steps, bool absolute,
                                     const NodeSet& origin, const EvalEnv& env) {
    std::vector<NodeSet> out;
    NodeSet ctx = origin;
    if (absolute) {
        NodeSet roots;
        for (const NodeId& id : ctx)
            roots.insert(NodeId{id.page, 0});
        ctx = std::move(roots);
    }
    out.push_back(ctx);
    for (const Step& s : steps) {
        NodeSet next;
        for (const NodeId& n : ctx)
            for (const NodeId& m : step_from_node(s, n, env))
                next.insert(m);
        ctx = std::move(next);
        out.push_back(ctx);
    }
    return out;
}

} // namespace

std::optional<ExprPtr> apply_constraint(const Constraint& c, const ExprPtr& candidate,
                                        const NodeSet& origin, const EvalEnv& env) {
    bool absolute = false;
    std::vector<Step> steps;
    bool is_path = flatten_path(candidate, absolute, steps);

    switch (c.kind) {
    case Constraint::Kind::ByAxis: {
        if (!is_path || steps.empty())
            return std::nullopt;
        for (Axis a : c.axes)
            if (steps.front().axis == a)
                return candidate;
        return std::nullopt;
    }
    case Constraint::Kind::WithPrefixExpr: {
        // structural prefix match first
        bool pabs = false;
        std::vector<Step> psteps;
        if (is_path && flatten_path(c.expr, pabs, psteps) && pabs == absolute &&
            psteps.size() <= steps.size()) {
            bool same = true;
            for (std::size_t i = 0; i < psteps.size() && same; ++i) {
                same = psteps[i].axis == steps[i].axis && psteps[i].test == steps[i].test &&
                       psteps[i].predicates.size() == steps[i].predicates.size();
                for (std::size_t k = 0; same && k < psteps[i].predicates.size(); ++k)
                    same = expr_equal(psteps[i].predicates[k], steps[i].predicates[k]);
            }
            if (same)
                return candidate;
        }
        // otherwise: some leading segment answers exactly the prefix's set
        if (!is_path)
            return std::nullopt;
        NodeSet prefix_answer = evaluate_nodes(c.expr, origin, env);
        for (const NodeSet& seg : segment_answers(steps, absolute, origin, env))
            if (seg == prefix_answer)
                return candidate;
        return std::nullopt;
    }
    case Constraint::Kind::WithPrefixSet: {
        if (!is_path)
            return std::nullopt;
        for (const NodeSet& seg : segment_answers(steps, absolute, origin, env))
            if (seg == c.set)
                return candidate;
        return std::nullopt;
    }
    case Constraint::Kind::DropPrefix: {
        if (!is_path)
            return candidate;
        NodeSet drop_answer = evaluate_nodes(c.expr, origin, env);
        auto answers = segment_answers(steps, absolute, origin, env);
        std::size_t cut = 0;
        for (std::size_t k = 0; k < answers.size(); ++k)
            if (answers[k] == drop_answer)
                cut = k; // longest leading segment wins
        if (cut == 0)
            return candidate;
        std::vector<Step> rest(steps.begin() + cut, steps.end());
        return path_from_steps(false, rest);
    }
    case Constraint::Kind::WithinPrefix: {
        if (!is_path)
            return std::nullopt;
        NodeSet scope = evaluate_nodes(c.expr, corpus_roots(*env.corpus), env);
        auto answers = segment_answers(steps, absolute, origin, env);
        auto inside = [&](const NodeId& id) {
            const Document& doc = env.document(id.page);
            for (const NodeId& w : scope)
                if (w.page == id.page &&
                    (w.index == id.index || doc.is_ancestor(w.index, id.index)))
                    return true;
            return false;
        };
        for (std::size_t k = 1; k < answers.size(); ++k)
            for (const NodeId& id : answers[k])
                if (!inside(id))
                    return std::nullopt;
        return candidate;
    }
    }
    return candidate;
}

// ----------------------------------------------------------------------------
// Table assembly
// ----------------------------------------------------------------------------

Table assemble_table(const SemanticSet& key, const std::vector<SemanticSet>& values,
                     const EvalEnv& env, int depth, int max_expansions) {
    if (key.members.empty())
        throw EmptySourceError("table key set is empty");

    Table table;
    table.column_names.push_back(key.name);
    table.column_paths.push_back("");
    table.column_costs.push_back(Cost{});

    std::vector<ExprPtr> column_exprs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const SemanticSet& v = values[i];
        if (v.members.empty())
            throw EmptyTargetError("table value set '" + v.name + "' is empty");
        PathQuery q;
        q.source = key.members;
        q.target = v.members;
        q.limit = 1;
        q.depth = depth;
        q.max_expansions = max_expansions;

        std::optional<RankedPath> found;
        {
            PathStream exact(q, env);
            found = exact.next();
        }
        if (!found) {
            PathQuery sq = q;
            sq.mode = MatchMode::Sample;
            PathStream sample(std::move(sq), env);
            found = sample.next();
        }
        if (!found) {
            table.failed_columns.push_back(i);
            continue;
        }
        column_exprs.push_back(found->expr);
        table.column_names.push_back(v.name);
        table.column_paths.push_back(pretty_print(found->expr));
        table.column_costs.push_back(found->cost);
    }

    for (const NodeId& k : key.members) {
        std::vector<std::string> row;
        row.push_back(env.string_value(k));
        for (const ExprPtr& e : column_exprs) {
            NodeSet cell = evaluate_nodes(e, NodeSet::single(k), env);
            row.push_back(cell.empty() ? "" : env.string_value(cell.front()));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace ixp
