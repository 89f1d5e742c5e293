#include "support/path_oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace oracle {

using namespace ixp;

namespace {

constexpr int kMaxPositional = 10;

int rank_of(Axis a) {
    switch (a) {
    case Axis::Child:
    case Axis::Attribute: return 1;
    case Axis::FollowingSibling:
    case Axis::PrecedingSibling: return 2;
    case Axis::Descendant: return 3;
    case Axis::Parent: return 4;
    default: return 5;
    }
}

bool multi_of(Axis a) {
    return a == Axis::Descendant;
}

struct Enumerator {
    const OracleQuery& query;
    const refeval::RefEnv& env;
    std::optional<OracleCost> best = std::nullopt;

    std::map<NodeId, std::size_t> dense;
    std::vector<NodeId> by_dense;

    struct Letter {
        OracleCost cost;
        bool has_predicate = false;
        std::vector<std::vector<std::size_t>> adj; // dense -> dense results
    };
    std::vector<Letter> letters;
    std::vector<std::size_t> target_dense;

    void index_nodes() {
        for (const std::string& url : env.corpus->page_urls()) {
            auto doc = env.corpus->document(url);
            for (std::uint32_t i = 0; i < doc->size(); ++i) {
                NodeId id{url, i};
                dense[id] = by_dense.size();
                by_dense.push_back(id);
            }
        }
    }

    std::vector<std::vector<std::size_t>> adjacency_for(const Step& step) const {
        std::vector<std::vector<std::size_t>> adj(by_dense.size());
        for (std::size_t n = 0; n < by_dense.size(); ++n)
            for (const NodeId& m : refeval::ref_step(step, by_dense[n], env))
                adj[n].push_back(dense.at(m));
        return adj;
    }

    void build_alphabet() {
        const std::vector<Axis> axes = {Axis::Child,            Axis::Attribute,
                                        Axis::FollowingSibling, Axis::PrecedingSibling,
                                        Axis::Descendant,       Axis::Parent};
        std::set<std::string> tags, attr_names;
        std::set<std::pair<std::string, std::string>> attr_pairs;
        bool any_text = false;
        for (const std::string& url : env.corpus->page_urls()) {
            auto doc = env.corpus->document(url);
            for (std::uint32_t i = 0; i < doc->size(); ++i) {
                const Node& n = doc->node(i);
                if (n.kind == NodeKind::Element)
                    tags.insert(n.name);
                else if (n.kind == NodeKind::Text)
                    any_text = true;
                else if (n.kind == NodeKind::Attribute) {
                    attr_names.insert(n.name);
                    attr_pairs.insert({n.name, doc->text_content(i)});
                }
            }
        }

        for (Axis axis : axes) {
            std::vector<NodeTest> tests;
            if (axis == Axis::Attribute) {
                for (const auto& a : attr_names)
                    tests.push_back(NodeTest::named(a));
            } else {
                for (const auto& t : tags)
                    tests.push_back(NodeTest::named(t));
                if (any_text)
                    tests.push_back(NodeTest::text());
            }
            for (const NodeTest& test : tests) {
                OracleCost base{multi_of(axis) ? 1 : 0, rank_of(axis), 1};
                Letter plain{base, false, adjacency_for(Step{axis, test, {}})};
                bool alive = false;
                std::size_t max_list = 0;
                for (const auto& lst : plain.adj) {
                    alive = alive || !lst.empty();
                    max_list = std::max(max_list, lst.size());
                }
                if (!alive)
                    continue;
                letters.push_back(std::move(plain));

                if (max_list >= 2) {
                    int hi = static_cast<int>(std::min<std::size_t>(max_list, kMaxPositional));
                    for (int k = 1; k <= hi; ++k)
                        letters.push_back(Letter{
                            base, true,
                            adjacency_for(Step{axis, test, {make_number(k)}})});
                }
                if (axis != Axis::Attribute && test.kind != NodeTest::Kind::Text) {
                    for (const auto& [name, value] : attr_pairs) {
                        ExprPtr pred = make_comparison(
                            CompareOp::Eq,
                            make_step(Axis::Attribute, NodeTest::named(name)),
                            make_string(value));
                        letters.push_back(
                            Letter{OracleCost{base.multi, base.rank + 1, base.len + 1},
                                   true, adjacency_for(Step{axis, test, {pred}})});
                    }
                }
            }
        }
    }

    bool satisfied(const std::vector<std::size_t>& answer) const {
        if (query.exact)
            return answer == target_dense;
        return std::includes(answer.begin(), answer.end(), target_dense.begin(),
                             target_dense.end());
    }

    // Costs only grow along extensions, so a branch whose cost cannot go
    // below the best lexicographically can be cut.
    bool within_bound(const OracleCost& c) const {
        if (!best)
            return true;
        const OracleCost& b = *best;
        if (c.multi != b.multi)
            return c.multi < b.multi;
        if (c.rank != b.rank)
            return c.rank < b.rank;
        return c.len < b.len;
    }

    void dfs(const std::vector<std::size_t>& current, OracleCost cost, int depth,
             int preds) {
        for (const Letter& letter : letters) {
            if (letter.has_predicate && preds >= query.predicate_budget)
                continue;
            OracleCost next{cost.multi + letter.cost.multi, cost.rank + letter.cost.rank,
                            cost.len + letter.cost.len};
            if (!within_bound(next))
                continue;
            std::vector<std::size_t> answer;
            for (std::size_t n : current)
                answer.insert(answer.end(), letter.adj[n].begin(), letter.adj[n].end());
            std::sort(answer.begin(), answer.end());
            answer.erase(std::unique(answer.begin(), answer.end()), answer.end());
            if (answer.empty())
                continue;
            if (satisfied(answer) && within_bound(next))
                best = next;
            if (depth + 1 < query.depth)
                dfs(answer, next, depth + 1, preds + (letter.has_predicate ? 1 : 0));
        }
    }

    std::optional<OracleCost> run(std::optional<OracleCost> bound) {
        best = bound;
        bool bounded = bound.has_value();
        index_nodes();
        build_alphabet();

        std::set<std::size_t> tset;
        for (const NodeId& id : query.target)
            tset.insert(dense.at(id));
        target_dense.assign(tset.begin(), tset.end());

        std::set<std::size_t> sset;
        for (const NodeId& id : query.source)
            sset.insert(dense.at(id));
        std::vector<std::size_t> start(sset.begin(), sset.end());

        // the empty path (identity) costs nothing; it evaluates self::node(),
        // which drops comment nodes
        std::vector<std::size_t> identity;
        for (std::size_t n : start) {
            const NodeId& id = by_dense[n];
            if (env.corpus->document(id.page)->node(id.index).kind != NodeKind::Comment)
                identity.push_back(n);
        }
        if (satisfied(identity)) {
            OracleCost zero{0, 0, 0};
            if (!bounded || zero < *bound)
                return zero;
            return std::nullopt; // nothing can undercut a zero bound
        }
        if (query.depth > 0)
            dfs(start, OracleCost{0, 0, 0}, 0, 0);
        if (bounded && best == bound)
            return std::nullopt; // nothing cheaper than the bound exists
        return best;
    }
};

} // namespace

std::optional<OracleCost> cheapest_path(const OracleQuery& q, const refeval::RefEnv& env,
                                        std::optional<OracleCost> bound) {
    Enumerator e{.query = q, .env = env};
    return e.run(bound);
}

} // namespace oracle
