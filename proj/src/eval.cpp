#include "inferxpath/eval.hpp"

#include <algorithm>
#include <cmath>

#include "inferxpath/geometry.hpp"
#include "inferxpath/url.hpp"
#include "inferxpath/util.hpp"

namespace ixp {

// ----------------------------------------------------------------------------
// NodeSet
// ----------------------------------------------------------------------------

NodeSet::NodeSet(std::vector<NodeId> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

NodeSet NodeSet::single(NodeId id) {
    NodeSet s;
    s.items_.push_back(std::move(id));
    return s;
}

void NodeSet::insert(NodeId id) {
    auto it = std::lower_bound(items_.begin(), items_.end(), id);
    if (it == items_.end() || !(*it == id))
        items_.insert(it, std::move(id));
}

bool NodeSet::contains(const NodeId& id) const {
    return std::binary_search(items_.begin(), items_.end(), id);
}

NodeSet NodeSet::united(const NodeSet& other) const {
    NodeSet out;
    out.items_.reserve(items_.size() + other.items_.size());
    std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                   std::back_inserter(out.items_));
    return out;
}

bool NodeSet::subset_of(const NodeSet& other) const {
    return std::includes(other.items_.begin(), other.items_.end(), items_.begin(),
                         items_.end());
}

// ----------------------------------------------------------------------------
// EvalEnv
// ----------------------------------------------------------------------------

const Document& EvalEnv::document(const std::string& page) const {
    if (!corpus)
        throw EvalError("no corpus bound to evaluation environment");
    auto doc = corpus->document(page);
    if (!doc)
        throw EvalError("page not loaded: " + page);
    return *doc;
}

std::string EvalEnv::string_value(const NodeId& id) const {
    return document(id.page).text_content(id.index);
}

// ----------------------------------------------------------------------------
// Value coercions
// ----------------------------------------------------------------------------

bool value_truthy(const Value& v) {
    if (const NodeSet* ns = std::get_if<NodeSet>(&v))
        return !ns->empty();
    if (const std::string* s = std::get_if<std::string>(&v))
        return !s->empty();
    if (const double* d = std::get_if<double>(&v))
        return *d != 0 && !std::isnan(*d);
    return std::get<bool>(v);
}

std::string value_to_string(const Value& v, const EvalEnv& env) {
    if (const NodeSet* ns = std::get_if<NodeSet>(&v))
        return ns->empty() ? "" : env.string_value(ns->front());
    if (const std::string* s = std::get_if<std::string>(&v))
        return *s;
    if (const double* d = std::get_if<double>(&v))
        return number_to_string(*d);
    return std::get<bool>(v) ? "true" : "false";
}

double value_to_number(const Value& v, const EvalEnv& env) {
    if (const double* d = std::get_if<double>(&v))
        return *d;
    if (const bool* b = std::get_if<bool>(&v))
        return *b ? 1 : 0;
    return string_to_number(value_to_string(v, env));
}

// ----------------------------------------------------------------------------
// Evaluator
// ----------------------------------------------------------------------------

namespace {

bool test_matches(const NodeTest& test, const Node& node, Axis axis) {
    NodeKind principal = axis == Axis::Attribute ? NodeKind::Attribute : NodeKind::Element;
    switch (test.kind) {
    case NodeTest::Kind::AnyElement:
        return node.kind == principal;
    case NodeTest::Kind::Name:
        return node.kind == principal && node.name == test.name;
    case NodeTest::Kind::Text:
        return node.kind == NodeKind::Text;
    case NodeTest::Kind::AnyNode:
        return node.kind != NodeKind::Comment; // comments are invisible to axes
    }
    return false;
}

// End of the contiguous pre-order index range occupied by `n`'s subtree.
std::uint32_t subtree_end(const Document& doc, std::uint32_t n) {
    const Node& node = doc.node(n);
    std::uint32_t end = n + 1 + static_cast<std::uint32_t>(node.attributes.size());
    for (std::uint32_t c : node.children)
        end = subtree_end(doc, c);
    return end;
}

bool is_cell(const Node& n) {
    return n.kind == NodeKind::Element && (n.name == "td" || n.name == "th");
}

std::optional<std::uint32_t> nearest_named_ancestor(const Document& doc, std::uint32_t n,
                                                    const char* tag) {
    auto p = doc.node(n).parent;
    while (p) {
        if (doc.node(*p).kind == NodeKind::Element && doc.node(*p).name == tag)
            return p;
        p = doc.node(*p).parent;
    }
    return std::nullopt;
}

int colspan_of(const Document& doc, std::uint32_t cell) {
    std::string v = doc.attribute_value(cell, "colspan");
    double n = string_to_number(v);
    if (std::isnan(n) || n < 1)
        return 1;
    return static_cast<int>(n);
}

// Half-open grid interval occupied by a cell, colspan-aware: start is the sum
// of the preceding cell siblings' colspans.
std::pair<int, int> column_interval(const Document& doc, std::uint32_t cell) {
    int start = 0;
    auto parent = doc.node(cell).parent;
    if (parent) {
        for (std::uint32_t sib : doc.node(*parent).children) {
            if (sib == cell)
                break;
            if (is_cell(doc.node(sib)))
                start += colspan_of(doc, sib);
        }
    }
    return {start, start + colspan_of(doc, cell)};
}

struct Focus {
    std::optional<NodeId> node;
    int position = 0;
    int size = 0;
};

class Evaluator {
public:
    explicit Evaluator(const EvalEnv& env) : env_(env), budget_(env.max_fetch) {}

    Value eval(const ExprPtr& e, const NodeSet& ctx, const Focus& focus);

    // Axis result in axis order (reverse axes nearest-first), test-filtered.
    std::vector<NodeId> axis_list(Axis axis, const NodeTest& test, const NodeId& from);

    NodeSet eval_step(const Step& s, const NodeSet& ctx);

    Value call(FnName fn, const std::vector<Value>& args, const Focus& focus);

    int* budget() { return &budget_; }

private:
    const EvalEnv& env_;
    int budget_;

    const Document& doc(const NodeId& id) const { return env_.document(id.page); }

    void collect_descendants(const Document& d, std::uint32_t n,
                             std::vector<std::uint32_t>& out) const;
    std::vector<NodeId> link_targets(const NodeId& from);
    std::vector<NodeId> visual_axis(Axis axis, const NodeId& from);
    std::vector<NodeId> row_axis(const NodeId& from);
    std::vector<NodeId> column_axis(const NodeId& from);

    Value compare(CompareOp op, const Value& lhs, const Value& rhs);
    bool equal_values(const Value& lhs, const Value& rhs);
    std::optional<NodeId> first_of(const Value& v) const;
    std::string font_lookup(const NodeId& id, bool family) const;
};

void Evaluator::collect_descendants(const Document& d, std::uint32_t n,
                                    std::vector<std::uint32_t>& out) const {
    for (std::uint32_t c : d.node(n).children) {
        if (d.node(c).kind == NodeKind::Comment)
            continue;
        out.push_back(c);
        collect_descendants(d, c, out);
    }
}

std::vector<NodeId> Evaluator::link_targets(const NodeId& from) {
    const Node& n = doc(from).node(from.index);
    if (n.kind != NodeKind::Attribute && n.kind != NodeKind::Text)
        return {};
    auto url = resolve_url(from.page, n.value);
    if (!url || env_.fetcher == nullptr)
        return {};
    try {
        auto target = env_.fetcher->fetch(*url, &budget_);
        return {NodeId{target->url(), target->root()}};
    } catch (const FetchBudgetError&) {
        throw;
    } catch (const FetchError&) {
        return {}; // dead links fail closed
    }
}

std::vector<NodeId> Evaluator::visual_axis(Axis axis, const NodeId& from) {
    if (!env_.corpus)
        return {};
    const GeometryIndex& geom = env_.corpus->geometry(from.page);
    std::vector<std::uint32_t> hits;
    double eps = env_.epsilon;
    switch (axis) {
    case Axis::ContainedIn: hits = geom.contained_in(from.index, eps); break;
    case Axis::Overlaps: hits = geom.overlapping(from.index, eps); break;
    case Axis::Right: hits = geom.right_of(from.index, eps); break;
    case Axis::Left: hits = geom.left_of(from.index, eps); break;
    case Axis::Up: hits = geom.above(from.index, eps); break;
    case Axis::Down: hits = geom.below(from.index, eps); break;
    default: break;
    }
    std::vector<NodeId> out;
    out.reserve(hits.size());
    for (std::uint32_t h : hits)
        out.push_back(NodeId{from.page, h});
    return out;
}

std::vector<NodeId> Evaluator::row_axis(const NodeId& from) {
    const Document& d = doc(from);
    const Node& n = d.node(from.index);
    std::vector<std::uint32_t> cells;
    if (n.kind == NodeKind::Element && n.name == "tr") {
        for (std::uint32_t c : n.children)
            if (is_cell(d.node(c)))
                cells.push_back(c);
    } else if (is_cell(n)) {
        auto tr = nearest_named_ancestor(d, from.index, "tr");
        if (!tr)
            return {};
        std::vector<std::uint32_t> sub;
        collect_descendants(d, *tr, sub);
        for (std::uint32_t c : sub)
            if (is_cell(d.node(c)) && nearest_named_ancestor(d, c, "tr") == tr)
                cells.push_back(c);
    }
    std::vector<NodeId> out;
    for (std::uint32_t c : cells)
        out.push_back(NodeId{from.page, c});
    return out;
}

std::vector<NodeId> Evaluator::column_axis(const NodeId& from) {
    const Document& d = doc(from);
    if (!is_cell(d.node(from.index)))
        return {};
    auto table = nearest_named_ancestor(d, from.index, "table");
    if (!table)
        return {};
    auto [lo, hi] = column_interval(d, from.index);
    std::vector<std::uint32_t> sub;
    collect_descendants(d, *table, sub);
    std::vector<NodeId> out;
    for (std::uint32_t c : sub) {
        if (!is_cell(d.node(c)))
            continue;
        // row/column never cross a nested table boundary
        if (nearest_named_ancestor(d, c, "table") != table)
            continue;
        auto [clo, chi] = column_interval(d, c);
        if (clo < hi && lo < chi)
            out.push_back(NodeId{from.page, c});
    }
    return out;
}

std::vector<NodeId> Evaluator::axis_list(Axis axis, const NodeTest& test,
                                         const NodeId& from) {
    const Document& d = doc(from);
    const Node& n = d.node(from.index);
    std::vector<NodeId> raw;

    auto push = [&](std::uint32_t i) { raw.push_back(NodeId{from.page, i}); };

    switch (axis) {
    case Axis::Child:
        for (std::uint32_t c : n.children)
            push(c);
        break;
    case Axis::Parent:
        if (n.parent)
            push(*n.parent);
        break;
    case Axis::Self:
        push(from.index);
        break;
    case Axis::Attribute:
        for (std::uint32_t a : n.attributes)
            push(a);
        break;
    case Axis::Descendant: {
        std::vector<std::uint32_t> sub;
        collect_descendants(d, from.index, sub);
        for (std::uint32_t c : sub)
            push(c);
        break;
    }
    case Axis::DescendantOrSelf: {
        push(from.index);
        std::vector<std::uint32_t> sub;
        collect_descendants(d, from.index, sub);
        for (std::uint32_t c : sub)
            push(c);
        break;
    }
    case Axis::Ancestor: {
        auto p = n.parent;
        while (p) {
            push(*p);
            p = d.node(*p).parent;
        }
        break;
    }
    case Axis::AncestorOrSelf: {
        push(from.index);
        auto p = n.parent;
        while (p) {
            push(*p);
            p = d.node(*p).parent;
        }
        break;
    }
    case Axis::FollowingSibling: {
        if (n.kind == NodeKind::Attribute || !n.parent)
            break;
        const auto& sibs = d.node(*n.parent).children;
        auto it = std::find(sibs.begin(), sibs.end(), from.index);
        if (it != sibs.end())
            for (++it; it != sibs.end(); ++it)
                if (d.node(*it).kind != NodeKind::Comment)
                    push(*it);
        break;
    }
    case Axis::PrecedingSibling: {
        if (n.kind == NodeKind::Attribute || !n.parent)
            break;
        const auto& sibs = d.node(*n.parent).children;
        auto it = std::find(sibs.begin(), sibs.end(), from.index);
        std::vector<std::uint32_t> before(sibs.begin(), it);
        for (auto r = before.rbegin(); r != before.rend(); ++r) // nearest first
            if (d.node(*r).kind != NodeKind::Comment)
                push(*r);
        break;
    }
    case Axis::Following: {
        std::uint32_t start = subtree_end(d, from.index);
        for (std::uint32_t i = start; i < d.size(); ++i) {
            NodeKind k = d.node(i).kind;
            if (k != NodeKind::Attribute && k != NodeKind::Comment)
                push(i);
        }
        break;
    }
    case Axis::Preceding: {
        for (std::uint32_t i = from.index; i-- > 0;) {
            NodeKind k = d.node(i).kind;
            if (k == NodeKind::Attribute || k == NodeKind::Comment)
                continue;
            if (d.is_ancestor(i, from.index))
                continue;
            push(i); // nearest first: reverse document order
        }
        break;
    }
    case Axis::Row:
        raw = row_axis(from);
        break;
    case Axis::Column:
        raw = column_axis(from);
        break;
    case Axis::ContainedIn:
    case Axis::Overlaps:
    case Axis::Right:
    case Axis::Left:
    case Axis::Up:
    case Axis::Down:
        raw = visual_axis(axis, from);
        break;
    case Axis::Link:
        raw = link_targets(from);
        break;
    }

    std::vector<NodeId> out;
    out.reserve(raw.size());
    for (const NodeId& id : raw)
        if (test_matches(test, env_.document(id.page).node(id.index), axis))
            out.push_back(id);
    return out;
}

NodeSet Evaluator::eval_step(const Step& s, const NodeSet& ctx) {
    NodeSet out;
    for (const NodeId& n : ctx) {
        std::vector<NodeId> list = axis_list(s.axis, s.test, n);
        for (const ExprPtr& pred : s.predicates) {
            std::vector<NodeId> kept;
            int size = static_cast<int>(list.size());
            for (int i = 0; i < size; ++i) {
                Focus f{list[i], i + 1, size};
                Value v = eval(pred, NodeSet::single(list[i]), f);
                bool keep;
                if (const double* num = std::get_if<double>(&v))
                    keep = *num == i + 1; // numeric predicate selects by position
                else
                    keep = value_truthy(v);
                if (keep)
                    kept.push_back(list[i]);
            }
            list = std::move(kept);
        }
        for (NodeId& id : list)
            out.insert(std::move(id));
    }
    return out;
}

std::optional<NodeId> Evaluator::first_of(const Value& v) const {
    const NodeSet* ns = std::get_if<NodeSet>(&v);
    if (!ns || ns->empty())
        return std::nullopt;
    return ns->front();
}

std::string Evaluator::font_lookup(const NodeId& id, bool family) const {
    const Annotations* ann = env_.corpus ? env_.corpus->annotations(id.page) : nullptr;
    if (!ann)
        return "";
    const auto& table = family ? ann->font_family : ann->font_style;
    const Document& d = doc(id);
    std::optional<std::uint32_t> cur = id.index;
    while (cur) { // fonts inherit: nearest annotated ancestor wins
        auto it = table.find(*cur);
        if (it != table.end())
            return it->second;
        cur = d.node(*cur).parent;
    }
    return "";
}

Value Evaluator::call(FnName fn, const std::vector<Value>& args, const Focus& focus) {
    switch (fn) {
    case FnName::Text:
        return focus.node ? env_.string_value(*focus.node) : std::string();
    case FnName::Contains: {
        std::string a = value_to_string(args[0], env_);
        std::string b = value_to_string(args[1], env_);
        return a.find(b) != std::string::npos;
    }
    case FnName::StartsWith: {
        std::string a = value_to_string(args[0], env_);
        std::string b = value_to_string(args[1], env_);
        return starts_with(a, b);
    }
    case FnName::Concat: {
        // node-set arguments concatenate over every node, in document order
        std::string out;
        for (const Value& arg : args) {
            if (const NodeSet* ns = std::get_if<NodeSet>(&arg)) {
                for (const NodeId& id : *ns)
                    out += env_.string_value(id);
            } else {
                out += value_to_string(arg, env_);
            }
        }
        return out;
    }
    case FnName::Count: {
        const NodeSet* ns = std::get_if<NodeSet>(&args[0]);
        if (!ns)
            throw TypeError("count() requires a node-set");
        return static_cast<double>(ns->size());
    }
    case FnName::Position:
        return static_cast<double>(focus.position);
    case FnName::Last:
        return static_cast<double>(focus.size);
    case FnName::Name: {
        std::optional<NodeId> id = args.empty() ? focus.node : first_of(args[0]);
        if (!id)
            return std::string();
        return doc(*id).node(id->index).name;
    }
    case FnName::Link: {
        const NodeSet* ns = std::get_if<NodeSet>(&args[0]);
        if (!ns)
            throw TypeError("link() requires a node-set");
        NodeSet out;
        for (const NodeId& id : *ns)
            for (NodeId& t : link_targets(id))
                out.insert(std::move(t));
        return out;
    }
    case FnName::FontFamily:
    case FnName::FontStyle: {
        std::optional<NodeId> id = args.empty() ? focus.node : first_of(args[0]);
        if (!id)
            return std::string();
        return font_lookup(*id, fn == FnName::FontFamily);
    }
    case FnName::ImageTags:
    case FnName::ImageTag: {
        std::string model = value_to_string(args[0], env_);
        const NodeSet* ns = std::get_if<NodeSet>(&args[1]);
        if (!ns)
            throw TypeError(std::string(fn_name(fn)) + "() requires a node-set argument");
        std::vector<ImageTag> tags;
        for (const NodeId& id : *ns) {
            const Node& n = doc(id).node(id.index);
            if (n.kind != NodeKind::Element || n.name != "img")
                continue;
            const Annotations* ann = env_.corpus->annotations(id.page);
            if (!ann)
                continue;
            auto it = ann->image_tags.find({model, id.index});
            if (it == ann->image_tags.end())
                continue;
            tags.insert(tags.end(), it->second.begin(), it->second.end());
        }
        if (fn == FnName::ImageTag) {
            std::string wanted = value_to_string(args[2], env_);
            for (const ImageTag& t : tags)
                if (t.tag == wanted && t.confidence >= env_.tag_confidence)
                    return true;
            return false;
        }
        std::stable_sort(tags.begin(), tags.end(),
                         [](const ImageTag& a, const ImageTag& b) {
                             return a.confidence > b.confidence;
                         });
        std::string out;
        for (const ImageTag& t : tags) {
            if (!out.empty())
                out += ' ';
            out += t.tag;
        }
        return out;
    }
    }
    throw EvalError("unhandled function");
}

bool Evaluator::equal_values(const Value& lhs, const Value& rhs) {
    // XPath 1.0 equality: booleans dominate, then numbers, then strings;
    // node-sets compare existentially.
    const NodeSet* lns = std::get_if<NodeSet>(&lhs);
    const NodeSet* rns = std::get_if<NodeSet>(&rhs);
    if (lns && rns) {
        for (const NodeId& a : *lns) {
            std::string sa = env_.string_value(a);
            for (const NodeId& b : *rns)
                if (sa == env_.string_value(b))
                    return true;
        }
        return false;
    }
    if (lns || rns) {
        const NodeSet* ns = lns ? lns : rns;
        const Value& other = lns ? rhs : lhs;
        if (const bool* b = std::get_if<bool>(&other))
            return !ns->empty() == *b;
        if (const double* d = std::get_if<double>(&other)) {
            for (const NodeId& id : *ns)
                if (string_to_number(env_.string_value(id)) == *d)
                    return true;
            return false;
        }
        const std::string& s = std::get<std::string>(other);
        for (const NodeId& id : *ns)
            if (env_.string_value(id) == s)
                return true;
        return false;
    }
    if (std::holds_alternative<bool>(lhs) || std::holds_alternative<bool>(rhs))
        return value_truthy(lhs) == value_truthy(rhs);
    if (std::holds_alternative<double>(lhs) || std::holds_alternative<double>(rhs))
        return value_to_number(lhs, env_) == value_to_number(rhs, env_);
    return std::get<std::string>(lhs) == std::get<std::string>(rhs);
}

Value Evaluator::compare(CompareOp op, const Value& lhs, const Value& rhs) {
    if (op == CompareOp::Eq)
        return equal_values(lhs, rhs);
    if (op == CompareOp::Ne)
        return !equal_values(lhs, rhs);

    // relational comparison is numeric; node-sets compare existentially
    auto numbers_of = [&](const Value& v) {
        std::vector<double> out;
        if (const NodeSet* ns = std::get_if<NodeSet>(&v)) {
            for (const NodeId& id : *ns)
                out.push_back(string_to_number(env_.string_value(id)));
        } else {
            out.push_back(value_to_number(v, env_));
        }
        return out;
    };
    for (double a : numbers_of(lhs)) {
        for (double b : numbers_of(rhs)) {
            bool hit = false;
            switch (op) {
            case CompareOp::Lt: hit = a < b; break;
            case CompareOp::Le: hit = a <= b; break;
            case CompareOp::Gt: hit = a > b; break;
            case CompareOp::Ge: hit = a >= b; break;
            default: break;
            }
            if (hit)
                return true;
        }
    }
    return false;
}

Value Evaluator::eval(const ExprPtr& e, const NodeSet& ctx, const Focus& focus) {
    return std::visit(
        [&](const auto& n) -> Value {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Step>) {
                return eval_step(n, ctx);
            } else if constexpr (std::is_same_v<T, Seq>) {
                Value lhs = eval(n.lhs, ctx, focus);
                const NodeSet* ns = std::get_if<NodeSet>(&lhs);
                if (!ns)
                    throw TypeError("path step applied to a non-node-set");
                return eval(n.rhs, *ns, focus);
            } else if constexpr (std::is_same_v<T, Union>) {
                Value lhs = eval(n.lhs, ctx, focus);
                Value rhs = eval(n.rhs, ctx, focus);
                const NodeSet* l = std::get_if<NodeSet>(&lhs);
                const NodeSet* r = std::get_if<NodeSet>(&rhs);
                if (!l || !r)
                    throw TypeError("union requires node-sets on both sides");
                return l->united(*r);
            } else if constexpr (std::is_same_v<T, Root>) {
                NodeSet out;
                for (const NodeId& id : ctx)
                    out.insert(NodeId{id.page, 0});
                return out;
            } else if constexpr (std::is_same_v<T, FnCall>) {
                std::vector<Value> args;
                args.reserve(n.args.size());
                for (const ExprPtr& a : n.args)
                    args.push_back(eval(a, ctx, focus));
                Focus f = focus;
                if (!f.node && !ctx.empty())
                    f = Focus{ctx.front(), 1, static_cast<int>(ctx.size())};
                return call(n.fn, args, f);
            } else if constexpr (std::is_same_v<T, Literal>) {
                if (const std::string* s = std::get_if<std::string>(&n.value))
                    return *s;
                return std::get<double>(n.value);
            } else if constexpr (std::is_same_v<T, Comparison>) {
                Value lhs = eval(n.lhs, ctx, focus);
                Value rhs = eval(n.rhs, ctx, focus);
                return compare(n.op, lhs, rhs);
            } else if constexpr (std::is_same_v<T, VarRef>) {
                auto it = env_.variables.find(n.name);
                if (it == env_.variables.end())
                    throw UnknownVariableError("unbound variable $" + n.name);
                return it->second;
            }
        },
        e->node);
}

} // namespace

Value evaluate(const ExprPtr& e, const NodeSet& context, const EvalEnv& env) {
    if (!e)
        throw EvalError("null expression");
    Evaluator ev(env);
    Focus focus;
    if (!context.empty())
        focus = Focus{context.front(), 1, static_cast<int>(context.size())};
    return ev.eval(e, context, focus);
}

NodeSet evaluate_nodes(const ExprPtr& e, const NodeSet& context, const EvalEnv& env) {
    Value v = evaluate(e, context, env);
    NodeSet* ns = std::get_if<NodeSet>(&v);
    if (!ns)
        throw TypeError("expression does not yield a node-set: " + pretty_print(e));
    return std::move(*ns);
}

NodeSet axis_step(Axis axis, const NodeTest& test, const NodeId& from, const EvalEnv& env) {
    Evaluator ev(env);
    NodeSet out;
    for (NodeId& id : ev.axis_list(axis, test, from))
        out.insert(std::move(id));
    return out;
}

NodeSet step_from_node(const Step& step, const NodeId& from, const EvalEnv& env) {
    Evaluator ev(env);
    return ev.eval_step(step, NodeSet::single(from));
}

Value eval_function(FnName fn, const std::vector<Value>& args,
                    const std::optional<NodeId>& context, const EvalEnv& env) {
    Evaluator ev(env);
    Focus focus;
    if (context)
        focus = Focus{*context, 1, 1};
    return ev.call(fn, args, focus);
}

NodeSet corpus_roots(const Corpus& corpus) {
    NodeSet out;
    for (const std::string& url : corpus.page_urls())
        out.insert(NodeId{url, 0});
    return out;
}

} // namespace ixp
