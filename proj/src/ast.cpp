#include "inferxpath/ast.hpp"

#include <array>
#include <map>

#include "inferxpath/util.hpp"

namespace ixp {

namespace {

struct AxisInfo {
    Axis axis;
    const char* name;
};

constexpr std::array<AxisInfo, 21> kAxes = {{
    {Axis::Child, "child"},
    {Axis::Parent, "parent"},
    {Axis::Self, "self"},
    {Axis::Attribute, "attribute"},
    {Axis::Descendant, "descendant"},
    {Axis::DescendantOrSelf, "descendant-or-self"},
    {Axis::Ancestor, "ancestor"},
    {Axis::AncestorOrSelf, "ancestor-or-self"},
    {Axis::FollowingSibling, "following-sibling"},
    {Axis::PrecedingSibling, "preceding-sibling"},
    {Axis::Following, "following"},
    {Axis::Preceding, "preceding"},
    {Axis::Row, "row"},
    {Axis::Column, "column"},
    {Axis::ContainedIn, "contained-in"},
    {Axis::Overlaps, "overlaps"},
    {Axis::Right, "right"},
    {Axis::Left, "left"},
    {Axis::Up, "up"},
    {Axis::Down, "down"},
    {Axis::Link, "link"},
}};

struct FnInfo {
    FnName fn;
    const char* name;
    int min_arity;
    int max_arity; // -1 = unbounded
};

constexpr std::array<FnInfo, 13> kFns = {{
    {FnName::Text, "text", 0, 0},
    {FnName::Contains, "contains", 2, 2},
    {FnName::StartsWith, "starts-with", 2, 2},
    {FnName::Concat, "concat", 1, -1},
    {FnName::Count, "count", 1, 1},
    {FnName::Position, "position", 0, 0},
    {FnName::Last, "last", 0, 0},
    {FnName::Name, "name", 0, 1},
    {FnName::Link, "link", 1, 1},
    {FnName::FontFamily, "font-family", 0, 1},
    {FnName::FontStyle, "font-style", 0, 1},
    {FnName::ImageTags, "imagetags", 2, 2},
    {FnName::ImageTag, "imagetag", 3, 3},
}};

} // namespace

const char* axis_name(Axis a) {
    for (const auto& info : kAxes)
        if (info.axis == a)
            return info.name;
    return "?";
}

std::optional<Axis> axis_from_name(const std::string& name) {
    for (const auto& info : kAxes)
        if (name == info.name)
            return info.axis;
    return std::nullopt;
}

const char* fn_name(FnName f) {
    for (const auto& info : kFns)
        if (info.fn == f)
            return info.name;
    return "?";
}

std::optional<FnName> fn_from_name(const std::string& name) {
    for (const auto& info : kFns)
        if (name == info.name)
            return info.fn;
    return std::nullopt;
}

std::pair<int, int> fn_arity(FnName f) {
    for (const auto& info : kFns)
        if (info.fn == f)
            return {info.min_arity, info.max_arity};
    return {0, 0};
}

const char* compare_op_name(CompareOp op) {
    switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "?";
}

ExprPtr make_step(Axis a, NodeTest t, std::vector<ExprPtr> preds) {
    return std::make_shared<Expr>(Expr{Step{a, std::move(t), std::move(preds)}});
}
ExprPtr make_seq(ExprPtr lhs, ExprPtr rhs) {
    return std::make_shared<Expr>(Expr{Seq{std::move(lhs), std::move(rhs)}});
}
ExprPtr make_union(ExprPtr lhs, ExprPtr rhs) {
    return std::make_shared<Expr>(Expr{Union{std::move(lhs), std::move(rhs)}});
}
ExprPtr make_root() {
    return std::make_shared<Expr>(Expr{Root{}});
}
ExprPtr make_fn(FnName f, std::vector<ExprPtr> args) {
    return std::make_shared<Expr>(Expr{FnCall{f, std::move(args)}});
}
ExprPtr make_string(std::string s) {
    return std::make_shared<Expr>(Expr{Literal{std::move(s)}});
}
ExprPtr make_number(double v) {
    return std::make_shared<Expr>(Expr{Literal{v}});
}
ExprPtr make_comparison(CompareOp op, ExprPtr lhs, ExprPtr rhs) {
    return std::make_shared<Expr>(Expr{Comparison{op, std::move(lhs), std::move(rhs)}});
}
ExprPtr make_var(std::string name) {
    return std::make_shared<Expr>(Expr{VarRef{std::move(name)}});
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    if (a->node.index() != b->node.index())
        return false;
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const T& rhs = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, Step>) {
                if (lhs.axis != rhs.axis || !(lhs.test == rhs.test) ||
                    lhs.predicates.size() != rhs.predicates.size())
                    return false;
                for (std::size_t i = 0; i < lhs.predicates.size(); ++i)
                    if (!expr_equal(lhs.predicates[i], rhs.predicates[i]))
                        return false;
                return true;
            } else if constexpr (std::is_same_v<T, Seq>) {
                return expr_equal(lhs.lhs, rhs.lhs) && expr_equal(lhs.rhs, rhs.rhs);
            } else if constexpr (std::is_same_v<T, Union>) {
                return expr_equal(lhs.lhs, rhs.lhs) && expr_equal(lhs.rhs, rhs.rhs);
            } else if constexpr (std::is_same_v<T, Root>) {
                return true;
            } else if constexpr (std::is_same_v<T, FnCall>) {
                if (lhs.fn != rhs.fn || lhs.args.size() != rhs.args.size())
                    return false;
                for (std::size_t i = 0; i < lhs.args.size(); ++i)
                    if (!expr_equal(lhs.args[i], rhs.args[i]))
                        return false;
                return true;
            } else if constexpr (std::is_same_v<T, Literal>) {
                return lhs.value == rhs.value;
            } else if constexpr (std::is_same_v<T, Comparison>) {
                return lhs.op == rhs.op && expr_equal(lhs.lhs, rhs.lhs) &&
                       expr_equal(lhs.rhs, rhs.rhs);
            } else if constexpr (std::is_same_v<T, VarRef>) {
                return lhs.name == rhs.name;
            }
        },
        a->node);
}

// ----------------------------------------------------------------------------
// Pretty printer
// ----------------------------------------------------------------------------

namespace {

bool is_dos_node_step(const Expr& e) {
    const Step* s = std::get_if<Step>(&e.node);
    return s && s->axis == Axis::DescendantOrSelf && s->test.kind == NodeTest::Kind::AnyNode &&
           s->predicates.empty();
}

std::string print_expr(const ExprPtr& e);

std::string print_test(const NodeTest& t) {
    switch (t.kind) {
    case NodeTest::Kind::AnyElement: return "*";
    case NodeTest::Kind::Name: return t.name;
    case NodeTest::Kind::Text: return "text()";
    case NodeTest::Kind::AnyNode: return "node()";
    }
    return "?";
}

std::string print_string_literal(const std::string& s) {
    if (s.find('"') == std::string::npos)
        return "\"" + s + "\"";
    return "'" + s + "'";
}

// `standalone` marks a step that forms a whole path by itself, where the
// abbreviations "text()"/"node()" would re-parse as a function call or need
// explicit axis syntax to stay unambiguous.
std::string print_step(const Step& s, bool standalone) {
    std::string out;
    bool abbreviated = false;
    if (s.axis == Axis::Child && !(standalone && s.test.kind == NodeTest::Kind::Text)) {
        out = print_test(s.test);
        abbreviated = true;
    } else if (s.axis == Axis::Attribute &&
               (s.test.kind == NodeTest::Kind::Name ||
                s.test.kind == NodeTest::Kind::AnyElement)) {
        out = "@" + print_test(s.test);
        abbreviated = true;
    } else if (s.axis == Axis::Self && s.test.kind == NodeTest::Kind::AnyNode &&
               s.predicates.empty()) {
        return ".";
    } else if (s.axis == Axis::Parent && s.test.kind == NodeTest::Kind::AnyNode &&
               s.predicates.empty()) {
        return "..";
    }
    if (!abbreviated)
        out = std::string(axis_name(s.axis)) + "::" + print_test(s.test);
    for (const auto& p : s.predicates)
        out += "[" + print_expr(p) + "]";
    return out;
}

// Collect a Seq chain into its parts, left to right.
void seq_parts(const ExprPtr& e, std::vector<ExprPtr>& out) {
    if (const Seq* s = std::get_if<Seq>(&e->node)) {
        seq_parts(s->lhs, out);
        seq_parts(s->rhs, out);
    } else {
        out.push_back(e);
    }
}

std::string print_path(const ExprPtr& e) {
    std::vector<ExprPtr> parts;
    seq_parts(e, parts);

    std::string out;
    std::size_t i = 0;
    bool absolute = false;
    if (std::holds_alternative<Root>(parts[0]->node)) {
        absolute = true;
        ++i;
    }
    bool first = true;
    bool pending_dos = false;
    for (; i < parts.size(); ++i) {
        // "//" only abbreviates a non-leading descendant-or-self::node(),
        // or a leading one in an absolute path; a leading relative one must
        // stay explicit or it would re-parse as absolute
        if (is_dos_node_step(*parts[i]) && i + 1 < parts.size() && (!first || absolute)) {
            pending_dos = true;
            continue;
        }
        const Step* st = std::get_if<Step>(&parts[i]->node);
        std::string piece;
        if (st) {
            // a leading relative text() step would re-parse as the text()
            // function, so keep its axis explicit
            bool expression_position = !absolute && first;
            piece = print_step(*st, expression_position);
        } else {
            piece = print_expr(parts[i]);
        }
        if (pending_dos) {
            out += "//";
            pending_dos = false;
        } else if (!first || absolute) {
            out += "/";
        }
        out += piece;
        first = false;
    }
    if (pending_dos) // trailing descendant-or-self::node()
        out += (first && !absolute) ? "descendant-or-self::node()"
                                    : "/descendant-or-self::node()";
    if (out.empty())
        out = absolute ? "/" : ".";
    return out;
}

std::string print_expr(const ExprPtr& e) {
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Step>) {
                return print_step(n, true);
            } else if constexpr (std::is_same_v<T, Seq>) {
                return print_path(e);
            } else if constexpr (std::is_same_v<T, Root>) {
                return "/";
            } else if constexpr (std::is_same_v<T, Union>) {
                return print_expr(n.lhs) + "|" + print_expr(n.rhs);
            } else if constexpr (std::is_same_v<T, FnCall>) {
                std::string out = fn_name(n.fn);
                out += "(";
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i)
                        out += ",";
                    out += print_expr(n.args[i]);
                }
                out += ")";
                return out;
            } else if constexpr (std::is_same_v<T, Literal>) {
                if (const std::string* s = std::get_if<std::string>(&n.value))
                    return print_string_literal(*s);
                return number_to_string(std::get<double>(n.value));
            } else if constexpr (std::is_same_v<T, Comparison>) {
                return print_expr(n.lhs) + compare_op_name(n.op) + print_expr(n.rhs);
            } else if constexpr (std::is_same_v<T, VarRef>) {
                return "$" + n.name;
            }
        },
        e->node);
}

} // namespace

std::string pretty_print(const ExprPtr& e) {
    if (!e)
        return "";
    return print_expr(e);
}

int expr_size(const ExprPtr& e) {
    if (!e)
        return 0;
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Step>) {
                int total = n.axis == Axis::Self ? 0 : 1;
                for (const auto& p : n.predicates)
                    total += expr_size(p);
                return total;
            } else if constexpr (std::is_same_v<T, Seq> || std::is_same_v<T, Union>) {
                return expr_size(n.lhs) + expr_size(n.rhs);
            } else if constexpr (std::is_same_v<T, Root>) {
                return 0;
            } else if constexpr (std::is_same_v<T, FnCall>) {
                int total = 0;
                for (const auto& a : n.args)
                    total += expr_size(a);
                return total;
            } else if constexpr (std::is_same_v<T, Literal> || std::is_same_v<T, VarRef>) {
                return 0;
            } else if constexpr (std::is_same_v<T, Comparison>) {
                return expr_size(n.lhs) + expr_size(n.rhs);
            }
        },
        e->node);
}

bool flatten_path(const ExprPtr& e, bool& absolute, std::vector<Step>& steps) {
    absolute = false;
    steps.clear();
    std::vector<ExprPtr> parts;
    seq_parts(e, parts);
    std::size_t i = 0;
    if (!parts.empty() && std::holds_alternative<Root>(parts[0]->node)) {
        absolute = true;
        i = 1;
    }
    for (; i < parts.size(); ++i) {
        const Step* s = std::get_if<Step>(&parts[i]->node);
        if (!s)
            return false;
        steps.push_back(*s);
    }
    return true;
}

ExprPtr path_from_steps(bool absolute, const std::vector<Step>& steps) {
    ExprPtr e = absolute ? make_root() : nullptr;
    for (const Step& s : steps) {
        ExprPtr step = make_step(s.axis, s.test, s.predicates);
        e = e ? make_seq(std::move(e), std::move(step)) : std::move(step);
    }
    if (!e)
        e = absolute ? make_root() : make_step(Axis::Self, NodeTest::node());
    return e;
}

} // namespace ixp
