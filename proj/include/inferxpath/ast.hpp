#ifndef INFERXPATH_AST_HPP
#define INFERXPATH_AST_HPP

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "inferxpath/errors.hpp"

namespace ixp {

// XPath-BE axes: XPath 1.0 core plus table, visual and link extensions.
enum class Axis {
    Child,
    Parent,
    Self,
    Attribute,
    Descendant,
    DescendantOrSelf,
    Ancestor,
    AncestorOrSelf,
    FollowingSibling,
    PrecedingSibling,
    Following,
    Preceding,
    Row,
    Column,
    ContainedIn,
    Overlaps,
    Right,
    Left,
    Up,
    Down,
    Link,
};

const char* axis_name(Axis a);
std::optional<Axis> axis_from_name(const std::string& name);

struct NodeTest {
    enum class Kind { AnyElement, Name, Text, AnyNode };
    Kind kind = Kind::AnyElement;
    std::string name; // only for Kind::Name

    static NodeTest any() { return {Kind::AnyElement, ""}; }
    static NodeTest named(std::string n) { return {Kind::Name, std::move(n)}; }
    static NodeTest text() { return {Kind::Text, ""}; }
    static NodeTest node() { return {Kind::AnyNode, ""}; }

    friend bool operator==(const NodeTest&, const NodeTest&) = default;
};

enum class FnName {
    Text,
    Contains,
    StartsWith,
    Concat,
    Count,
    Position,
    Last,
    Name,
    Link,
    FontFamily,
    FontStyle,
    ImageTags,
    ImageTag,
};

const char* fn_name(FnName f);
std::optional<FnName> fn_from_name(const std::string& name);
// Inclusive arity range; max -1 means unbounded.
std::pair<int, int> fn_arity(FnName f);

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* compare_op_name(CompareOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Step {
    Axis axis = Axis::Child;
    NodeTest test;
    std::vector<ExprPtr> predicates;
};

struct Seq {
    ExprPtr lhs, rhs;
};

struct Union {
    ExprPtr lhs, rhs;
};

struct Root {};

struct FnCall {
    FnName fn;
    std::vector<ExprPtr> args;
};

struct Literal {
    std::variant<std::string, double> value;
};

struct Comparison {
    CompareOp op;
    ExprPtr lhs, rhs;
};

struct VarRef {
    std::string name;
};

struct Expr {
    std::variant<Step, Seq, Union, Root, FnCall, Literal, Comparison, VarRef> node;
};

ExprPtr make_step(Axis a, NodeTest t, std::vector<ExprPtr> preds = {});
ExprPtr make_seq(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_union(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_root();
ExprPtr make_fn(FnName f, std::vector<ExprPtr> args = {});
ExprPtr make_string(std::string s);
ExprPtr make_number(double v);
ExprPtr make_comparison(CompareOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_var(std::string name);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Canonical concrete syntax: abbreviations where available (//, @, ., ..),
// no spaces, predicates in brackets. parse(pretty_print(e)) == e.
std::string pretty_print(const ExprPtr& e);

// Number of Step nodes, recursing into predicates and function arguments.
// Self steps count zero, so the identity path "." has size 0.
int expr_size(const ExprPtr& e);

// Parse XPath-BE concrete syntax. Throws SyntaxError (with byte offset and
// expected-token set), ArityError, UnknownAxisError or UnknownFunctionError.
ExprPtr parse(const std::string& src);

// Flatten a pure path expression (Root / Seq chains of Steps) into its step
// list; returns false when the expression contains unions or non-step parts.
bool flatten_path(const ExprPtr& e, bool& absolute, std::vector<Step>& steps);
ExprPtr path_from_steps(bool absolute, const std::vector<Step>& steps);

} // namespace ixp

#endif
