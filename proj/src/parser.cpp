#include <cctype>
#include <string>
#include <vector>

#include "inferxpath/ast.hpp"
#include "inferxpath/util.hpp"

namespace ixp {

namespace {

enum class Tok {
    Name,      // tag / axis / function names, possibly with '-'
    Number,
    String,
    Variable,  // $name
    Slash,
    DoubleSlash,
    Dot,
    DotDot,
    At,
    Star,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Pipe,
    ColonColon,
    Eq,        // = or ==
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
    double number = 0;
};

const char* tok_label(Tok t) {
    switch (t) {
    case Tok::Name: return "name";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::Variable: return "variable";
    case Tok::Slash: return "/";
    case Tok::DoubleSlash: return "//";
    case Tok::Dot: return ".";
    case Tok::DotDot: return "..";
    case Tok::At: return "@";
    case Tok::Star: return "*";
    case Tok::LParen: return "(";
    case Tok::RParen: return ")";
    case Tok::LBracket: return "[";
    case Tok::RBracket: return "]";
    case Tok::Comma: return ",";
    case Tok::Pipe: return "|";
    case Tok::ColonColon: return "::";
    case Tok::Eq: return "=";
    case Tok::Ne: return "!=";
    case Tok::Lt: return "<";
    case Tok::Le: return "<=";
    case Tok::Gt: return ">";
    case Tok::Ge: return ">=";
    case Tok::End: return "end of input";
    }
    return "?";
}

bool name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](Tok k, std::size_t at, std::string text = {}) {
        out.push_back(Token{k, std::move(text), at});
    };
    while (i < src.size()) {
        char c = src[i];
        if (is_ascii_space(c)) {
            ++i;
            continue;
        }
        std::size_t at = i;
        switch (c) {
        case '/':
            if (i + 1 < src.size() && src[i + 1] == '/') {
                push(Tok::DoubleSlash, at);
                i += 2;
            } else {
                push(Tok::Slash, at);
                ++i;
            }
            continue;
        case '.':
            if (i + 1 < src.size() && src[i + 1] == '.') {
                push(Tok::DotDot, at);
                i += 2;
            } else {
                push(Tok::Dot, at);
                ++i;
            }
            continue;
        case '@': push(Tok::At, at); ++i; continue;
        case '*': push(Tok::Star, at); ++i; continue;
        case '(': push(Tok::LParen, at); ++i; continue;
        case ')': push(Tok::RParen, at); ++i; continue;
        case '[': push(Tok::LBracket, at); ++i; continue;
        case ']': push(Tok::RBracket, at); ++i; continue;
        case ',': push(Tok::Comma, at); ++i; continue;
        case '|': push(Tok::Pipe, at); ++i; continue;
        case ':':
            if (i + 1 < src.size() && src[i + 1] == ':') {
                push(Tok::ColonColon, at);
                i += 2;
                continue;
            }
            throw SyntaxError("unexpected ':' (namespaces are not supported)", at);
        case '=':
            if (i + 1 < src.size() && src[i + 1] == '=')
                i += 2;
            else
                ++i;
            push(Tok::Eq, at);
            continue;
        case '!':
            if (i + 1 < src.size() && src[i + 1] == '=') {
                push(Tok::Ne, at);
                i += 2;
                continue;
            }
            throw SyntaxError("unexpected '!'", at, {"!="});
        case '<':
            if (i + 1 < src.size() && src[i + 1] == '=') {
                push(Tok::Le, at);
                i += 2;
            } else {
                push(Tok::Lt, at);
                ++i;
            }
            continue;
        case '>':
            if (i + 1 < src.size() && src[i + 1] == '=') {
                push(Tok::Ge, at);
                i += 2;
            } else {
                push(Tok::Gt, at);
                ++i;
            }
            continue;
        case '\'':
        case '"': {
            char q = c;
            std::size_t end = src.find(q, i + 1);
            if (end == std::string::npos)
                throw SyntaxError("unterminated string literal", at);
            push(Tok::String, at, src.substr(i + 1, end - i - 1));
            i = end + 1;
            continue;
        }
        case '$': {
            ++i;
            if (i >= src.size() || !name_start(src[i]))
                throw SyntaxError("expected variable name after '$'", at);
            std::size_t start = i;
            while (i < src.size() && name_char(src[i]))
                ++i;
            push(Tok::Variable, at, src.substr(start, i - start));
            continue;
        }
        default:
            break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])))
                ++i;
            if (i + 1 < src.size() && src[i] == '.' &&
                std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
                ++i;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])))
                    ++i;
            }
            Token t{Tok::Number, src.substr(start, i - start), at};
            t.number = std::stod(t.text);
            out.push_back(std::move(t));
            continue;
        }
        if (name_start(c)) {
            std::size_t start = i;
            while (i < src.size() && name_char(src[i]))
                ++i;
            push(Tok::Name, at, src.substr(start, i - start));
            continue;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", at);
    }
    push(Tok::End, src.size());
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& src) : tokens_(lex(src)) {}

    ExprPtr run() {
        ExprPtr e = parse_expr();
        expect(Tok::End);
        return e;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;

    const Token& cur() const { return tokens_[pos_]; }
    const Token& ahead(std::size_t n = 1) const {
        return tokens_[std::min(pos_ + n, tokens_.size() - 1)];
    }
    bool at(Tok k) const { return cur().kind == k; }
    Token take() { return tokens_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) {
        throw SyntaxError(msg + " at offset " + std::to_string(cur().offset), cur().offset,
                          std::move(expected));
    }

    void expect(Tok k) {
        if (!at(k))
            fail(std::string("expected '") + tok_label(k) + "', found '" +
                     tok_label(cur().kind) + "'",
                 {tok_label(k)});
        ++pos_;
    }

    // Expr := Relational (("="|"!=") Relational)*
    ExprPtr parse_expr() {
        ExprPtr lhs = parse_relational();
        while (at(Tok::Eq) || at(Tok::Ne)) {
            CompareOp op = take().kind == Tok::Eq ? CompareOp::Eq : CompareOp::Ne;
            lhs = make_comparison(op, std::move(lhs), parse_relational());
        }
        return lhs;
    }

    ExprPtr parse_relational() {
        ExprPtr lhs = parse_union();
        while (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge)) {
            Tok k = take().kind;
            CompareOp op = k == Tok::Lt   ? CompareOp::Lt
                           : k == Tok::Le ? CompareOp::Le
                           : k == Tok::Gt ? CompareOp::Gt
                                          : CompareOp::Ge;
            lhs = make_comparison(op, std::move(lhs), parse_union());
        }
        return lhs;
    }

    ExprPtr parse_union() {
        ExprPtr lhs = parse_path();
        while (at(Tok::Pipe)) {
            take();
            lhs = make_union(std::move(lhs), parse_path());
        }
        return lhs;
    }

    ExprPtr parse_path() {
        if (at(Tok::Slash)) {
            take();
            ExprPtr e = make_root();
            if (starts_step())
                e = parse_relative(std::move(e));
            return e;
        }
        if (at(Tok::DoubleSlash)) {
            take();
            ExprPtr e = make_seq(make_root(),
                                 make_step(Axis::DescendantOrSelf, NodeTest::node()));
            return parse_relative(std::move(e));
        }
        ExprPtr primary = parse_primary();
        // a filter expression may continue as a path: link(//a)/h1
        if (at(Tok::Slash)) {
            take();
            return parse_relative(std::move(primary));
        }
        if (at(Tok::DoubleSlash)) {
            take();
            return parse_relative(make_seq(
                std::move(primary), make_step(Axis::DescendantOrSelf, NodeTest::node())));
        }
        return primary;
    }

    // Steps joined by '/' or '//'; lhs, when given, is the already-parsed
    // start of the chain.
    ExprPtr parse_relative(ExprPtr lhs) {
        ExprPtr e = std::move(lhs);
        for (;;) {
            ExprPtr step = parse_step();
            e = e ? make_seq(std::move(e), std::move(step)) : std::move(step);
            if (at(Tok::Slash)) {
                take();
            } else if (at(Tok::DoubleSlash)) {
                take();
                e = make_seq(std::move(e),
                             make_step(Axis::DescendantOrSelf, NodeTest::node()));
            } else {
                break;
            }
        }
        return e;
    }

    bool starts_step() const {
        switch (cur().kind) {
        case Tok::Dot:
        case Tok::DotDot:
        case Tok::At:
        case Tok::Star:
        case Tok::Name:
            return true;
        default:
            return false;
        }
    }

    ExprPtr parse_step() {
        if (at(Tok::Dot)) {
            take();
            return make_step(Axis::Self, NodeTest::node());
        }
        if (at(Tok::DotDot)) {
            take();
            return make_step(Axis::Parent, NodeTest::node());
        }
        if (at(Tok::At)) {
            take();
            NodeTest t = parse_name_or_star();
            return make_step(Axis::Attribute, std::move(t), parse_predicates());
        }
        if (at(Tok::Star)) {
            take();
            return make_step(Axis::Child, NodeTest::any(), parse_predicates());
        }
        if (at(Tok::Name)) {
            if (ahead().kind == Tok::ColonColon) {
                Token name = take();
                auto axis = axis_from_name(name.text);
                if (!axis)
                    throw UnknownAxisError("unknown axis '" + name.text + "'", name.offset);
                take(); // ::
                NodeTest t = parse_node_test(*axis);
                return make_step(*axis, std::move(t), parse_predicates());
            }
            if (ahead().kind == Tok::LParen) {
                Token name = cur();
                if (name.text == "text" || name.text == "node") {
                    take();
                    take();
                    expect(Tok::RParen);
                    NodeTest t = name.text == "text" ? NodeTest::text() : NodeTest::node();
                    return make_step(Axis::Child, std::move(t), parse_predicates());
                }
                fail("function call is not a step here");
            }
            Token name = take();
            return make_step(Axis::Child, NodeTest::named(name.text), parse_predicates());
        }
        fail("expected a step", {".", "..", "@", "*", "name"});
    }

    NodeTest parse_name_or_star() {
        if (at(Tok::Star)) {
            take();
            return NodeTest::any();
        }
        if (at(Tok::Name))
            return NodeTest::named(take().text);
        fail("expected attribute name or '*'", {"name", "*"});
    }

    NodeTest parse_node_test(Axis axis) {
        if (at(Tok::Star)) {
            take();
            return NodeTest::any();
        }
        if (at(Tok::Name)) {
            if (ahead().kind == Tok::LParen) {
                Token name = take();
                take();
                expect(Tok::RParen);
                if (name.text == "text")
                    return NodeTest::text();
                if (name.text == "node")
                    return NodeTest::node();
                throw SyntaxError("unknown node test '" + name.text + "()'", name.offset,
                                  {"text()", "node()"});
            }
            return NodeTest::named(take().text);
        }
        (void)axis;
        fail("expected node test", {"name", "*", "text()", "node()"});
    }

    std::vector<ExprPtr> parse_predicates() {
        std::vector<ExprPtr> preds;
        while (at(Tok::LBracket)) {
            take();
            preds.push_back(parse_expr());
            expect(Tok::RBracket);
        }
        return preds;
    }

    // Primary expressions: literals, variables, parentheses, function calls,
    // or a relative path starting at a step. `text()` in expression position
    // is the text() function; `node()` is only ever a node test.
    ExprPtr parse_primary() {
        switch (cur().kind) {
        case Tok::String:
            return make_string(take().text);
        case Tok::Number:
            return make_number(take().number);
        case Tok::Variable:
            return make_var(take().text);
        case Tok::LParen: {
            take();
            ExprPtr e = parse_expr();
            expect(Tok::RParen);
            return e;
        }
        case Tok::Name:
            if (ahead().kind == Tok::LParen && cur().text != "node") {
                Token name = cur();
                auto fn = fn_from_name(name.text);
                if (fn)
                    return parse_fn_call(*fn);
                if (axis_from_name(name.text))
                    break; // e.g. "row(" is malformed axis use, not a function
                throw UnknownFunctionError("unknown function '" + name.text + "'",
                                           name.offset);
            }
            break;
        default:
            break;
        }
        if (starts_step())
            return parse_relative(nullptr);
        fail("expected an expression");
    }

    ExprPtr parse_fn_call(FnName fn) {
        Token name = take();
        expect(Tok::LParen);
        std::vector<ExprPtr> args;
        if (!at(Tok::RParen)) {
            args.push_back(parse_expr());
            while (at(Tok::Comma)) {
                take();
                args.push_back(parse_expr());
            }
        }
        expect(Tok::RParen);
        auto [min_arity, max_arity] = fn_arity(fn);
        int n = static_cast<int>(args.size());
        if (n < min_arity || (max_arity >= 0 && n > max_arity))
            throw ArityError("function " + name.text + "() takes " +
                                 std::to_string(min_arity) +
                                 (max_arity < 0          ? "+"
                                  : max_arity > min_arity ? ".." + std::to_string(max_arity)
                                                          : "") +
                                 " arguments, got " + std::to_string(n),
                             name.offset);
        return make_fn(fn, std::move(args));
    }
};

} // namespace

ExprPtr parse(const std::string& src) {
    if (trim(src).empty())
        throw SyntaxError("empty expression", 0);
    return Parser(src).run();
}

} // namespace ixp
