#include "inferxpath/html.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "inferxpath/util.hpp"

namespace ixp {

namespace {

// ----------------------------------------------------------------------------
// Charset handling
// ----------------------------------------------------------------------------

bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = s[i];
        std::size_t extra;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
            extra = 1;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
        } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
            extra = 3;
        } else {
            return false;
        }
        if (i + extra >= s.size())
            return false;
        for (std::size_t k = 1; k <= extra; ++k)
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80)
                return false;
        i += extra + 1;
    }
    return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
        cp = 0xFFFD;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// windows-1252 high range (0x80..0x9F); 0x81 etc. map to the replacement char
constexpr std::array<std::uint16_t, 32> kCp1252High = {
    0x20AC, 0xFFFD, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0xFFFD, 0x017D, 0xFFFD,
    0xFFFD, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0xFFFD, 0x017E, 0xFFFD};

std::string from_cp1252(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        if (c < 0x80)
            out.push_back(static_cast<char>(c));
        else if (c < 0xA0)
            append_utf8(out, kCp1252High[c - 0x80]);
        else
            append_utf8(out, c);
    }
    return out;
}

std::string utf8_replacing_invalid(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = s[i];
        std::size_t extra = 0;
        if (c < 0x80)
            extra = 0;
        else if ((c & 0xE0) == 0xC0 && c >= 0xC2)
            extra = 1;
        else if ((c & 0xF0) == 0xE0)
            extra = 2;
        else if ((c & 0xF8) == 0xF0 && c <= 0xF4)
            extra = 3;
        else {
            append_utf8(out, 0xFFFD);
            ++i;
            continue;
        }
        bool ok = i + extra < s.size();
        for (std::size_t k = 1; ok && k <= extra; ++k)
            ok = (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
        if (!ok) {
            append_utf8(out, 0xFFFD);
            ++i;
            continue;
        }
        out.append(s.substr(i, extra + 1));
        i += extra + 1;
    }
    return out;
}

// Scan the prefix for <meta charset=...> / http-equiv declarations.
std::optional<std::string> declared_charset(std::string_view s) {
    std::string head = lower_ascii(s.substr(0, std::min<std::size_t>(s.size(), 2048)));
    auto find_value = [&](std::size_t pos) -> std::optional<std::string> {
        while (pos < head.size() && (is_ascii_space(head[pos]) || head[pos] == '='))
            ++pos;
        if (pos >= head.size())
            return std::nullopt;
        char quote = 0;
        if (head[pos] == '"' || head[pos] == '\'')
            quote = head[pos++];
        std::string v;
        while (pos < head.size()) {
            char c = head[pos];
            if (quote ? c == quote
                      : (is_ascii_space(c) || c == '>' || c == '/' || c == ';' || c == '"'))
                break;
            v.push_back(c);
            ++pos;
        }
        return trim(v);
    };
    std::size_t p = head.find("charset");
    if (p == std::string::npos)
        return std::nullopt;
    return find_value(p + 7);
}

// Decode bytes to UTF-8 text. Unknown declared charsets raise CharsetError;
// undeclared non-UTF-8 content falls back to windows-1252, which never fails.
std::string decode_charset(std::string_view bytes) {
    // strip a UTF-8 BOM
    if (starts_with(bytes, "\xEF\xBB\xBF"))
        bytes.remove_prefix(3);
    auto declared = declared_charset(bytes);
    if (declared && !declared->empty()) {
        const std::string& cs = *declared;
        if (cs == "utf-8" || cs == "utf8" || cs == "us-ascii" || cs == "ascii")
            return utf8_replacing_invalid(bytes);
        if (cs == "iso-8859-1" || cs == "latin-1" || cs == "latin1" ||
            cs == "windows-1252" || cs == "cp1252")
            return from_cp1252(bytes);
        throw CharsetError("unsupported charset declaration: " + cs);
    }
    if (valid_utf8(bytes))
        return std::string(bytes);
    return from_cp1252(bytes);
}

// ----------------------------------------------------------------------------
// Entities
// ----------------------------------------------------------------------------

const std::map<std::string, std::uint32_t>& named_entities() {
    static const std::map<std::string, std::uint32_t> m = {
        {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},
        {"apos", '\''},    {"nbsp", 0xA0},    {"copy", 0xA9},    {"reg", 0xAE},
        {"deg", 0xB0},     {"middot", 0xB7},  {"laquo", 0xAB},   {"raquo", 0xBB},
        {"times", 0xD7},   {"divide", 0xF7},  {"ndash", 0x2013}, {"mdash", 0x2014},
        {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D},
        {"bull", 0x2022},  {"hellip", 0x2026}, {"trade", 0x2122}, {"euro", 0x20AC},
        {"pound", 0xA3},   {"yen", 0xA5},     {"cent", 0xA2},    {"sect", 0xA7},
        {"plusmn", 0xB1},  {"frac12", 0xBD},  {"eacute", 0xE9},  {"egrave", 0xE8},
        {"agrave", 0xE0},  {"uuml", 0xFC},    {"ouml", 0xF6},    {"auml", 0xE4},
        {"szlig", 0xDF},   {"ccedil", 0xE7},  {"ntilde", 0xF1},  {"larr", 0x2190},
        {"rarr", 0x2192},  {"harr", 0x2194},  {"dagger", 0x2020},
    };
    return m;
}

} // namespace

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c != '&') {
            out.push_back(c);
            ++i;
            continue;
        }
        std::size_t semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 32) {
            out.push_back(c);
            ++i;
            continue;
        }
        std::string_view name = s.substr(i + 1, semi - i - 1);
        if (!name.empty() && name[0] == '#') {
            std::uint32_t cp = 0;
            bool ok = name.size() > 1;
            if (name.size() > 2 && (name[1] == 'x' || name[1] == 'X')) {
                for (std::size_t k = 2; k < name.size() && ok; ++k) {
                    char d = name[k];
                    std::uint32_t v;
                    if (d >= '0' && d <= '9')
                        v = d - '0';
                    else if (d >= 'a' && d <= 'f')
                        v = d - 'a' + 10;
                    else if (d >= 'A' && d <= 'F')
                        v = d - 'A' + 10;
                    else {
                        ok = false;
                        break;
                    }
                    cp = cp * 16 + v;
                }
            } else {
                for (std::size_t k = 1; k < name.size() && ok; ++k) {
                    char d = name[k];
                    if (d < '0' || d > '9') {
                        ok = false;
                        break;
                    }
                    cp = cp * 10 + (d - '0');
                }
            }
            if (ok && cp != 0) {
                append_utf8(out, cp);
                i = semi + 1;
                continue;
            }
        } else {
            auto it = named_entities().find(std::string(name));
            if (it != named_entities().end()) {
                append_utf8(out, it->second);
                i = semi + 1;
                continue;
            }
        }
        out.push_back(c); // unknown reference stays literal
        ++i;
    }
    return out;
}

namespace {

// ----------------------------------------------------------------------------
// Tokenizer
// ----------------------------------------------------------------------------

struct TagToken {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    bool self_closing = false;
};

struct Tokenizer {
    std::string_view src;
    std::size_t pos = 0;

    bool eof() const { return pos >= src.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < src.size() ? src[pos + ahead] : '\0';
    }

    // Text up to the next markup; empty when positioned at markup.
    std::string read_text() {
        std::size_t start = pos;
        while (!eof() && src[pos] != '<')
            ++pos;
        return decode_entities(src.substr(start, pos - start));
    }

    // Raw content up to "</name"; entities decoded only for RCDATA.
    std::string read_raw(const std::string& name, bool rcdata) {
        std::string close = "</" + name;
        std::size_t start = pos;
        while (pos < src.size()) {
            if (src[pos] == '<' && pos + close.size() <= src.size()) {
                std::string_view cand = src.substr(pos, close.size());
                if (lower_ascii(cand) == close) {
                    char after = pos + close.size() < src.size() ? src[pos + close.size()] : '>';
                    if (after == '>' || is_ascii_space(after) || after == '/')
                        break;
                }
            }
            ++pos;
        }
        std::string_view content = src.substr(start, pos - start);
        // consume the end tag
        if (pos < src.size()) {
            while (pos < src.size() && src[pos] != '>')
                ++pos;
            if (pos < src.size())
                ++pos;
        }
        return rcdata ? decode_entities(content) : std::string(content);
    }

    enum class Markup { Comment, Doctype, StartTag, EndTag, Text };

    // Called with peek() == '<'. Returns what was consumed; for stray '<'
    // that opens no markup, emits it as Text via *stray.
    Markup read_markup(TagToken& tag, std::string& comment, std::string& stray) {
        ++pos; // consume '<'
        if (eof()) {
            stray = "<";
            return Markup::Text;
        }
        char c = src[pos];
        if (c == '!') {
            if (src.substr(pos).substr(0, 3) == "!--") {
                pos += 3;
                std::size_t end = src.find("-->", pos);
                if (end == std::string_view::npos) {
                    comment = std::string(src.substr(pos));
                    pos = src.size();
                } else {
                    comment = std::string(src.substr(pos, end - pos));
                    pos = end + 3;
                }
                return Markup::Comment;
            }
            // doctype / CDATA / bogus: skip to '>'
            while (!eof() && src[pos] != '>')
                ++pos;
            if (!eof())
                ++pos;
            return Markup::Doctype;
        }
        if (c == '/') {
            ++pos;
            tag = TagToken{};
            while (!eof() && src[pos] != '>' && !is_ascii_space(src[pos]))
                tag.name.push_back(src[pos++]);
            tag.name = lower_ascii(tag.name);
            while (!eof() && src[pos] != '>')
                ++pos;
            if (!eof())
                ++pos;
            return Markup::EndTag;
        }
        if (!(std::isalpha(static_cast<unsigned char>(c)))) {
            stray = "<";
            return Markup::Text;
        }
        tag = TagToken{};
        while (!eof() && !is_ascii_space(src[pos]) && src[pos] != '>' && src[pos] != '/')
            tag.name.push_back(src[pos++]);
        tag.name = lower_ascii(tag.name);
        // attributes
        for (;;) {
            while (!eof() && is_ascii_space(src[pos]))
                ++pos;
            if (eof())
                break;
            if (src[pos] == '>') {
                ++pos;
                break;
            }
            if (src[pos] == '/') {
                ++pos;
                if (!eof() && src[pos] == '>') {
                    ++pos;
                    tag.self_closing = true;
                    break;
                }
                continue;
            }
            std::string name;
            while (!eof() && !is_ascii_space(src[pos]) && src[pos] != '=' &&
                   src[pos] != '>' && src[pos] != '/')
                name.push_back(src[pos++]);
            name = lower_ascii(name);
            while (!eof() && is_ascii_space(src[pos]))
                ++pos;
            std::string value;
            if (!eof() && src[pos] == '=') {
                ++pos;
                while (!eof() && is_ascii_space(src[pos]))
                    ++pos;
                if (!eof() && (src[pos] == '"' || src[pos] == '\'')) {
                    char q = src[pos++];
                    std::size_t start = pos;
                    while (!eof() && src[pos] != q)
                        ++pos;
                    value = decode_entities(src.substr(start, pos - start));
                    if (!eof())
                        ++pos;
                } else {
                    std::size_t start = pos;
                    while (!eof() && !is_ascii_space(src[pos]) && src[pos] != '>')
                        ++pos;
                    value = decode_entities(src.substr(start, pos - start));
                }
            }
            if (!name.empty())
                tag.attributes.emplace_back(std::move(name), std::move(value));
        }
        return Markup::StartTag;
    }
};

// ----------------------------------------------------------------------------
// Tree construction
// ----------------------------------------------------------------------------

const std::set<std::string>& void_elements() {
    static const std::set<std::string> s = {
        "area", "base", "br",   "col",  "embed",  "hr",    "img",
        "input", "link", "meta", "param", "source", "track", "wbr"};
    return s;
}

const std::set<std::string>& raw_text_elements() {
    static const std::set<std::string> s = {"script", "style", "xmp", "noframes", "noembed"};
    return s;
}

const std::set<std::string>& rcdata_elements() {
    static const std::set<std::string> s = {"title", "textarea"};
    return s;
}

const std::set<std::string>& head_only_elements() {
    static const std::set<std::string> s = {"base", "link", "meta", "title", "style"};
    return s;
}

// Start tags that implicitly close an open <p>.
const std::set<std::string>& p_closers() {
    static const std::set<std::string> s = {
        "address", "article", "aside", "blockquote", "center", "details", "dir",
        "div", "dl", "fieldset", "figcaption", "figure", "footer", "form",
        "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "main", "menu",
        "nav", "ol", "p", "pre", "section", "table", "ul"};
    return s;
}

bool is_table_section(const std::string& t) {
    return t == "thead" || t == "tbody" || t == "tfoot";
}

bool is_table_part(const std::string& t) {
    return t == "td" || t == "th" || t == "tr" || is_table_section(t) ||
           t == "caption" || t == "col" || t == "colgroup";
}

struct TreeBuilder {
    DocumentBuilder builder;
    std::vector<DocumentBuilder::Handle> stack; // open elements
    DocumentBuilder::Handle html = 0, head = 0, body = 0;
    bool body_started = false;

    DocumentBuilder::Handle current() const { return stack.back(); }

    const std::string& current_name() const { return builder.name(current()); }

    bool in_scope(const std::string& tag) const {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it)
            if (builder.name(*it) == tag)
                return true;
        return false;
    }

    void init() {
        html = builder.add_element(std::nullopt, "html");
        head = builder.add_element(html, "head");
        body = builder.add_element(html, "body");
        stack.push_back(html);
        stack.push_back(head);
    }

    void start_body() {
        if (body_started)
            return;
        body_started = true;
        stack.clear();
        stack.push_back(html);
        stack.push_back(body);
    }

    void pop_until_and_including(const std::string& tag) {
        while (stack.size() > 1) {
            bool hit = builder.name(stack.back()) == tag;
            stack.pop_back();
            if (hit)
                return;
        }
    }

    void pop_while(const std::set<std::string>& tags) {
        while (stack.size() > 2 && tags.count(builder.name(stack.back())))
            stack.pop_back();
    }

    void append_text(const std::string& text) {
        if (text.empty())
            return;
        bool ws_only = std::all_of(text.begin(), text.end(), is_ascii_space);
        if (!body_started) {
            // before body: whitespace between head elements is dropped
            if (ws_only)
                return;
            if (in_scope("head") && current() == head) {
                start_body();
            }
        }
        const std::string& cur = current_name();
        // whitespace between table structure elements is dropped so cell
        // positions stay predictable
        if (ws_only && (cur == "table" || is_table_section(cur) || cur == "tr" ||
                        cur == "colgroup"))
            return;
        if (!ws_only && !body_started)
            start_body();
        // merge with a trailing text sibling
        const auto& kids = builder.children(current());
        if (!kids.empty() && builder.kind(kids.back()) == NodeKind::Text) {
            builder.text_value(kids.back()) += text;
            return;
        }
        builder.add_text(current(), text);
    }

    void append_comment(const std::string& text) {
        builder.add_comment(current(), text);
    }

    void insert_element(const TagToken& tag, bool push) {
        auto h = builder.add_element(current(), tag.name);
        for (const auto& [k, v] : tag.attributes)
            builder.add_attribute(h, k, v);
        if (push)
            stack.push_back(h);
    }

    // Implied end tags + scaffolding before inserting a start tag.
    void prepare_for(const std::string& name) {
        static const std::set<std::string> td_th = {"td", "th"};
        static const std::set<std::string> cell_row = {"td", "th", "tr"};
        static const std::set<std::string> cell_row_section = {"td", "th", "tr",
                                                               "thead", "tbody", "tfoot"};

        if (!body_started) {
            if (name == "html" || name == "head" || head_only_elements().count(name) ||
                raw_text_elements().count(name))
                return;
            start_body();
        }

        if (p_closers().count(name) && in_scope("p")) {
            while (stack.size() > 2 && current_name() != "p")
                stack.pop_back();
            if (current_name() == "p")
                stack.pop_back();
        }
        if (name == "li" && in_scope("li")) {
            while (stack.size() > 2 && current_name() != "li") {
                const std::string& c = current_name();
                if (c == "ul" || c == "ol")
                    break;
                stack.pop_back();
            }
            if (current_name() == "li")
                stack.pop_back();
        }
        if ((name == "dt" || name == "dd") && (in_scope("dt") || in_scope("dd"))) {
            while (stack.size() > 2 && current_name() != "dt" && current_name() != "dd") {
                if (current_name() == "dl")
                    break;
                stack.pop_back();
            }
            if (current_name() == "dt" || current_name() == "dd")
                stack.pop_back();
        }
        if (name == "option" && current_name() == "option")
            stack.pop_back();

        // a new cell or row implies the end of the open one, including any
        // content still open inside it; nested tables stop the walk
        static const std::set<std::string> table_boundary = {
            "td", "th", "tr", "thead", "tbody", "tfoot", "table", "body", "html"};
        if (name == "tr") {
            if (in_scope("table")) {
                while (stack.size() > 2 && !table_boundary.count(current_name()))
                    stack.pop_back();
                pop_while(td_th);
                if (current_name() == "tr")
                    stack.pop_back();
            }
        } else if (name == "td" || name == "th") {
            if (in_scope("table")) {
                while (stack.size() > 2 && !table_boundary.count(current_name()))
                    stack.pop_back();
                if (td_th.count(current_name()))
                    stack.pop_back();
            }
        } else if (is_table_section(name) || name == "caption") {
            if (in_scope("table")) {
                while (stack.size() > 2 && !table_boundary.count(current_name()))
                    stack.pop_back();
                pop_while(cell_row);
            }
        }

        // stray table parts outside any table get an implied <table>
        if (is_table_part(name) && !in_scope("table")) {
            TagToken t;
            t.name = "table";
            insert_element(t, true);
        } else if (is_table_part(name) && name != "td" && name != "th" && name != "tr") {
            pop_while(cell_row_section);
        }
    }

    void handle_start(const TagToken& tag, Tokenizer& tok) {
        const std::string& name = tag.name;
        if (name == "html") {
            for (const auto& [k, v] : tag.attributes)
                builder.add_attribute(html, k, v);
            return;
        }
        if (name == "head")
            return;
        if (name == "body") {
            for (const auto& [k, v] : tag.attributes)
                builder.add_attribute(body, k, v);
            start_body();
            return;
        }
        if (raw_text_elements().count(name) || rcdata_elements().count(name)) {
            prepare_for(name);
            if (!body_started && !head_only_elements().count(name) &&
                !raw_text_elements().count(name))
                start_body();
            insert_element(tag, true);
            std::string content = tok.read_raw(name, rcdata_elements().count(name) != 0);
            if (!content.empty())
                builder.add_text(current(), content);
            stack.pop_back();
            return;
        }
        prepare_for(name);
        bool is_void = void_elements().count(name) != 0;
        insert_element(tag, !is_void && !tag.self_closing);
    }

    void handle_end(const TagToken& tag) {
        const std::string& name = tag.name;
        if (name == "html" || name == "body" || name == "head") {
            if (name == "head" && !body_started)
                start_body();
            return;
        }
        if (void_elements().count(name))
            return;
        if (in_scope(name))
            pop_until_and_including(name);
        // unmatched end tags are ignored
    }

    Document run(const std::string& url, std::string_view text) {
        init();
        Tokenizer tok{text};
        while (!tok.eof()) {
            std::string data = tok.read_text();
            if (!data.empty())
                append_text(data);
            if (tok.eof())
                break;
            TagToken tag;
            std::string comment, stray;
            switch (tok.read_markup(tag, comment, stray)) {
            case Tokenizer::Markup::Text:
                append_text(stray);
                break;
            case Tokenizer::Markup::Comment:
                append_comment(comment);
                break;
            case Tokenizer::Markup::Doctype:
                break;
            case Tokenizer::Markup::StartTag:
                handle_start(tag, tok);
                break;
            case Tokenizer::Markup::EndTag:
                handle_end(tag);
                break;
            }
        }
        if (!body_started)
            start_body();
        return builder.build(url);
    }
};

} // namespace

Document parse_document(const std::string& url, std::string_view html) {
    std::string text = decode_charset(html);
    TreeBuilder tb;
    return tb.run(url, text);
}

} // namespace ixp
