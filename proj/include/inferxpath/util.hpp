#ifndef INFERXPATH_UTIL_HPP
#define INFERXPATH_UTIL_HPP

#include <string>
#include <string_view>

namespace ixp {

inline bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Collapse runs of ASCII whitespace to a single space and trim both ends.
// This is the one normalization rule shared by text(), recognizers and
// string comparisons, so markup whitespace never changes match results.
inline std::string normalize_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = false;
    for (char c : s) {
        if (is_ascii_space(c)) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty())
            out.push_back(' ');
        in_space = false;
        out.push_back(c);
    }
    return out;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_ascii_space(s[b]))
        ++b;
    while (e > b && is_ascii_space(s[e - 1]))
        --e;
    return std::string(s.substr(b, e - b));
}

inline std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

// Number-to-string in XPath style: integral values print without a decimal
// point, everything else with the shortest round-trip representation.
std::string number_to_string(double v);

// XPath string-to-number: trimmed decimal parse, NaN on failure.
double string_to_number(std::string_view s);

} // namespace ixp

#endif
