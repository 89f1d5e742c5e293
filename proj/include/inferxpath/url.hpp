#ifndef INFERXPATH_URL_HPP
#define INFERXPATH_URL_HPP

#include <optional>
#include <string>
#include <string_view>

namespace ixp {

// Minimal RFC-3986-style handling, tolerant of scheme-less corpus URLs
// (plain file names act as relative references against each other).

struct UrlParts {
    std::string scheme;    // lowercase, no ':'
    std::string authority; // host[:port], host lowercased
    std::string path;
    std::string query;     // without '?'
    bool has_authority = false;
    bool has_query = false;
};

UrlParts split_url(std::string_view url);

// Strip fragment, lowercase scheme and host, remove dot segments.
std::string canonicalize_url(std::string_view url);

// Resolve `ref` against `base`; both may be scheme-less. Returns nullopt for
// values that cannot denote a fetchable page (empty, embedded whitespace,
// or non-hierarchical schemes like mailto/javascript/data).
std::optional<std::string> resolve_url(std::string_view base, std::string_view ref);

std::string url_host(std::string_view url);

} // namespace ixp

#endif
