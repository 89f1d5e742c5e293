#include "inferxpath/url.hpp"

#include <vector>

#include "inferxpath/util.hpp"

namespace ixp {

namespace {

bool valid_scheme(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
        return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
            return false;
    return true;
}

std::string remove_dot_segments(std::string_view path) {
    std::vector<std::string> out;
    bool absolute = !path.empty() && path[0] == '/';
    bool trailing_slash = !path.empty() && path.back() == '/';
    std::size_t i = 0;
    while (i <= path.size()) {
        std::size_t next = path.find('/', i);
        std::string_view seg =
            next == std::string_view::npos ? path.substr(i) : path.substr(i, next - i);
        if (seg == "..") {
            if (!out.empty() && out.back() != "..")
                out.pop_back();
            else if (!absolute)
                out.emplace_back("..");
            trailing_slash = true;
        } else if (seg == "." ) {
            trailing_slash = true;
        } else if (!seg.empty()) {
            out.emplace_back(seg);
            trailing_slash = next != std::string_view::npos && path[next] == '/';
        }
        if (next == std::string_view::npos)
            break;
        i = next + 1;
    }
    std::string result = absolute ? "/" : "";
    for (std::size_t k = 0; k < out.size(); ++k) {
        result += out[k];
        if (k + 1 < out.size())
            result += '/';
    }
    if (trailing_slash && !out.empty())
        result += '/';
    if (result.empty() && absolute)
        result = "/";
    return result;
}

} // namespace

UrlParts split_url(std::string_view url) {
    UrlParts p;
    // fragment is dropped outright
    if (auto h = url.find('#'); h != std::string_view::npos)
        url = url.substr(0, h);
    auto colon = url.find(':');
    if (colon != std::string_view::npos && valid_scheme(url.substr(0, colon))) {
        p.scheme = lower_ascii(url.substr(0, colon));
        url = url.substr(colon + 1);
    }
    if (starts_with(url, "//")) {
        p.has_authority = true;
        url = url.substr(2);
        auto end = url.find_first_of("/?");
        std::string_view auth = end == std::string_view::npos ? url : url.substr(0, end);
        p.authority = lower_ascii(auth);
        url = end == std::string_view::npos ? std::string_view() : url.substr(end);
    }
    if (auto q = url.find('?'); q != std::string_view::npos) {
        p.has_query = true;
        p.query = std::string(url.substr(q + 1));
        url = url.substr(0, q);
    }
    p.path = std::string(url);
    return p;
}

namespace {

std::string assemble(const UrlParts& p) {
    std::string out;
    if (!p.scheme.empty()) {
        out += p.scheme;
        out += ':';
    }
    if (p.has_authority) {
        out += "//";
        out += p.authority;
    }
    out += p.path;
    if (p.has_query) {
        out += '?';
        out += p.query;
    }
    return out;
}

} // namespace

std::string canonicalize_url(std::string_view url) {
    UrlParts p = split_url(url);
    if (p.has_authority && !p.path.empty())
        p.path = remove_dot_segments(p.path);
    else if (!p.has_authority)
        p.path = remove_dot_segments(p.path);
    if (p.has_authority && p.path.empty())
        p.path = "/";
    return assemble(p);
}

std::optional<std::string> resolve_url(std::string_view base, std::string_view ref) {
    std::string r = trim(ref);
    if (r.empty())
        return std::nullopt;
    for (char c : r)
        if (is_ascii_space(c) || c == '<' || c == '>')
            return std::nullopt;

    UrlParts rp = split_url(r);
    if (!rp.scheme.empty()) {
        if (rp.scheme == "mailto" || rp.scheme == "javascript" || rp.scheme == "data" ||
            rp.scheme == "tel" || rp.scheme == "about")
            return std::nullopt;
        return canonicalize_url(r);
    }
    UrlParts bp = split_url(base);
    UrlParts out;
    out.scheme = bp.scheme;
    if (rp.has_authority) {
        out.has_authority = true;
        out.authority = rp.authority;
        out.path = rp.path;
        out.has_query = rp.has_query;
        out.query = rp.query;
    } else {
        out.has_authority = bp.has_authority;
        out.authority = bp.authority;
        if (rp.path.empty()) {
            out.path = bp.path;
            out.has_query = rp.has_query ? rp.has_query : bp.has_query;
            out.query = rp.has_query ? rp.query : bp.query;
        } else if (rp.path[0] == '/') {
            out.path = rp.path;
            out.has_query = rp.has_query;
            out.query = rp.query;
        } else {
            auto slash = bp.path.rfind('/');
            std::string dir =
                slash == std::string::npos ? std::string() : bp.path.substr(0, slash + 1);
            out.path = dir + rp.path;
            out.has_query = rp.has_query;
            out.query = rp.query;
        }
    }
    out.path = remove_dot_segments(out.path);
    if (out.has_authority && out.path.empty())
        out.path = "/";
    std::string result = assemble(out);
    if (result.empty())
        return std::nullopt;
    return result;
}

std::string url_host(std::string_view url) {
    UrlParts p = split_url(url);
    auto at = p.authority.find('@');
    std::string host = at == std::string::npos ? p.authority : p.authority.substr(at + 1);
    auto colon = host.rfind(':');
    if (colon != std::string::npos && host.find(']') == std::string::npos)
        host = host.substr(0, colon);
    return host;
}

} // namespace ixp
