#include "inferxpath/dom.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "inferxpath/geometry.hpp"
#include "inferxpath/util.hpp"

namespace ixp {

std::string number_to_string(double v) {
    if (std::isnan(v))
        return "NaN";
    if (std::isinf(v))
        return v > 0 ? "Infinity" : "-Infinity";
    double rounded = std::round(v);
    if (rounded == v && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // prefer the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        double back = 0;
        std::sscanf(probe, "%lf", &back);
        if (back == v)
            return probe;
    }
    return buf;
}

double string_to_number(std::string_view s) {
    std::string t = trim(s);
    if (t.empty())
        return std::nan("");
    const char* begin = t.data();
    const char* end = begin + t.size();
    double out = 0;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end)
        return std::nan("");
    return out;
}

const char* node_kind_name(NodeKind k) {
    switch (k) {
    case NodeKind::Element: return "element";
    case NodeKind::Text: return "text";
    case NodeKind::Attribute: return "attribute";
    case NodeKind::Comment: return "comment";
    }
    return "?";
}

// ----------------------------------------------------------------------------
// Document
// ----------------------------------------------------------------------------

std::string Document::raw_text(std::uint32_t i) const {
    const Node& n = node(i);
    switch (n.kind) {
    case NodeKind::Text:
    case NodeKind::Attribute:
        return n.value;
    case NodeKind::Comment:
        return "";
    case NodeKind::Element: {
        std::string out;
        for (std::uint32_t c : n.children) {
            const Node& child = node(c);
            if (child.kind == NodeKind::Text)
                out += child.value;
            else if (child.kind == NodeKind::Element)
                out += raw_text(c);
        }
        return out;
    }
    }
    return "";
}

std::string Document::text_content(std::uint32_t i) const {
    return normalize_ws(raw_text(i));
}

std::optional<std::uint32_t> Document::attribute(std::uint32_t element,
                                                 const std::string& name) const {
    const Node& n = node(element);
    for (std::uint32_t a : n.attributes)
        if (node(a).name == name)
            return a;
    return std::nullopt;
}

std::string Document::attribute_value(std::uint32_t element,
                                      const std::string& name) const {
    auto a = attribute(element, name);
    return a ? node(*a).value : std::string();
}

bool Document::is_ancestor(std::uint32_t anc, std::uint32_t n) const {
    std::optional<std::uint32_t> p = node(n).parent;
    while (p) {
        if (*p == anc)
            return true;
        p = node(*p).parent;
    }
    return false;
}

int document_order_compare(const NodeId& a, const NodeId& b) {
    if (a.page != b.page)
        throw CrossPageError("document order undefined across pages: " + a.page +
                             " vs " + b.page);
    if (a.index < b.index)
        return -1;
    if (a.index > b.index)
        return 1;
    return 0;
}

// ----------------------------------------------------------------------------
// DocumentBuilder
// ----------------------------------------------------------------------------

DocumentBuilder::Handle DocumentBuilder::add_element(std::optional<Handle> parent,
                                                     std::string tag) {
    Handle h = static_cast<Handle>(nodes_.size());
    nodes_.push_back(Proto{NodeKind::Element, std::move(tag), "", parent, {}, {}});
    if (parent)
        nodes_[*parent].children.push_back(h);
    return h;
}

DocumentBuilder::Handle DocumentBuilder::add_text(Handle parent, std::string text) {
    Handle h = static_cast<Handle>(nodes_.size());
    nodes_.push_back(Proto{NodeKind::Text, "", std::move(text), parent, {}, {}});
    nodes_[parent].children.push_back(h);
    return h;
}

DocumentBuilder::Handle DocumentBuilder::add_comment(Handle parent, std::string text) {
    Handle h = static_cast<Handle>(nodes_.size());
    nodes_.push_back(Proto{NodeKind::Comment, "", std::move(text), parent, {}, {}});
    nodes_[parent].children.push_back(h);
    return h;
}

std::optional<DocumentBuilder::Handle>
DocumentBuilder::add_attribute(Handle owner, std::string name, std::string value) {
    for (Handle a : nodes_[owner].attributes)
        if (nodes_[a].name == name)
            return std::nullopt;
    Handle h = static_cast<Handle>(nodes_.size());
    nodes_.push_back(
        Proto{NodeKind::Attribute, std::move(name), std::move(value), owner, {}, {}});
    nodes_[owner].attributes.push_back(h);
    return h;
}

Document DocumentBuilder::build(std::string url) const {
    std::optional<Handle> root;
    for (Handle h = 0; h < nodes_.size(); ++h) {
        if (!nodes_[h].parent && nodes_[h].kind == NodeKind::Element) {
            if (root)
                throw Error("document has more than one root element");
            root = h;
        }
    }
    if (!root)
        throw Error("document has no root element");

    // Pre-order numbering: element, then its attributes, then children.
    std::vector<std::uint32_t> order(nodes_.size(), 0);
    std::vector<Handle> preorder;
    preorder.reserve(nodes_.size());
    auto visit = [&](auto&& self, Handle h) -> void {
        order[h] = static_cast<std::uint32_t>(preorder.size());
        preorder.push_back(h);
        for (Handle a : nodes_[h].attributes) {
            order[a] = static_cast<std::uint32_t>(preorder.size());
            preorder.push_back(a);
        }
        for (Handle c : nodes_[h].children)
            self(self, c);
    };
    visit(visit, *root);

    std::vector<Node> out(preorder.size());
    for (std::uint32_t i = 0; i < preorder.size(); ++i) {
        const Proto& p = nodes_[preorder[i]];
        Node& n = out[i];
        n.index = i;
        n.kind = p.kind;
        n.name = p.name;
        n.value = p.value;
        if (p.parent)
            n.parent = order[*p.parent];
        for (Handle c : p.children)
            n.children.push_back(order[c]);
        for (Handle a : p.attributes)
            n.attributes.push_back(order[a]);
    }
    return Document(std::move(url), std::move(out));
}

// ----------------------------------------------------------------------------
// Corpus
// ----------------------------------------------------------------------------

Corpus::Corpus() = default;
Corpus::~Corpus() = default;

void Corpus::add_page(std::shared_ptr<const Document> doc, Annotations ann) {
    std::lock_guard lock(mutex_);
    auto page = std::make_unique<Page>();
    page->doc = std::move(doc);
    page->ann = std::move(ann);
    pages_[page->doc->url()] = std::move(page);
}

std::shared_ptr<const Document> Corpus::document(const std::string& url) const {
    std::lock_guard lock(mutex_);
    auto it = pages_.find(url);
    return it == pages_.end() ? nullptr : it->second->doc;
}

bool Corpus::has_page(const std::string& url) const {
    std::lock_guard lock(mutex_);
    return pages_.count(url) != 0;
}

const Annotations* Corpus::annotations(const std::string& url) const {
    std::lock_guard lock(mutex_);
    auto it = pages_.find(url);
    return it == pages_.end() ? nullptr : &it->second->ann;
}

std::vector<std::string> Corpus::page_urls() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    out.reserve(pages_.size());
    for (const auto& [url, _] : pages_)
        out.push_back(url);
    return out;
}

const GeometryIndex& Corpus::geometry(const std::string& url) const {
    Page* page = nullptr;
    {
        std::lock_guard lock(mutex_);
        auto it = pages_.find(url);
        if (it == pages_.end())
            throw Error("no such page: " + url);
        page = it->second.get();
    }
    std::call_once(page->geom_once, [page] {
        std::vector<std::pair<std::uint32_t, BoundingBox>> boxes(
            page->ann.boxes.begin(), page->ann.boxes.end());
        page->geom = std::make_unique<GeometryIndex>(std::move(boxes));
    });
    return *page->geom;
}

} // namespace ixp
