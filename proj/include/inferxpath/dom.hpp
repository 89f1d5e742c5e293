#ifndef INFERXPATH_DOM_HPP
#define INFERXPATH_DOM_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "inferxpath/errors.hpp"

namespace ixp {

// Identity of a node: page URL plus the node's ordinal in document order.
// Index 0 is always the root element; attributes are numbered after their
// owner element and before its children, so comparing indices compares
// document order directly.
struct NodeId {
    std::string page;
    std::uint32_t index = 0;

    friend bool operator==(const NodeId&, const NodeId&) = default;
    friend auto operator<=>(const NodeId& a, const NodeId& b) {
        if (auto c = a.page <=> b.page; c != 0)
            return c;
        return a.index <=> b.index;
    }
};

enum class NodeKind : std::uint8_t { Element, Text, Attribute, Comment };

const char* node_kind_name(NodeKind k);

struct Node {
    std::uint32_t index = 0;
    NodeKind kind = NodeKind::Element;
    std::string name;  // tag or attribute name; empty for text/comment
    std::string value; // text or attribute value; empty for elements
    std::optional<std::uint32_t> parent;
    std::vector<std::uint32_t> children;   // element/text/comment children
    std::vector<std::uint32_t> attributes; // attribute nodes, in source order
};

class Document {
public:
    Document(std::string url, std::vector<Node> nodes)
        : url_(std::move(url)), nodes_(std::move(nodes)) {}

    const std::string& url() const { return url_; }
    std::uint32_t root() const { return 0; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(nodes_.size()); }
    const Node& node(std::uint32_t i) const { return nodes_.at(i); }
    bool valid_index(std::uint32_t i) const { return i < nodes_.size(); }
    NodeId id(std::uint32_t i) const { return NodeId{url_, i}; }

    // Concatenated descendant text in document order, then normalized
    // (whitespace runs collapsed, trimmed). For attribute nodes this is the
    // normalized attribute value. Comments contribute nothing.
    std::string text_content(std::uint32_t i) const;
    std::string raw_text(std::uint32_t i) const;

    // Attribute node of `element` with the given name, if any.
    std::optional<std::uint32_t> attribute(std::uint32_t element,
                                           const std::string& name) const;
    std::string attribute_value(std::uint32_t element, const std::string& name) const;

    bool is_ancestor(std::uint32_t anc, std::uint32_t node) const;

private:
    std::string url_;
    std::vector<Node> nodes_;
};

// Strict total order over one page's nodes; throws CrossPageError when the
// pages differ (callers order cross-page sets by URL themselves).
int document_order_compare(const NodeId& a, const NodeId& b);

// Incremental pre-order tree assembly. Handles returned by the add_*
// functions are builder-local; build() assigns final document-order indices.
class DocumentBuilder {
public:
    using Handle = std::uint32_t;

    Handle add_element(std::optional<Handle> parent, std::string tag);
    Handle add_text(Handle parent, std::string text);
    Handle add_comment(Handle parent, std::string text);
    // First attribute with a given name wins; later duplicates are dropped.
    std::optional<Handle> add_attribute(Handle owner, std::string name, std::string value);

    NodeKind kind(Handle h) const { return nodes_[h].kind; }
    const std::string& name(Handle h) const { return nodes_[h].name; }
    std::string& text_value(Handle h) { return nodes_[h].value; }
    std::optional<Handle> parent(Handle h) const { return nodes_[h].parent; }
    const std::vector<Handle>& children(Handle h) const { return nodes_[h].children; }
    bool empty() const { return nodes_.empty(); }

    // Requires exactly one parentless element (the root).
    Document build(std::string url) const;

private:
    struct Proto {
        NodeKind kind;
        std::string name;
        std::string value;
        std::optional<Handle> parent;
        std::vector<Handle> children;
        std::vector<Handle> attributes;
    };
    std::vector<Proto> nodes_;
};

struct BoundingBox {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    bool valid() const { return x0 <= x1 && y0 <= y1; }
    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct ImageTag {
    std::string tag;
    double confidence = 0;
};

// Sidecar data per page. All maps are partial: nodes without a box simply
// never satisfy visual axes.
struct Annotations {
    std::map<std::uint32_t, BoundingBox> boxes;
    std::map<std::uint32_t, std::string> font_family;
    std::map<std::uint32_t, std::string> font_style;
    // (model name, node index) -> tags
    std::map<std::pair<std::string, std::uint32_t>, std::vector<ImageTag>> image_tags;

    bool empty() const {
        return boxes.empty() && font_family.empty() && font_style.empty() &&
               image_tags.empty();
    }
};

class GeometryIndex;

// Immutable page store. Growth (lazy page addition by the fetcher) is the
// only mutation and is internally synchronized; readers may run concurrently.
class Corpus {
public:
    Corpus();
    Corpus(const Corpus&) = delete;
    Corpus& operator=(const Corpus&) = delete;
    ~Corpus();

    void add_page(std::shared_ptr<const Document> doc, Annotations ann = {});

    std::shared_ptr<const Document> document(const std::string& url) const;
    bool has_page(const std::string& url) const;
    const Annotations* annotations(const std::string& url) const;
    std::vector<std::string> page_urls() const; // sorted

    // Lazily-built per-page spatial index over annotation boxes.
    const GeometryIndex& geometry(const std::string& url) const;

    std::vector<std::string> seed_urls;

private:
    struct Page {
        std::shared_ptr<const Document> doc;
        Annotations ann;
        mutable std::unique_ptr<GeometryIndex> geom;
        mutable std::once_flag geom_once;
    };
    mutable std::mutex mutex_;
    std::map<std::string, std::unique_ptr<Page>> pages_;
};

} // namespace ixp

#endif
