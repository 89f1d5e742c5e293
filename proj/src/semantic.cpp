#include "inferxpath/semantic.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "inferxpath/annotations.hpp"
#include "inferxpath/util.hpp"

namespace ixp {

// ----------------------------------------------------------------------------
// Recognizer
// ----------------------------------------------------------------------------

Recognizer::Recognizer(std::string name, std::string pattern, bool whole_match)
    : name_(std::move(name)), pattern_(std::move(pattern)), whole_match_(whole_match) {
    try {
        regex_ = std::make_shared<const std::regex>(
            pattern_, std::regex::ECMAScript | std::regex::optimize);
    } catch (const std::regex_error& e) {
        throw PatternError("recognizer '" + name_ + "' has a bad pattern: " + e.what());
    }
}

Recognizer Recognizer::json_builtin() {
    Recognizer r;
    r.name_ = "json";
    r.pattern_ = "<balanced braces + JSON parse>";
    r.whole_match_ = false;
    r.json_mode_ = true;
    return r;
}

bool Recognizer::matches_whole(const std::string& text) const {
    if (text.empty())
        return false;
    if (json_mode_) {
        auto j = nlohmann::json::parse(text, nullptr, false);
        return !j.is_discarded() && (j.is_object() || j.is_array());
    }
    return std::regex_match(text, *regex_);
}

namespace {

// Balanced-brace candidate starting at `start` ('{'), tracking strings and
// escapes; npos when unbalanced.
std::size_t balanced_end(const std::string& s, std::size_t start) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"')
            in_string = true;
        else if (c == '{')
            ++depth;
        else if (c == '}') {
            --depth;
            if (depth == 0)
                return i;
        }
    }
    return std::string::npos;
}

std::vector<std::string> json_matches(const std::string& text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while ((i = text.find('{', i)) != std::string::npos) {
        std::size_t end = balanced_end(text, i);
        if (end == std::string::npos) {
            ++i;
            continue;
        }
        std::string candidate = text.substr(i, end - i + 1);
        auto j = nlohmann::json::parse(candidate, nullptr, false);
        if (!j.is_discarded()) {
            out.push_back(std::move(candidate));
            i = end + 1;
        } else {
            ++i;
        }
    }
    return out;
}

} // namespace

std::vector<std::string> Recognizer::find_matches(const std::string& text) const {
    std::vector<std::string> out;
    if (text.empty())
        return out;
    if (json_mode_)
        return json_matches(text);
    if (whole_match_) {
        if (std::regex_match(text, *regex_))
            out.push_back(text);
        return out;
    }
    std::set<std::string> seen;
    auto begin = std::sregex_iterator(text.begin(), text.end(), *regex_);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        std::string m = it->str();
        if (!m.empty() && seen.insert(m).second)
            out.push_back(std::move(m));
    }
    return out;
}

// ----------------------------------------------------------------------------
// Registry
// ----------------------------------------------------------------------------

RecognizerRegistry RecognizerRegistry::builtins() {
    RecognizerRegistry reg;
    reg.add(Recognizer("number", R"([+-]?\d+(\.\d+)?)", true));
    reg.add(Recognizer("currency",
                       R"((\$|€|£|¥)\s?\d[\d,]*(\.\d+)?|\d[\d,]*(\.\d+)?\s?(USD|EUR|GBP|JPY))",
                       true));
    reg.add(Recognizer("http-method", R"(GET|POST|PUT|DELETE|PATCH|HEAD|OPTIONS)", true));
    reg.add(Recognizer::json_builtin());
    return reg;
}

void RecognizerRegistry::add(Recognizer r) {
    for (Recognizer& existing : recognizers_) {
        if (existing.name() == r.name()) {
            existing = std::move(r);
            return;
        }
    }
    recognizers_.push_back(std::move(r));
}

void RecognizerRegistry::load_file(const std::string& path) {
    auto j = nlohmann::json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_array())
        throw FormatError("recognizer registry must be a JSON array: " + path);
    for (const auto& entry : j) {
        if (!entry.is_object() || !entry.contains("name") || !entry.contains("pattern"))
            throw FormatError("registry entries need \"name\" and \"pattern\"");
        bool whole = entry.value("wholeMatch", true);
        add(Recognizer(entry["name"].get<std::string>(),
                       entry["pattern"].get<std::string>(), whole));
    }
}

const Recognizer* RecognizerRegistry::find(const std::string& name) const {
    for (const Recognizer& r : recognizers_)
        if (r.name() == name)
            return &r;
    return nullptr;
}

std::vector<std::string> RecognizerRegistry::names() const {
    std::vector<std::string> out;
    for (const Recognizer& r : recognizers_)
        out.push_back(r.name());
    return out;
}

// ----------------------------------------------------------------------------
// Recognition
// ----------------------------------------------------------------------------

namespace {

std::vector<std::uint32_t> scope_roots(const NodeSet& scope, const std::string& page) {
    std::vector<std::uint32_t> out;
    for (const NodeId& id : scope)
        if (id.page == page)
            out.push_back(id.index);
    return out;
}

bool under_scope(const Document& doc, std::uint32_t n,
                 const std::vector<std::uint32_t>& roots) {
    for (std::uint32_t r : roots)
        if (n == r || doc.is_ancestor(r, n))
            return true;
    return false;
}

} // namespace

SemanticSet recognize(const Recognizer& r, const Corpus& corpus, const EvalEnv& env,
                      const ExprPtr& scope) {
    std::optional<NodeSet> scope_set;
    if (scope) {
        Value v = evaluate(scope, corpus_roots(corpus), env);
        NodeSet* ns = std::get_if<NodeSet>(&v);
        if (!ns)
            throw ScopeError("recognizer scope must evaluate to a node-set");
        scope_set = std::move(*ns);
    }

    SemanticSet out;
    out.name = r.name();
    out.recognizer = r.name();

    for (const std::string& page : corpus.page_urls()) {
        auto doc = corpus.document(page);
        std::vector<std::uint32_t> roots;
        if (scope_set)
            roots = scope_roots(*scope_set, page);

        if (r.whole_match()) {
            // candidates are elements and text nodes; the deepest node whose
            // entire normalized text carries the value wins, and a winning
            // text node reports its parent element. Values that only arise by
            // concatenating several text nodes (spanning sibling subtrees)
            // are not matched.
            std::vector<int> text_sources(doc->size(), 0);
            for (std::uint32_t i = doc->size(); i-- > 0;) {
                const Node& n = doc->node(i);
                if (n.kind == NodeKind::Text && !normalize_ws(n.value).empty())
                    text_sources[i] = 1;
                else if (n.kind == NodeKind::Element)
                    for (std::uint32_t c : n.children)
                        text_sources[i] += text_sources[c];
            }
            std::vector<char> qualifies(doc->size(), 0);
            for (std::uint32_t i = 0; i < doc->size(); ++i) {
                const Node& n = doc->node(i);
                if (n.kind != NodeKind::Element && n.kind != NodeKind::Text)
                    continue;
                if (n.kind == NodeKind::Element && text_sources[i] != 1)
                    continue;
                if (scope_set && !under_scope(*doc, i, roots))
                    continue;
                if (r.matches_whole(doc->text_content(i)))
                    qualifies[i] = 1;
            }
            for (std::uint32_t i = 0; i < doc->size(); ++i) {
                if (!qualifies[i])
                    continue;
                std::string value = doc->text_content(i);
                bool minimal = true;
                for (std::uint32_t k = i + 1; k < doc->size() && minimal; ++k) {
                    if (!qualifies[k] || !doc->is_ancestor(i, k))
                        continue;
                    if (doc->text_content(k) == value)
                        minimal = false;
                }
                if (!minimal)
                    continue;
                const Node& n = doc->node(i);
                std::uint32_t member =
                    n.kind == NodeKind::Text && n.parent ? *n.parent : i;
                out.members.insert(NodeId{page, member});
            }
        } else {
            // contains-mode matches anchor at single text nodes; values that
            // only arise from concatenating sibling subtrees are not matched
            for (std::uint32_t i = 0; i < doc->size(); ++i) {
                const Node& n = doc->node(i);
                if (n.kind != NodeKind::Text)
                    continue;
                if (scope_set && !under_scope(*doc, i, roots))
                    continue;
                if (!r.find_matches(doc->text_content(i)).empty() && n.parent)
                    out.members.insert(NodeId{page, *n.parent});
            }
        }
    }
    return out;
}

SemanticSet set_from_xpath(const ExprPtr& e, const Corpus& corpus, const EvalEnv& env) {
    SemanticSet out;
    out.name = pretty_print(e);
    out.xpath = e;
    out.members = evaluate_nodes(e, corpus_roots(corpus), env);
    return out;
}

std::string structural_signature(const NodeId& id, const Corpus& corpus) {
    auto doc = corpus.document(id.page);
    if (!doc)
        return "";
    std::vector<std::string> parts;
    std::optional<std::uint32_t> cur = id.index;
    while (cur) {
        const Node& n = doc->node(*cur);
        switch (n.kind) {
        case NodeKind::Element: parts.push_back(n.name); break;
        case NodeKind::Text: parts.push_back("text()"); break;
        case NodeKind::Attribute: parts.push_back("@" + n.name); break;
        case NodeKind::Comment: parts.push_back("comment()"); break;
        }
        cur = n.parent;
    }
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (!out.empty())
            out += '/';
        out += *it;
    }
    return out;
}

std::vector<SemanticSet> partition_by_structure(const SemanticSet& s, const Corpus& corpus) {
    // members are already in canonical order, so first-seen group order is
    // first-member document order
    std::vector<std::string> group_order;
    std::map<std::string, NodeSet> groups;
    for (const NodeId& id : s.members) {
        std::string sig = structural_signature(id, corpus);
        if (!groups.count(sig))
            group_order.push_back(sig);
        groups[sig].insert(id);
    }
    std::vector<SemanticSet> out;
    for (const std::string& sig : group_order) {
        SemanticSet g;
        g.name = s.name + "/" + sig;
        g.recognizer = s.recognizer;
        g.xpath = s.xpath;
        g.members = groups[sig];
        out.push_back(std::move(g));
    }
    return out;
}

} // namespace ixp
