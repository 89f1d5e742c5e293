#ifndef INFERXPATH_SEMANTIC_HPP
#define INFERXPATH_SEMANTIC_HPP

#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "inferxpath/eval.hpp"

namespace ixp {

// A named value recognizer over normalized subtree text. For wholeMatch
// recognizers the pattern must cover a node's entire normalized text; for
// the rest a match anywhere inside a single text node counts. The built-in
// "json" recognizer is a hybrid: balanced-brace candidates are validated by
// an actual JSON parse, since a regular expression cannot decide that.
class Recognizer {
public:
    Recognizer(std::string name, std::string pattern, bool whole_match);
    static Recognizer json_builtin();

    const std::string& name() const { return name_; }
    const std::string& pattern() const { return pattern_; }
    bool whole_match() const { return whole_match_; }
    bool json_mode() const { return json_mode_; }

    bool matches_whole(const std::string& text) const;
    // Distinct matched substrings of `text`, in first-occurrence order.
    std::vector<std::string> find_matches(const std::string& text) const;

private:
    Recognizer() = default;
    std::string name_;
    std::string pattern_;
    bool whole_match_ = true;
    bool json_mode_ = false;
    std::shared_ptr<const std::regex> regex_;
};

// Built-ins first; a user file (JSON array of {"name","pattern","wholeMatch"})
// overrides by name.
class RecognizerRegistry {
public:
    static RecognizerRegistry builtins();

    void add(Recognizer r); // replaces an existing recognizer of the same name
    void load_file(const std::string& path);
    const Recognizer* find(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::vector<Recognizer> recognizers_;
};

struct SemanticSet {
    std::string name;
    NodeSet members;
    // provenance: recognizer(name) or xpath(expr)
    std::string recognizer; // empty unless recognizer-derived
    ExprPtr xpath;          // null unless xpath-derived
};

// Members are the roots of the minimal subtrees whose normalized text carries
// a recognized value; matches anchored at text nodes are reported as their
// parent element. `scope`, when given, restricts the search to the subtrees
// of its answer set.
SemanticSet recognize(const Recognizer& r, const Corpus& corpus, const EvalEnv& env,
                      const ExprPtr& scope = nullptr);

SemanticSet set_from_xpath(const ExprPtr& e, const Corpus& corpus, const EvalEnv& env);

// Partition by structural signature (the tag path from the page root, e.g.
// "html/body/table/tr/td"); groups ordered by their first member.
std::vector<SemanticSet> partition_by_structure(const SemanticSet& s, const Corpus& corpus);

std::string structural_signature(const NodeId& id, const Corpus& corpus);

} // namespace ixp

#endif
