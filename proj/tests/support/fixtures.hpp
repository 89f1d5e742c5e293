#ifndef TESTS_FIXTURES_HPP
#define TESTS_FIXTURES_HPP

#include <memory>
#include <string>

#include "inferxpath/eval.hpp"
#include "inferxpath/fetch.hpp"

#ifndef IXP_FIXTURES_DIR
#define IXP_FIXTURES_DIR "fixtures"
#endif

namespace fixtures {

inline std::string dir() {
    return IXP_FIXTURES_DIR;
}

struct FixtureCorpus {
    ixp::LoadedCorpus loaded;
    ixp::EvalEnv env;

    ixp::Corpus& corpus() { return *loaded.corpus; }
    ixp::Fetcher& fetcher() { return *loaded.fetcher; }
};

// people.html + api.html, both seeds, with annotation sidecars.
inline std::unique_ptr<FixtureCorpus> open_main() {
    auto fc = std::make_unique<FixtureCorpus>();
    fc->loaded = ixp::open_corpus(dir() + "/manifest.json");
    fc->env.corpus = fc->loaded.corpus.get();
    fc->env.fetcher = fc->loaded.fetcher.get();
    fc->env.variables["nn"] = "nn-default";
    return fc;
}

// ten-page site, p0 the only seed; the rest load lazily through link steps.
inline std::unique_ptr<FixtureCorpus> open_site() {
    auto fc = std::make_unique<FixtureCorpus>();
    fc->loaded = ixp::open_corpus(dir() + "/site/manifest.json");
    fc->env.corpus = fc->loaded.corpus.get();
    fc->env.fetcher = fc->loaded.fetcher.get();
    return fc;
}

// First element with this tag whose normalized text equals `text`.
inline ixp::NodeId find_element(const ixp::Corpus& corpus, const std::string& page,
                                const std::string& tag, const std::string& text) {
    auto doc = corpus.document(page);
    for (std::uint32_t i = 0; i < doc->size(); ++i) {
        const ixp::Node& n = doc->node(i);
        if (n.kind == ixp::NodeKind::Element && n.name == tag &&
            doc->text_content(i) == text)
            return ixp::NodeId{page, i};
    }
    throw std::runtime_error("fixture node not found: <" + tag + "> '" + text + "'");
}

inline ixp::NodeSet set_of(std::initializer_list<ixp::NodeId> ids) {
    ixp::NodeSet s;
    for (const auto& id : ids)
        s.insert(id);
    return s;
}

} // namespace fixtures

#endif
