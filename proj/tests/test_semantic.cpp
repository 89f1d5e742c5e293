#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "inferxpath/html.hpp"
#include "inferxpath/semantic.hpp"
#include "support/fixtures.hpp"
#include "support/random_gen.hpp"

using namespace ixp;

namespace {

struct OnePage {
    Corpus corpus;
    EvalEnv env;

    explicit OnePage(const std::string& html, const std::string& url = "t.html") {
        corpus.add_page(std::make_shared<Document>(parse_document(url, html)));
        env.corpus = &corpus;
    }
};

std::vector<std::string> member_texts(const SemanticSet& s, const EvalEnv& env) {
    std::vector<std::string> out;
    for (const NodeId& id : s.members)
        out.push_back(env.string_value(id));
    return out;
}

const Recognizer& builtin(const RecognizerRegistry& reg, const std::string& name) {
    const Recognizer* r = reg.find(name);
    REQUIRE(r);
    return *r;
}

} // namespace

TEST_CASE("http-method recognizer finds the GET span on the api fixture") {
    auto fc = fixtures::open_main();
    auto reg = RecognizerRegistry::builtins();
    SemanticSet s = recognize(builtin(reg, "http-method"), fc->corpus(), fc->env);
    REQUIRE(s.members.size() == 1);
    const NodeId& id = s.members.front();
    CHECK(id.page == "api.html");
    CHECK(fc->corpus().document(id.page)->node(id.index).name == "span");
    CHECK(s.recognizer == "http-method");
}

TEST_CASE("number recognizer reports the cell, not its text node") {
    OnePage page("<table><tr><td>42</td><td>many</td></tr></table>");
    auto reg = RecognizerRegistry::builtins();
    SemanticSet s = recognize(builtin(reg, "number"), page.corpus, page.env);
    REQUIRE(s.members.size() == 1);
    const Node& n = page.corpus.document("t.html")->node(s.members.front().index);
    CHECK(n.kind == NodeKind::Element);
    CHECK(n.name == "td");
}

TEST_CASE("minimality: the deepest node carrying the value wins") {
    OnePage page("<div><td><span>42</span></td><td>42 total</td></div>");
    auto reg = RecognizerRegistry::builtins();
    SemanticSet s = recognize(builtin(reg, "number"), page.corpus, page.env);
    // the span is the minimal subtree owning "42"; "42 total" never
    // whole-matches
    REQUIRE(s.members.size() == 1);
    CHECK(page.corpus.document("t.html")->node(s.members.front().index).name == "span");
}

TEST_CASE("currency and json built-ins on the api fixture") {
    auto fc = fixtures::open_main();
    auto reg = RecognizerRegistry::builtins();
    SemanticSet cur = recognize(builtin(reg, "currency"), fc->corpus(), fc->env);
    CHECK(member_texts(cur, fc->env) == std::vector<std::string>{"$4.99"});

    SemanticSet js = recognize(builtin(reg, "json"), fc->corpus(), fc->env);
    REQUIRE(js.members.size() == 1);
    CHECK(fc->env.string_value(js.members.front()) == "{\"id\": 7}");
}

TEST_CASE("json values split across sibling subtrees do not match") {
    OnePage page(R"(<p><b>{"a":</b> 1}</p><p><code>{"b": [1, 2]}</code></p>)");
    auto reg = RecognizerRegistry::builtins();
    SemanticSet s = recognize(builtin(reg, "json"), page.corpus, page.env);
    REQUIRE(s.members.size() == 1);
    CHECK(page.env.string_value(s.members.front()) == "{\"b\": [1, 2]}");
}

TEST_CASE("empty corpus yields an empty set") {
    Corpus corpus;
    EvalEnv env;
    env.corpus = &corpus;
    auto reg = RecognizerRegistry::builtins();
    CHECK(recognize(builtin(reg, "number"), corpus, env).members.empty());
}

TEST_CASE("scope restricts and never adds members") {
    OnePage page("<div id='a'><p>10</p></div><div id='b'><p>20</p></div>");
    auto reg = RecognizerRegistry::builtins();
    const Recognizer& number = builtin(reg, "number");

    SemanticSet all = recognize(number, page.corpus, page.env);
    CHECK(all.members.size() == 2);
    SemanticSet scoped =
        recognize(number, page.corpus, page.env, parse("//div[@id='a']"));
    CHECK(member_texts(scoped, page.env) == std::vector<std::string>{"10"});
    CHECK(scoped.members.subset_of(all.members));

    CHECK_THROWS_AS(recognize(number, page.corpus, page.env, parse("count(//div)")),
                    ScopeError);
}

TEST_CASE("scope monotonicity on random documents") {
    testgen::Rng rng(77);
    auto reg = RecognizerRegistry::builtins();
    const Recognizer& number = builtin(reg, "number");
    for (int round = 0; round < 40; ++round) {
        Corpus corpus;
        corpus.add_page(std::make_shared<Document>(testgen::random_document(rng, 30)));
        EvalEnv env;
        env.corpus = &corpus;
        SemanticSet whole = recognize(number, corpus, env);
        SemanticSet scoped = recognize(number, corpus, env, parse("//a|//b"));
        CHECK(scoped.members.subset_of(whole.members));
    }
}

TEST_CASE("xpath-provided sets record provenance") {
    auto fc = fixtures::open_main();
    SemanticSet s = set_from_xpath(parse("//tr/td[1]"), fc->corpus(), fc->env);
    CHECK(member_texts(s, fc->env) == std::vector<std::string>{"Alice", "Bob"});
    CHECK(s.xpath != nullptr);
    CHECK(s.name == "//tr/td[1]");

    SemanticSet empty = set_from_xpath(parse("//video"), fc->corpus(), fc->env);
    CHECK(empty.members.empty());
}

TEST_CASE("definition lists: //dd collects every definiens node") {
    OnePage page("<dl><dt>alpha</dt><dd>first letter</dd>"
                 "<dt>beta</dt><dd>second letter</dd></dl>");
    SemanticSet s = set_from_xpath(parse("//dd"), page.corpus, page.env);
    CHECK(member_texts(s, page.env) ==
          std::vector<std::string>{"first letter", "second letter"});
}

TEST_CASE("partition by structure splits on tag paths") {
    OnePage page("<table><tr><td>1</td></tr></table><div><span>2</span></div>");
    EvalEnv& env = page.env;
    SemanticSet s = set_from_xpath(parse("//td|//span"), page.corpus, env);
    REQUIRE(s.members.size() == 2);

    auto groups = partition_by_structure(s, page.corpus);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].members.size() == 1);
    CHECK(groups[1].members.size() == 1);
    CHECK(groups[0].name.find("html/body/table/tr/td") != std::string::npos);
    CHECK(groups[1].name.find("html/body/div/span") != std::string::npos);

    SemanticSet homogeneous = set_from_xpath(parse("//td"), page.corpus, env);
    auto one = partition_by_structure(homogeneous, page.corpus);
    REQUIRE(one.size() == 1);
    CHECK(one[0].members == homogeneous.members);

    SemanticSet none = set_from_xpath(parse("//video"), page.corpus, env);
    CHECK(partition_by_structure(none, page.corpus).empty());
}

TEST_CASE("partition is a partition on random sets") {
    testgen::Rng rng(31);
    for (int round = 0; round < 40; ++round) {
        Corpus corpus;
        corpus.add_page(std::make_shared<Document>(testgen::random_document(rng, 40)));
        EvalEnv env;
        env.corpus = &corpus;
        SemanticSet s = set_from_xpath(parse("//*"), corpus, env);
        auto groups = partition_by_structure(s, corpus);
        NodeSet merged;
        std::size_t total = 0;
        for (const auto& g : groups) {
            for (const NodeId& id : g.members) {
                CHECK(!merged.contains(id)); // disjoint
                merged.insert(id);
            }
            total += g.members.size();
        }
        CHECK(total == s.members.size());
        CHECK(merged == s.members); // covering
    }
}

TEST_CASE("registry: built-ins, user overrides, bad patterns") {
    auto reg = RecognizerRegistry::builtins();
    CHECK(reg.names() ==
          std::vector<std::string>{"number", "currency", "http-method", "json"});

    namespace fs = std::filesystem;
    fs::path file = fs::temp_directory_path() / "ixp_recognizers.json";
    std::ofstream(file) << R"([
        {"name": "number", "pattern": "[0-9]+", "wholeMatch": true},
        {"name": "hexcolor", "pattern": "#[0-9a-fA-F]{6}", "wholeMatch": false}
    ])";
    reg.load_file(file.string());
    CHECK(reg.names().size() == 5);
    CHECK(reg.find("number")->pattern() == "[0-9]+"); // overridden in place
    CHECK(reg.find("hexcolor") != nullptr);
    fs::remove(file);

    CHECK_THROWS_AS(Recognizer("broken", "([", true), PatternError);
}

TEST_CASE("overridden number recognizer stops matching signed values") {
    OnePage page("<p><b>-5</b></p><p><i>17</i></p>");
    auto reg = RecognizerRegistry::builtins();
    SemanticSet with_sign = recognize(builtin(reg, "number"), page.corpus, page.env);
    CHECK(with_sign.members.size() == 2);

    RecognizerRegistry reg2 = RecognizerRegistry::builtins();
    reg2.add(Recognizer("number", "[0-9]+", true));
    SemanticSet unsigned_only = recognize(builtin(reg2, "number"), page.corpus, page.env);
    CHECK(member_texts(unsigned_only, page.env) == std::vector<std::string>{"17"});
}
