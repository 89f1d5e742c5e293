// inferxpath: evaluate XPath-BE over an HTML corpus, recognize semantic value
// sets, infer connecting paths, and emit relation tables.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "inferxpath/annotations.hpp"
#include "inferxpath/csv.hpp"
#include "inferxpath/eval.hpp"
#include "inferxpath/fetch.hpp"
#include "inferxpath/html.hpp"
#include "inferxpath/infer.hpp"
#include "inferxpath/semantic.hpp"
#include "inferxpath/util.hpp"

using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitEval = 3;
constexpr int kExitNoPath = 4;

struct Options {
    std::string manifest;
    std::string fetch_mode = "corpus-only";
    int max_fetch = 100;
    double epsilon = 0.5;
    int depth = 6;
    std::string output = "json";
    std::string recognizer_file;
    std::vector<std::string> variables;
};

struct Session {
    ixp::LoadedCorpus loaded;
    ixp::EvalEnv env;
    ixp::RecognizerRegistry registry;
};

Session open_session(const Options& opt) {
    if (opt.manifest.empty())
        throw ixp::FormatError("no manifest given (use --manifest or INFERXPATH_MANIFEST)");
    ixp::FetchPolicy policy;
    policy.mode = opt.fetch_mode == "corpus-then-http" ? ixp::FetchMode::CorpusThenHttp
                                                       : ixp::FetchMode::CorpusOnly;
    policy.max_fetch = opt.max_fetch;

    Session s{ixp::open_corpus(opt.manifest, policy), {}, ixp::RecognizerRegistry::builtins()};
    s.env.corpus = s.loaded.corpus.get();
    s.env.fetcher = s.loaded.fetcher.get();
    s.env.max_fetch = opt.max_fetch;
    s.env.epsilon = opt.epsilon;
    s.env.variables["nn"] = "nn-default";
    for (const std::string& kv : opt.variables) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ixp::FormatError("--var expects name=value, got: " + kv);
        s.env.variables[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (!opt.recognizer_file.empty())
        s.registry.load_file(opt.recognizer_file);
    return s;
}

// Seed pages are the default evaluation context; a corpus without seeds
// evaluates from every loaded page.
ixp::NodeSet context_roots(const Session& s) {
    ixp::NodeSet roots;
    for (const std::string& url : s.loaded.corpus->seed_urls)
        roots.insert(ixp::NodeId{url, 0});
    if (roots.empty())
        roots = ixp::corpus_roots(*s.loaded.corpus);
    return roots;
}

std::string node_tag(const ixp::Document& doc, std::uint32_t index) {
    const ixp::Node& n = doc.node(index);
    switch (n.kind) {
    case ixp::NodeKind::Element: return n.name;
    case ixp::NodeKind::Attribute: return "@" + n.name;
    case ixp::NodeKind::Text: return "#text";
    case ixp::NodeKind::Comment: return "#comment";
    }
    return "?";
}

void print_node_records(const ixp::NodeSet& nodes, const Session& s, const Options& opt,
                        const std::string& set_name = "") {
    bool csv_header = opt.output == "csv";
    if (csv_header) {
        std::vector<std::string> header = {"page", "node", "tag", "text"};
        if (!set_name.empty())
            header.push_back("recognizer");
        ixp::write_csv_row(std::cout, header);
    }
    for (const ixp::NodeId& id : nodes) {
        auto doc = s.loaded.corpus->document(id.page);
        std::string tag = node_tag(*doc, id.index);
        std::string text = doc->text_content(id.index);
        if (opt.output == "plain") {
            std::cout << id.page << '\t' << id.index << '\t' << tag << '\t' << text << '\n';
        } else if (opt.output == "csv") {
            std::vector<std::string> row = {id.page, std::to_string(id.index), tag, text};
            if (!set_name.empty())
                row.push_back(set_name);
            ixp::write_csv_row(std::cout, row);
        } else {
            ordered_json j;
            j["page"] = id.page;
            j["node"] = id.index;
            j["tag"] = tag;
            j["text"] = text;
            if (!set_name.empty())
                j["recognizer"] = set_name;
            std::cout << j.dump() << '\n';
        }
    }
}

// Set specs are inline JSON ({"xpath": "..."} / {"recognizer": "..."}) or
// @file references to the same.
ixp::SemanticSet resolve_set_spec(const std::string& spec, const Session& s) {
    std::string text = spec;
    if (!spec.empty() && spec[0] == '@')
        text = ixp::read_file(spec.substr(1));
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw ixp::FormatError("set spec must be JSON like {\"xpath\": \"//td\"}: " + spec);
    if (j.contains("xpath"))
        return ixp::set_from_xpath(ixp::parse(j["xpath"].get<std::string>()),
                                   *s.loaded.corpus, s.env);
    if (j.contains("recognizer")) {
        std::string name = j["recognizer"].get<std::string>();
        const ixp::Recognizer* r = s.registry.find(name);
        if (!r)
            throw ixp::FormatError("unknown recognizer: " + name);
        return ixp::recognize(*r, *s.loaded.corpus, s.env);
    }
    throw ixp::FormatError("set spec needs \"xpath\" or \"recognizer\": " + spec);
}

int cmd_eval(const Options& opt, const std::string& expr_text) {
    ixp::ExprPtr expr;
    try {
        expr = ixp::parse(expr_text);
    } catch (const ixp::SyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return kExitUsage;
    }
    Session s = open_session(opt);
    ixp::Value v = ixp::evaluate(expr, context_roots(s), s.env);
    if (const ixp::NodeSet* ns = std::get_if<ixp::NodeSet>(&v)) {
        print_node_records(*ns, s, opt);
    } else {
        // scalar result: print the value itself
        if (opt.output == "json") {
            ordered_json j;
            j["value"] = ixp::value_to_string(v, s.env);
            std::cout << j.dump() << '\n';
        } else {
            std::cout << ixp::value_to_string(v, s.env) << '\n';
        }
    }
    return kExitOk;
}

int cmd_recognize(const Options& opt, const std::string& name) {
    Session s = open_session(opt);
    const ixp::Recognizer* r = s.registry.find(name);
    if (!r) {
        std::cerr << "unknown recognizer: " << name << "\n";
        return kExitUsage;
    }
    ixp::SemanticSet set = ixp::recognize(*r, *s.loaded.corpus, s.env);
    print_node_records(set.members, s, opt, name);
    return kExitOk;
}

ixp::Constraint parse_constraint(const nlohmann::json& j) {
    if (!j.is_object() || j.size() != 1)
        throw ixp::FormatError("each constraint must be a one-key object");
    if (j.contains("withPrefix"))
        return ixp::Constraint::with_prefix(ixp::parse(j["withPrefix"].get<std::string>()));
    if (j.contains("byAxis")) {
        std::vector<ixp::Axis> axes;
        for (const auto& a : j["byAxis"]) {
            auto axis = ixp::axis_from_name(a.get<std::string>());
            if (!axis)
                throw ixp::FormatError("unknown axis in byAxis: " + a.get<std::string>());
            axes.push_back(*axis);
        }
        return ixp::Constraint::by_axis(std::move(axes));
    }
    if (j.contains("dropPrefix"))
        return ixp::Constraint::drop_prefix(ixp::parse(j["dropPrefix"].get<std::string>()));
    if (j.contains("withinPrefix"))
        return ixp::Constraint::within_prefix(
            ixp::parse(j["withinPrefix"].get<std::string>()));
    throw ixp::FormatError("unknown constraint kind");
}

int cmd_infer(const Options& opt, const std::string& spec_path) {
    nlohmann::json spec;
    try {
        spec = nlohmann::json::parse(ixp::read_file(spec_path));
    } catch (const std::exception& e) {
        std::cerr << "bad inference spec: " << e.what() << "\n";
        return kExitUsage;
    }
    Session s = open_session(opt);

    ixp::PathQuery q;
    if (!spec.contains("source") || !spec.contains("target"))
        throw ixp::FormatError("inference spec needs \"source\" and \"target\"");
    q.source = resolve_set_spec(spec["source"].dump(), s).members;
    q.target = resolve_set_spec(spec["target"].dump(), s).members;
    q.mode = spec.value("mode", "exact") == "sample" ? ixp::MatchMode::Sample
                                                     : ixp::MatchMode::Exact;
    q.limit = spec.value("limit", 10);
    q.depth = spec.value("depth", opt.depth);
    if (spec.contains("constraints"))
        for (const auto& c : spec["constraints"])
            q.constraints.push_back(parse_constraint(c));

    ixp::PathStream stream(std::move(q), s.env);
    int produced = 0;
    while (auto path = stream.next()) {
        ordered_json j;
        j["xpath"] = ixp::pretty_print(path->expr);
        j["cost"] = {path->cost.multi_level, path->cost.rank_sum, path->cost.length};
        j["verified"] = path->verified;
        std::cout << j.dump() << std::endl; // flush per line: consumers see laziness
        ++produced;
    }
    if (produced == 0)
        std::cerr << "no connecting path found within bounds"
                  << (stream.stats().space_exhausted ? " (search space exhausted)" : "")
                  << "\n";
    return kExitOk;
}

int cmd_schema(const Options& opt, const std::string& key_spec,
               const std::vector<std::string>& value_specs, const std::string& out_path) {
    Session s = open_session(opt);
    ixp::SemanticSet key = resolve_set_spec(key_spec, s);
    std::vector<ixp::SemanticSet> values;
    for (const std::string& v : value_specs)
        values.push_back(resolve_set_spec(v, s));

    ixp::Table table = ixp::assemble_table(key, values, s.env, opt.depth);

    std::ofstream csv(out_path, std::ios::binary);
    if (!csv)
        throw ixp::Error("cannot write " + out_path);
    ixp::write_csv(csv, table);
    csv.close();

    std::ofstream meta(out_path + ".paths.json", std::ios::binary);
    meta << ixp::table_metadata_json(table);
    meta.close();

    for (std::size_t i : table.failed_columns)
        std::cerr << "no path found for value set " << i << " (" << values[i].name << ")\n";
    return table.failed_columns.empty() ? kExitOk : kExitNoPath;
}

int cmd_dump(const Options& opt) {
    Session s = open_session(opt);
    for (const std::string& url : s.loaded.corpus->page_urls()) {
        auto doc = s.loaded.corpus->document(url);
        for (std::uint32_t i = 0; i < doc->size(); ++i) {
            const ixp::Node& n = doc->node(i);
            ordered_json j;
            j["page"] = url;
            j["node"] = i;
            j["kind"] = ixp::node_kind_name(n.kind);
            j["name"] = n.name;
            j["value"] = n.value;
            if (n.parent)
                j["parent"] = *n.parent;
            std::cout << j.dump() << '\n';
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"XPath-BE evaluation and path inference over HTML corpora"};
    app.require_subcommand(1);

    Options opt;
    if (const char* env = std::getenv("INFERXPATH_MANIFEST"))
        opt.manifest = env;
    app.add_option("--manifest", opt.manifest, "corpus manifest JSON");
    app.add_option("--fetch-mode", opt.fetch_mode, "corpus-only|corpus-then-http")
        ->check(CLI::IsMember({"corpus-only", "corpus-then-http"}));
    app.add_option("--max-fetch", opt.max_fetch, "fetch budget per evaluation");
    app.add_option("--epsilon", opt.epsilon, "visual axis tolerance in CSS px");
    app.add_option("--depth", opt.depth, "inference search depth bound");
    app.add_option("--output", opt.output, "json|csv|plain")
        ->check(CLI::IsMember({"json", "csv", "plain"}));
    app.add_option("--recognizers", opt.recognizer_file, "extra recognizer registry JSON");
    app.add_option("--var", opt.variables, "XPath variable binding name=value");

    std::string eval_expr;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate an XPath-BE expression");
    eval_cmd->add_option("expr", eval_expr, "expression")->required();

    std::string recognizer_name;
    auto* rec_cmd = app.add_subcommand("recognize", "run a semantic value recognizer");
    rec_cmd->add_option("name", recognizer_name, "recognizer name")->required();

    std::string infer_spec;
    auto* infer_cmd = app.add_subcommand("infer", "infer connecting paths");
    infer_cmd->add_option("--spec", infer_spec, "inference request JSON")->required();

    std::string key_spec, out_path = "table.csv";
    std::vector<std::string> value_specs;
    auto* schema_cmd = app.add_subcommand("schema", "emit a relation table");
    schema_cmd->add_option("--key", key_spec, "key set spec")->required();
    schema_cmd->add_option("--value", value_specs, "value set spec (repeatable)");
    schema_cmd->add_option("--out", out_path, "output CSV path");

    auto* dump_cmd = app.add_subcommand("dump-corpus", "dump all parsed nodes");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eval_cmd)
            return cmd_eval(opt, eval_expr);
        if (*rec_cmd)
            return cmd_recognize(opt, recognizer_name);
        if (*infer_cmd)
            return cmd_infer(opt, infer_spec);
        if (*schema_cmd)
            return cmd_schema(opt, key_spec, value_specs, out_path);
        if (*dump_cmd)
            return cmd_dump(opt);
    } catch (const ixp::SyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ixp::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ixp::EvalError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitEval;
    } catch (const ixp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEval;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEval;
    }
    return kExitUsage;
}
