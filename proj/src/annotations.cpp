#include "inferxpath/annotations.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "inferxpath/util.hpp"

namespace ixp {

using nlohmann::json;

namespace {

json parse_json(std::string_view bytes, const std::string& what) {
    json j = json::parse(bytes, nullptr, false);
    if (j.is_discarded())
        throw FormatError("malformed JSON in " + what);
    return j;
}

std::uint32_t require_node(const json& entry, const std::string& what) {
    if (!entry.contains("node") || !entry["node"].is_number_integer())
        throw FormatError(what + " entry missing integer \"node\"");
    auto v = entry["node"].get<std::int64_t>();
    if (v < 0)
        throw FormatError(what + " entry has negative node index");
    return static_cast<std::uint32_t>(v);
}

double require_number(const json& entry, const char* key, const std::string& what) {
    if (!entry.contains(key) || !entry[key].is_number())
        throw FormatError(what + " entry missing number \"" + key + "\"");
    return entry[key].get<double>();
}

std::string require_string(const json& entry, const char* key, const std::string& what) {
    if (!entry.contains(key) || !entry[key].is_string())
        throw FormatError(what + " entry missing string \"" + key + "\"");
    return entry[key].get<std::string>();
}

} // namespace

Annotations load_annotations(const Document& doc, std::string_view sidecar) {
    json j = parse_json(sidecar, "annotation sidecar");
    if (!j.is_object())
        throw FormatError("annotation sidecar must be a JSON object");

    Annotations out;
    std::vector<std::string> unresolved;

    auto check_node = [&](std::uint32_t index, const json& entry,
                          const std::string& what) -> bool {
        if (!doc.valid_index(index)) {
            unresolved.push_back(what + " entry addresses nonexistent node " +
                                 std::to_string(index));
            return false;
        }
        if (entry.contains("tag")) {
            if (!entry["tag"].is_string())
                throw FormatError(what + " entry has non-string \"tag\"");
            std::string tag = entry["tag"].get<std::string>();
            if (doc.node(index).name != tag) {
                unresolved.push_back(what + " entry for node " + std::to_string(index) +
                                     " expects tag <" + tag + "> but document has <" +
                                     doc.node(index).name + ">");
                return false;
            }
        }
        return true;
    };

    if (j.contains("boxes")) {
        if (!j["boxes"].is_array())
            throw FormatError("\"boxes\" must be an array");
        for (const json& entry : j["boxes"]) {
            std::uint32_t index = require_node(entry, "box");
            BoundingBox box{require_number(entry, "x0", "box"),
                            require_number(entry, "y0", "box"),
                            require_number(entry, "x1", "box"),
                            require_number(entry, "y1", "box")};
            if (!box.valid())
                throw FormatError("box for node " + std::to_string(index) +
                                  " has inverted coordinates");
            if (check_node(index, entry, "box"))
                out.boxes[index] = box;
        }
    }

    if (j.contains("fonts")) {
        if (!j["fonts"].is_array())
            throw FormatError("\"fonts\" must be an array");
        for (const json& entry : j["fonts"]) {
            std::uint32_t index = require_node(entry, "font");
            std::string family = require_string(entry, "family", "font");
            std::string style = require_string(entry, "style", "font");
            if (check_node(index, entry, "font")) {
                out.font_family[index] = family;
                out.font_style[index] = style;
            }
        }
    }

    if (j.contains("imageTags")) {
        if (!j["imageTags"].is_array())
            throw FormatError("\"imageTags\" must be an array");
        for (const json& entry : j["imageTags"]) {
            std::uint32_t index = require_node(entry, "imageTags");
            std::string model = entry.contains("model")
                                    ? require_string(entry, "model", "imageTags")
                                    : "nn-default";
            if (!entry.contains("tags") || !entry["tags"].is_array())
                throw FormatError("imageTags entry missing \"tags\" array");
            std::vector<ImageTag> tags;
            for (const json& t : entry["tags"]) {
                ImageTag tag{require_string(t, "tag", "tag"),
                             require_number(t, "confidence", "tag")};
                if (tag.confidence < 0.0 || tag.confidence > 1.0)
                    throw FormatError("confidence out of [0,1] for tag \"" + tag.tag + "\"");
                tags.push_back(std::move(tag));
            }
            if (!check_node(index, entry, "imageTags"))
                continue;
            const Node& n = doc.node(index);
            if (n.kind != NodeKind::Element || n.name != "img") {
                unresolved.push_back("imageTags entry for node " + std::to_string(index) +
                                     " does not address an <img> element");
                continue;
            }
            auto& slot = out.image_tags[{model, index}];
            slot.insert(slot.end(), tags.begin(), tags.end());
        }
    }

    if (!unresolved.empty()) {
        std::string msg = "sidecar for " + doc.url() + " has unresolved entries:";
        for (const std::string& u : unresolved)
            msg += "\n  " + u;
        throw ResolveError(msg);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Manifest load_manifest(const std::string& path) {
    json j = parse_json(read_file(path), "corpus manifest " + path);
    if (!j.is_object() || !j.contains("pages") || !j["pages"].is_array())
        throw FormatError("manifest must be an object with a \"pages\" array");

    Manifest m;
    m.base_dir = std::filesystem::path(path).parent_path().string();
    for (const json& p : j["pages"]) {
        ManifestPage page;
        page.url = require_string(p, "url", "page");
        page.file = require_string(p, "file", "page");
        if (p.contains("annotations"))
            page.annotations = require_string(p, "annotations", "page");
        m.pages.push_back(std::move(page));
    }
    if (j.contains("seeds")) {
        if (!j["seeds"].is_array())
            throw FormatError("\"seeds\" must be an array");
        for (const json& s : j["seeds"]) {
            if (!s.is_string())
                throw FormatError("seed entries must be strings");
            m.seeds.push_back(s.get<std::string>());
        }
    }
    return m;
}

} // namespace ixp
