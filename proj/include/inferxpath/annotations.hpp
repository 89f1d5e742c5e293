#ifndef INFERXPATH_ANNOTATIONS_HPP
#define INFERXPATH_ANNOTATIONS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "inferxpath/dom.hpp"

namespace ixp {

// Parse an annotation sidecar for `doc`:
//   {"boxes":    [{"node": int, "tag": str?, "x0": n, "y0": n, "x1": n, "y1": n}],
//    "fonts":    [{"node": int, "family": str, "style": str}],
//    "imageTags":[{"node": int, "model": str,
//                  "tags": [{"tag": str, "confidence": n}]}]}
// Image tags without a model name fall under "nn-default".
//
// Throws FormatError on malformed content (including x1 < x0 or confidence
// outside [0,1]) and ResolveError listing every entry whose node address does
// not exist, whose optional tag checksum disagrees, or whose image tag target
// is not an <img> element.
Annotations load_annotations(const Document& doc, std::string_view sidecar);

struct ManifestPage {
    std::string url;
    std::string file;        // relative to the manifest directory
    std::string annotations; // optional sidecar path
};

struct Manifest {
    std::string base_dir;
    std::vector<ManifestPage> pages;
    std::vector<std::string> seeds; // empty list in the file means "all pages"
};

// Corpus manifest: {"pages": [{"url": str, "file": path, "annotations": path?}],
//                   "seeds": [str]}
Manifest load_manifest(const std::string& path);

std::string read_file(const std::string& path);

} // namespace ixp

#endif
