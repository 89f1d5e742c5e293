#ifndef INFERXPATH_HTML_HPP
#define INFERXPATH_HTML_HPP

#include <string>
#include <string_view>

#include "inferxpath/dom.hpp"

namespace ixp {

// Error-tolerant HTML parsing in the HTML5 tree-construction style:
// implied html/head/body, void elements, implied end tags, entity decoding,
// raw-text elements, and implied <table> scaffolding for stray table parts.
// Unlike a strict HTML5 parser, stray td/th keep their written position
// inside table content instead of being dropped, so tables written without
// row wrappers survive as authored.
//
// Throws CharsetError when the document declares an unsupported encoding.
Document parse_document(const std::string& url, std::string_view html);

// Entity decoding used by the tokenizer; exposed for tests.
std::string decode_entities(std::string_view s);

} // namespace ixp

#endif
