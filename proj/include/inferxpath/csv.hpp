#ifndef INFERXPATH_CSV_HPP
#define INFERXPATH_CSV_HPP

#include <ostream>
#include <string>
#include <vector>

#include "inferxpath/infer.hpp"

namespace ixp {

// RFC 4180: CRLF line endings, fields quoted when they contain commas,
// quotes or line breaks, embedded quotes doubled.
std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
void write_csv(std::ostream& out, const Table& table);

// Sidecar metadata: the inferred XPath and cost per value column, as JSON.
std::string table_metadata_json(const Table& table);

} // namespace ixp

#endif
