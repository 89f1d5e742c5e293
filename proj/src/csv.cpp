#include "inferxpath/csv.hpp"

#include <json.hpp>

namespace ixp {

std::string csv_escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += "\"\"";
        else
            out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out << ',';
        out << csv_escape(fields[i]);
    }
    out << "\r\n";
}

void write_csv(std::ostream& out, const Table& table) {
    write_csv_row(out, table.column_names);
    for (const auto& row : table.rows)
        write_csv_row(out, row);
}

std::string table_metadata_json(const Table& table) {
    nlohmann::ordered_json j;
    j["columns"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < table.column_names.size(); ++i) {
        nlohmann::ordered_json col;
        col["name"] = table.column_names[i];
        if (!table.column_paths[i].empty()) {
            col["xpath"] = table.column_paths[i];
            const Cost& c = table.column_costs[i];
            col["cost"] = {c.multi_level, c.rank_sum, c.length};
        }
        j["columns"].push_back(std::move(col));
    }
    j["failedColumns"] = table.failed_columns;
    return j.dump(2) + "\n";
}

} // namespace ixp
