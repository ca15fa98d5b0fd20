#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace sigens {

/// Whitespace-separated numeric table. Column 0 is the x value.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
};

/// One "# name name ..." header line, then one line per row at full precision.
void write_table(std::ostream& out, const Table& table);
Table read_table(std::istream& in);

/// Writes `path` and `path.json`. Returns the sidecar path.
std::string write_table_files(const std::string& path, const Table& table, const nlohmann::json& metadata);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

} // namespace sigens
