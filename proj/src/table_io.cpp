#include "sigens/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sigens/types.hpp"

namespace sigens {

namespace {

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(const std::string& token)
{
    if (token == "nan")
        return std::nan("");
    if (token == "inf")
        return INFINITY;
    if (token == "-inf")
        return -INFINITY;
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size())
        throw Error(ErrorKind::io, "bad number '" + token + "' in table");
    return v;
}

} // namespace

void Table::add_row(std::vector<double> row)
{
    if (!columns.empty() && row.size() != columns.size())
        throw Error(ErrorKind::invalid_input, "row has " + std::to_string(row.size()) + " values for " +
                                                  std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

void write_table(std::ostream& out, const Table& table)
{
    out << '#';
    for (const auto& c : table.columns)
        out << ' ' << c;
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j)
            out << (j ? " " : "") << format_number(row[j]);
        out << '\n';
    }
}

Table read_table(std::istream& in)
{
    Table table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string token;
        if (line.front() == '#') {
            ss >> token;
            while (ss >> token)
                table.columns.push_back(token);
            continue;
        }
        std::vector<double> row;
        while (ss >> token)
            row.push_back(parse_number(token));
        table.add_row(std::move(row));
    }
    return table;
}

std::string write_table_files(const std::string& path, const Table& table, const nlohmann::json& metadata)
{
    {
        std::ofstream out(path);
        if (!out)
            throw Error(ErrorKind::io, "cannot write '" + path + "'");
        write_table(out, table);
        if (!out)
            throw Error(ErrorKind::io, "failed writing '" + path + "'");
    }
    const std::string sidecar = path + ".json";
    write_json_file(sidecar, metadata);
    return sidecar;
}

void write_json_file(const std::string& path, const nlohmann::json& j)
{
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::io, "cannot write '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out)
        throw Error(ErrorKind::io, "failed writing '" + path + "'");
}

nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::io, "cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::io, "'" + path + "' is not valid JSON: " + e.what());
    }
}

} // namespace sigens
