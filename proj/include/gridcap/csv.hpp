#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

// Minimal RFC-4180-style CSV support: quoted fields, embedded commas and
// newlines, CRLF tolerance on read, LF-only output. All project files are
// UTF-8 comma-separated with a header row.

namespace gridcap::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column, or -1 when absent.
    int column(std::string_view name) const;
    // 1-based line number of rows[i] in the source file (header is line 1).
    static int line_of_row(std::size_t row_index) { return static_cast<int>(row_index) + 2; }
};

Table parse(std::string_view text);
Table read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);
std::string join_row(const std::vector<std::string>& fields);
void write_file(const std::filesystem::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

// Numeric field formats. Report files use fixed-point (3 decimals for MW
// and km, 2 for MtCO2e, 4 for dimensionless shares); canonical intermediate
// files use the shortest representation that round-trips exactly.
std::string format_fixed(double value, int decimals);
std::string format_exact(double value);
double parse_double(std::string_view field);  // throws std::invalid_argument

}  // namespace gridcap::csv
