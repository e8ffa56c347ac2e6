#include "gridcap/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gridcap/core.hpp"

namespace gridcap::csv {

int Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

Table parse(std::string_view text) {
    Table table;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool row_has_data = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        if (table.header.empty()) {
            table.header = std::move(row);
        } else {
            table.rows.push_back(std::move(row));
        }
        row.clear();
        row_has_data = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_data = true;
                break;
            case ',':
                end_field();
                row_has_data = true;
                break;
            case '\r':
                break;
            case '\n':
                if (row_has_data || !field.empty() || !row.empty()) end_row();
                break;
            default:
                field.push_back(c);
                row_has_data = true;
        }
    }
    if (in_quotes) throw Error("csv: unterminated quoted field");
    if (row_has_data || !field.empty() || !row.empty()) end_row();
    return table;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string escape(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i != 0) line.push_back(',');
        line += escape(fields[i]);
    }
    return line;
}

void write_file(const std::filesystem::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out << join_row(header) << '\n';
    for (const auto& row : rows) out << join_row(row) << '\n';
    if (!out) throw Error("write failed: " + path.string());
}

std::string format_fixed(double value, int decimals) {
    if (!std::isfinite(value)) throw Error("cannot format non-finite value");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    // avoid an IEEE negative zero leaking into reports
    std::string s(buf);
    if (s.find_first_of("123456789") == std::string::npos && s[0] == '-') s.erase(0, 1);
    return s;
}

std::string format_exact(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw Error("cannot format value");
    return std::string(buf, ptr);
}

double parse_double(std::string_view field) {
    // from_chars does not skip whitespace; trim first
    std::size_t begin = 0, end = field.size();
    while (begin < end && (field[begin] == ' ' || field[begin] == '\t')) ++begin;
    while (end > begin && (field[end - 1] == ' ' || field[end - 1] == '\t')) --end;
    const std::string_view body = field.substr(begin, end - begin);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
        throw std::invalid_argument("not a number: '" + std::string(field) + "'");
    }
    return value;
}

}  // namespace gridcap::csv
