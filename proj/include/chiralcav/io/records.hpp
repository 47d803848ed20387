#pragma once

// Tidy tables and their byte-stable text forms. Numbers are always printed
// with 17 significant digits so that identical inputs give identical files.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "../errors.hpp"

namespace chiralcav::io {

using Cell = std::variant<double, long long, std::string>;

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row)
    {
        if (row.size() != columns.size()) throw std::logic_error("table row width does not match header");
        rows.push_back(std::move(row));
    }
    std::size_t column(const std::string& name) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw std::out_of_range("no column " + name);
    }
};

inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0"; // folds -0 as well
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string json_string(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out + "\"";
}

struct CsvCell
{
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return csv_field(s); }
};

struct JsonCell
{
    std::string operator()(double v) const { return std::isfinite(v) ? format_number(v) : "null"; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return json_string(s); }
};

} // namespace detail

inline void write_csv(std::ostream& out, const Table& t)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << detail::csv_field(t.columns[i]);
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << std::visit(detail::CsvCell{}, row[i]);
        out << '\n';
    }
}

/// Array of objects, one per row, keys in column order.
inline void write_json(std::ostream& out, const Table& t)
{
    out << "[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out << (r ? ",\n  {" : "\n  {");
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            out << (i ? ", " : "") << detail::json_string(t.columns[i]) << ": "
                << std::visit(detail::JsonCell{}, t.rows[r][i]);
        out << "}";
    }
    out << (t.rows.empty() ? "]\n" : "\n]\n");
}

inline void write_table(std::ostream& out, const Table& t, bool json)
{
    json ? write_json(out, t) : write_csv(out, t);
}

inline std::ofstream open_output(const std::string& path)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidParameter("output.path: cannot open '" + path + "' for writing");
    return f;
}

inline std::string sidecar_path(const std::string& data_path) { return data_path + ".meta.json"; }

/// Run metadata lives beside the data file, never inside it.
inline void write_sidecar(const std::string& data_path, const nlohmann::json& meta)
{
    auto f = open_output(sidecar_path(data_path));
    f << meta.dump(2) << '\n';
}

} // namespace chiralcav::io
