#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace ctqw {

inline constexpr const char *kVersion = "1.0.0";

using Cell = std::variant<double, std::string>;

/// Ordered table of named columns plus a metadata header and a warnings
/// list. Every row has exactly one cell per column.
class RecordSet {
  public:
    RecordSet() = default;
    explicit RecordSet(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row) {
        detail::require(row.size() == columns_.size(),
                        "row has " + std::to_string(row.size()) + " cells for " +
                            std::to_string(columns_.size()) + " columns");
        rows_.push_back(std::move(row));
    }

    void set_meta(const std::string &key, const std::string &value) {
        detail::require(key != "warning" && key.find(':') == std::string::npos &&
                            key.find('\n') == std::string::npos &&
                            value.find('\n') == std::string::npos,
                        "invalid metadata entry '" + key + "'");
        for (auto &[k, v] : meta_) {
            if (k == key) {
                v = value;
                return;
            }
        }
        meta_.emplace_back(key, value);
    }

    void add_warning(const std::string &w) {
        detail::require(w.find('\n') == std::string::npos, "warnings are single lines");
        warnings_.push_back(w);
    }

    [[nodiscard]] const std::vector<std::string> &columns() const noexcept { return columns_; }
    [[nodiscard]] const std::vector<std::vector<Cell>> &rows() const noexcept { return rows_; }
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>> &metadata() const noexcept {
        return meta_;
    }
    [[nodiscard]] const std::vector<std::string> &warnings() const noexcept { return warnings_; }

    [[nodiscard]] std::size_t column_index(const std::string &name) const {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (columns_[i] == name) {
                return i;
            }
        }
        throw InvalidInput("no column '" + name + "'");
    }

    [[nodiscard]] double number(std::size_t row, const std::string &column) const {
        const Cell &c = rows_.at(row).at(column_index(column));
        if (const double *d = std::get_if<double>(&c)) {
            return *d;
        }
        throw InvalidInput("column '" + column + "' is not numeric");
    }

    bool operator==(const RecordSet &) const = default;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::string> warnings_;
};

enum class Format { csv, json };

inline Format format_from_string(const std::string &s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw InvalidInput("unknown format '" + s + "'");
}

namespace detail {

/// 17 significant digits: enough for every double to round-trip.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_double(const std::string &s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw InvalidInput("malformed number '" + s + "'");
    }
    return v;
}

inline std::string quote(const std::string &s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + '"';
}

/// Splits one CSV line; quoted fields come back as strings, bare ones as
/// numbers.
inline std::vector<Cell> split_csv(const std::string &line) {
    std::vector<Cell> out;
    std::size_t i = 0;
    while (true) {
        if (i < line.size() && line[i] == '"') {
            std::string field;
            ++i;
            while (true) {
                if (i >= line.size()) {
                    throw InvalidInput("unterminated quoted CSV field");
                }
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                field += line[i++];
            }
            out.emplace_back(std::move(field));
        } else {
            const std::size_t comma = line.find(',', i);
            const std::string field = line.substr(i, comma == std::string::npos ? comma : comma - i);
            out.emplace_back(parse_double(field));
            i = comma == std::string::npos ? line.size() : comma;
        }
        if (i >= line.size()) {
            break;
        }
        if (line[i] != ',') {
            throw InvalidInput("malformed CSV line");
        }
        ++i;
    }
    return out;
}

} // namespace detail

// CSV layout:
//   # key: value          metadata, in insertion order
//   # warning: text       one per warning
//   col_a,col_b,...       header
//   1.5,"text",...        rows; strings quoted, numbers bare
inline void write_csv(const RecordSet &rs, std::ostream &out) {
    for (const auto &[k, v] : rs.metadata()) {
        out << "# " << k << ": " << v << '\n';
    }
    for (const std::string &w : rs.warnings()) {
        out << "# warning: " << w << '\n';
    }
    for (std::size_t i = 0; i < rs.columns().size(); ++i) {
        out << (i ? "," : "") << rs.columns()[i];
    }
    out << '\n';
    for (const auto &row : rs.rows()) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out << ',';
            }
            if (const double *d = std::get_if<double>(&row[i])) {
                out << detail::format_double(*d);
            } else {
                out << detail::quote(std::get<std::string>(row[i]));
            }
        }
        out << '\n';
    }
}

inline RecordSet read_csv(std::istream &in) {
    std::string line;
    RecordSet rs;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> warnings;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!have_header && line.rfind("# ", 0) == 0) {
            const std::size_t colon = line.find(": ");
            if (colon == std::string::npos) {
                throw InvalidInput("malformed CSV metadata line");
            }
            std::string key = line.substr(2, colon - 2);
            std::string value = line.substr(colon + 2);
            if (key == "warning") {
                warnings.push_back(std::move(value));
            } else {
                meta.emplace_back(std::move(key), std::move(value));
            }
            continue;
        }
        if (!have_header) {
            std::vector<std::string> columns;
            std::stringstream ss(line);
            std::string col;
            while (std::getline(ss, col, ',')) {
                columns.push_back(col);
            }
            rs = RecordSet(std::move(columns));
            have_header = true;
            continue;
        }
        if (line.empty()) {
            continue;
        }
        rs.add_row(detail::split_csv(line));
    }
    if (!have_header) {
        throw InvalidInput("CSV input has no header line");
    }
    for (auto &[k, v] : meta) {
        rs.set_meta(k, v);
    }
    for (auto &w : warnings) {
        rs.add_warning(w);
    }
    return rs;
}

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const RecordSet &rs) {
    ordered_json j;
    j["metadata"] = ordered_json::object();
    for (const auto &[k, v] : rs.metadata()) {
        j["metadata"][k] = v;
    }
    j["warnings"] = rs.warnings();
    j["columns"] = rs.columns();
    j["rows"] = ordered_json::array();
    for (const auto &row : rs.rows()) {
        ordered_json obj = ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (const double *d = std::get_if<double>(&row[i])) {
                // JSON has no NaN/inf; those become null and read back as NaN.
                obj[rs.columns()[i]] = std::isfinite(*d) ? ordered_json(*d) : ordered_json(nullptr);
            } else {
                obj[rs.columns()[i]] = std::get<std::string>(row[i]);
            }
        }
        j["rows"].push_back(std::move(obj));
    }
    return j;
}

inline RecordSet from_json(const ordered_json &j) {
    try {
        RecordSet rs(j.at("columns").get<std::vector<std::string>>());
        for (const auto &row : j.at("rows")) {
            std::vector<Cell> cells;
            for (const std::string &c : rs.columns()) {
                const auto &v = row.at(c);
                if (v.is_string()) {
                    cells.emplace_back(v.get<std::string>());
                } else if (v.is_null()) {
                    cells.emplace_back(std::numeric_limits<double>::quiet_NaN());
                } else {
                    cells.emplace_back(v.get<double>());
                }
            }
            rs.add_row(std::move(cells));
        }
        for (const auto &[k, v] : j.at("metadata").items()) {
            rs.set_meta(k, v.get<std::string>());
        }
        for (const auto &w : j.at("warnings")) {
            rs.add_warning(w.get<std::string>());
        }
        return rs;
    } catch (const nlohmann::json::exception &e) {
        throw InvalidInput(std::string("malformed JSON record set: ") + e.what());
    }
}

inline void write_json(const RecordSet &rs, std::ostream &out) { out << to_json(rs).dump(1) << '\n'; }

inline RecordSet read_json(std::istream &in) {
    try {
        return from_json(ordered_json::parse(in));
    } catch (const nlohmann::json::parse_error &e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

inline void emit(const RecordSet &rs, Format format, std::ostream &out) {
    if (format == Format::csv) {
        write_csv(rs, out);
    } else {
        write_json(rs, out);
    }
}

/// Writes to `path`, or to stdout when path is empty or "-".
inline void emit(const RecordSet &rs, Format format, const std::string &path) {
    if (path.empty() || path == "-") {
        emit(rs, format, std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw InvalidInput("cannot open '" + path + "' for writing");
    }
    emit(rs, format, out);
    out.flush();
    if (!out) {
        throw InvalidInput("write failed for '" + path + "'");
    }
}

} // namespace ctqw
