// io.hpp — CSV tables with a '#' provenance header, run manifests, content hashing

#pragma once

#include "json.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "optoamp/errors.hpp"

namespace optoamp {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Locale-independent, round-trippable number formatting. Output bytes depend only on the value.
inline std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : cols_(std::move(columns)) {
        if (cols_.empty()) throw ConfigError("CsvTable: no columns");
    }

    void add_row(const std::vector<double>& row) {
        if (row.size() != cols_.size())
            throw ConfigError("CsvTable: row has " + std::to_string(row.size()) + " fields, expected " +
                              std::to_string(cols_.size()));
        rows_.push_back(row);
    }

    const std::vector<std::string>& columns() const { return cols_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    std::vector<double> column(std::string_view name) const {
        for (std::size_t c = 0; c < cols_.size(); ++c) {
            if (cols_[c] != name) continue;
            std::vector<double> out;
            out.reserve(rows_.size());
            for (const auto& r : rows_) out.push_back(r[c]);
            return out;
        }
        throw ConfigError("CsvTable: no column '" + std::string(name) + "'");
    }

    std::string body() const {
        std::string s;
        for (std::size_t c = 0; c < cols_.size(); ++c) s += (c ? "," : "") + cols_[c];
        s += '\n';
        for (const auto& r : rows_) {
            for (std::size_t c = 0; c < r.size(); ++c) {
                if (c) s += ',';
                s += fmt_num(r[c]);
            }
            s += '\n';
        }
        return s;
    }

private:
    std::vector<std::string> cols_;
    std::vector<std::vector<double>> rows_;
};

// "# key: value" lines followed by the table.
inline std::string csv_with_header(const std::vector<std::pair<std::string, std::string>>& header,
                                   const std::string& body) {
    std::string s;
    for (const auto& [k, v] : header) s += "# " + k + ": " + v + '\n';
    return s + body;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw ConfigError("write failed for '" + path.string() + "'");
}

// Reads a CSV written by CsvTable (comment lines skipped).
inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open '" + path.string() + "'");
    std::string line;
    std::vector<std::string> cols;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::size_t p = 0, q;
        while ((q = line.find(',', p)) != std::string::npos) {
            cols.push_back(line.substr(p, q - p));
            p = q + 1;
        }
        cols.push_back(line.substr(p));
        break;
    }
    CsvTable t(cols);
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::size_t p = 0;
        for (;;) {
            const auto q = line.find(',', p);
            row.push_back(std::stod(line.substr(p, q == std::string::npos ? std::string::npos : q - p)));
            if (q == std::string::npos) break;
            p = q + 1;
        }
        t.add_row(row);
    }
    return t;
}

} // namespace optoamp
