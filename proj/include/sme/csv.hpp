#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sme/error.hpp"

namespace sme::csv {

/// 17 significant digits, so every double round-trips.
inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string join(const std::vector<std::string>& cells, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += sep;
        out += cells[i];
    }
    return out;
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        std::string cell(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r' || cell.back() == '\t')) cell.pop_back();
        std::size_t lead = 0;
        while (lead < cell.size() && (cell[lead] == ' ' || cell[lead] == '\t')) ++lead;
        out.push_back(cell.substr(lead));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw Error("");
        return v;
    } catch (const std::exception&) {
        throw Error("cannot parse number '" + s + "' in " + where);
    }
}

/// A small in-memory table written as comma-separated text with a header row.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) {
        require(row.size() == header.size(), "csv row width does not match header");
        rows.push_back(std::move(row));
    }

    std::string str() const {
        std::ostringstream os;
        os << join(header) << '\n';
        for (const auto& r : rows) os << join(r) << '\n';
        return os.str();
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error("cannot open '" + path + "' for writing");
        f << str();
        if (!f) throw Error("failed writing '" + path + "'");
    }
};

} // namespace sme::csv
