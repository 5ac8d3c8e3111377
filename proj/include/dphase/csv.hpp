#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace dphase {

// Doubles rendered with maximum round-trip precision so seeded runs emit
// bit-identical files.
inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }

    void write_csv(std::ostream& os) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            os << header[i] << (i + 1 < header.size() ? "," : "\n");
        for (const auto& row : rows)
            for (std::size_t i = 0; i < row.size(); ++i)
                os << row[i] << (i + 1 < row.size() ? "," : "\n");
    }

    void write_json(std::ostream& os) const {
        os << "[";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            os << (r ? ",\n " : "\n ") << "{";
            for (std::size_t i = 0; i < header.size() && i < rows[r].size(); ++i) {
                os << (i ? "," : "") << "\"" << header[i] << "\":\"" << rows[r][i] << "\"";
            }
            os << "}";
        }
        os << "\n]\n";
    }

    void write(const std::string& path, const std::string& format) const {
        auto emit = [&](std::ostream& os) {
            format == "json" ? write_json(os) : write_csv(os);
        };
        if (path.empty() || path == "-") {
            emit(std::cout);
            return;
        }
        std::ofstream os(path);
        emit(os);
    }
};

} // namespace dphase
