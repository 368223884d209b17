#include "pid/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pid::csv {

namespace {

std::vector<std::string> split_line(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

Table read_table(std::istream &in, const std::string &source_name) {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty()) continue;
        auto cells = split_line(stripped);
        if (!saw_header) {
            for (auto &c : cells) c = trim(c);
            t.header = cells;
            saw_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto &cell : cells) {
            const std::string v = trim(cell);
            char *end = nullptr;
            double x = std::strtod(v.c_str(), &end);
            if (v.empty() || end != v.c_str() + v.size()) {
                throw std::runtime_error(source_name + ":" + std::to_string(lineno) +
                                         ": not a number: '" + v + "'");
            }
            row.push_back(x);
        }
        t.rows.push_back(std::move(row));
        t.lines.push_back(lineno);
    }
    if (!saw_header) throw std::runtime_error(source_name + ": empty file, expected a CSV header");
    return t;
}

Table read_table_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    return read_table(in, path);
}

void require_header(const Table &t, const std::vector<std::string> &expected,
                    const std::string &source_name) {
    if (t.header != expected) {
        std::string want;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) want += ',';
            want += expected[i];
        }
        throw std::runtime_error(source_name + ": expected header '" + want + "'");
    }
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (t.rows[i].size() != expected.size()) {
            throw std::runtime_error(source_name + ":" + std::to_string(t.lines[i]) +
                                     ": expected " + std::to_string(expected.size()) + " columns");
        }
    }
}

std::string format_double(double v) {
    // Shortest of %.15g/%.16g/%.17g that round-trips.
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

} // namespace pid::csv
