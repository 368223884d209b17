#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pid::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    // 1-based line number of each data row in the source, for error messages.
    std::vector<std::size_t> lines;
};

// Reads a comma-separated numeric table. The header row is required and is
// kept as text; every other cell must parse as a double. Throws
// std::runtime_error naming the offending line.
Table read_table(std::istream &in, const std::string &source_name);
Table read_table_file(const std::string &path);

// Requires that the table header equals `expected` (exact match) and that
// every row has the same arity.
void require_header(const Table &t, const std::vector<std::string> &expected,
                    const std::string &source_name);

// Fixed formatting for reproducible output files: shortest round-trip
// representation via %.17g trimmed, locale-independent.
std::string format_double(double v);

} // namespace pid::csv
