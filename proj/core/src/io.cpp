#include "pid/io.hpp"

#include "pid/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pid::io {

namespace {

std::ofstream open_out(const std::string &path) {
    std::ofstream out(path, std::ios::binary); // '\n' line endings everywhere
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    return out;
}

} // namespace

void write_histogram_csv(const std::string &path, const IncomeHistogram &hist) {
    auto out = open_out(path);
    out << "bin_low,bin_high,density\n";
    for (std::size_t i = 0; i < hist.densities.size(); ++i) {
        out << csv::format_double(hist.bin_low(i)) << ',' << csv::format_double(hist.bin_high(i))
            << ',' << csv::format_double(hist.densities[i]) << '\n';
    }
}

IncomeHistogram read_histogram_csv(const std::string &path) {
    csv::Table t = csv::read_table_file(path);
    csv::require_header(t, {"bin_low", "bin_high", "density"}, path);
    if (t.rows.empty()) throw std::runtime_error(path + ": no bins");

    IncomeHistogram hist;
    hist.bin_width = t.rows[0][1] - t.rows[0][0];
    if (!(hist.bin_width > 0.0)) throw std::runtime_error(path + ": first bin has non-positive width");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto &r = t.rows[i];
        const std::string where = path + ":" + std::to_string(t.lines[i]);
        double expect_low = static_cast<double>(i) * hist.bin_width;
        if (std::abs(r[0] - expect_low) > 1e-9 * std::max(1.0, expect_low))
            throw std::runtime_error(where + ": bins must be contiguous from 0");
        if (r[2] < 0.0) throw std::runtime_error(where + ": negative density");
        hist.densities.push_back(r[2]);
    }
    return hist;
}

void write_profile_csv(const std::string &path, const WorkExperienceProfile &profile) {
    auto out = open_out(path);
    out << "work_experience,value\n";
    for (std::size_t te = 0; te < profile.values.size(); ++te) {
        out << te << ',' << csv::format_double(profile.values[te]) << '\n';
    }
}

std::vector<double> read_sample_csv(const std::string &path) {
    csv::Table t = csv::read_table_file(path);
    csv::require_header(t, {"income"}, path);
    std::vector<double> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (t.rows[i][0] < 0.0)
            throw std::runtime_error(path + ":" + std::to_string(t.lines[i]) + ": negative income");
        out.push_back(t.rows[i][0]);
    }
    return out;
}

std::string params_hash_hex(const ModelParams &params) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(params.hash()));
    return buf;
}

} // namespace pid::io
