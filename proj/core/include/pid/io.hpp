#pragma once

#include "pid/histogram.hpp"
#include "pid/params.hpp"

#include <string>

namespace pid::io {

// Histogram CSV: header `bin_low,bin_high,density`, bins contiguous from 0.
void write_histogram_csv(const std::string &path, const IncomeHistogram &hist);
IncomeHistogram read_histogram_csv(const std::string &path);

// Profile CSV: header `work_experience,value`.
void write_profile_csv(const std::string &path, const WorkExperienceProfile &profile);

// Sample file: header `income`, one value per row.
std::vector<double> read_sample_csv(const std::string &path);

std::string params_hash_hex(const ModelParams &params);

} // namespace pid::io
