#pragma once

#include <cstdint>
#include <string>

namespace pid {

// Calibration constants and grid definition. Immutable once validated;
// every other module consumes these by const reference.
struct ModelParams {
    int start_year = 1960;           // modelling origin; real GDP index re-anchored here
    double alpha = 0.087;            // dissipation coefficient per year, normalized convention
    double t_cr0 = 26.5;             // critical work experience at start_year [years]
    double pareto_threshold0 = 0.43; // dimensionless Pareto threshold at start_year
    int grid_min = 2;                // smallest relative capability / means index
    int grid_max = 30;               // largest index; also the normalization denominator
    double boost_factor = 1.35;      // reported-income multiplier above the threshold
    double dollar_anchor = 120000.0; // year-2000 dollars per dimensionless unit

    int grid_span() const { return grid_max - grid_min + 1; }
    int class_count() const { return grid_span() * grid_span(); }

    // Throws std::invalid_argument if any invariant fails.
    void validate() const;

    // FNV-1a fingerprint of the canonical field rendering; embedded in every
    // output sidecar so files from different parameter sets are detectable.
    std::uint64_t hash() const;
};

// Parses a params JSON object with the exact field names above; absent
// fields keep their defaults. Validates before returning.
ModelParams load_params_json(const std::string &text, const std::string &source_name);
ModelParams load_params_file(const std::string &path);

std::string params_to_json(const ModelParams &p);

} // namespace pid
