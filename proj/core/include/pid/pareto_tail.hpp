#pragma once

#include "pid/histogram.hpp"
#include "pid/params.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pid {

// Supercritical-regime configuration. The density exponent -4 corresponds
// to a cumulative-count exponent of -3.
struct TailConfig {
    double exponent = -4.0; // power-law density exponent, must be < -1
    double m_max = 1000.0;  // dimensionless tail cap
    double boost_factor = 1.35;

    void validate(double threshold) const;
};

// Reported income is semantically distinct from model income: the boost is
// a reporting transform, and the type split makes double application
// impossible through the API.
struct ReportedIncome {
    double value = 0.0;
};

// Boosts incomes at or above the threshold by params.boost_factor. The
// comparison is always made on the un-boosted model income, so an income
// that decays below the threshold loses the boost.
ReportedIncome apply_boost(double income, double threshold, const ModelParams &params);

// n i.i.d. draws from density proportional to m^exponent on
// [threshold, m_max] via inverse CDF; deterministic per seed.
std::vector<double> tail_sample(std::size_t n, double threshold, const TailConfig &config,
                                std::uint64_t seed);

struct ExponentFit {
    double regression = 0.0; // log-log least squares on binned density
    double mle = 0.0;        // maximum-likelihood estimate, for diagnostics
    std::size_t n_tail = 0;  // observations (or positive bins) used
};

// Fits the density exponent above the threshold. The sample overload bins
// into log-spaced bins before the regression; MLE uses the raw values.
// Throws std::invalid_argument with fewer than 100 tail observations.
ExponentFit fit_exponent(const std::vector<double> &incomes, double threshold);

// Histogram overload: regression on log density vs log bin midpoint over
// positive bins at or above the threshold (at least three required).
ExponentFit fit_exponent(const IncomeHistogram &hist, double threshold);

// Smallest income at which the two cumulative-people curves differ by more
// than tol for `persistence` consecutive grid points; empty when they never
// diverge. Both curves must share the same grid and start at (0,0).
std::optional<double> detect_threshold(const CumulativeCurve &observed,
                                       const CumulativeCurve &theoretical, double tol,
                                       int persistence = 3);

// Ratio of supercritical income shares, (1 - observed(threshold)) /
// (1 - theoretical(threshold)), both curves normalized to 1 at infinity.
double boost_ratio(const CumulativeCurve &observed_cum_income,
                   const CumulativeCurve &theoretical_cum_income, double threshold);

// Share overload: observed and theoretical supercritical income shares.
double boost_ratio(double observed_share, double theoretical_share);

// Actual-to-theoretical total income ratio implied by equal subcritical
// totals: (1 - theoretical_share) / (1 - observed_share).
double system_income_ratio(double supercritical_share_observed,
                           double supercritical_share_theoretical);

} // namespace pid
