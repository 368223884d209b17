#pragma once

#include "pid/aggregate.hpp"

#include <utility>
#include <vector>

namespace pid {

struct CalibrationResult {
    double alpha_hat = 0.0;
    double pareto_threshold0_hat = 0.0;
    double loss = 0.0;
    int iterations = 0;
    bool converged = false;
    // Every probed (parameter, loss) pair; the certificate that the
    // returned optimum is no worse than any probed point.
    std::vector<std::pair<double, double>> probes;
};

struct SearchInterval {
    double lo = 0.04;
    double hi = 0.12;
};

// L2 distance between the two density histograms over the subcritical
// range (bins strictly below the threshold). Bin widths must match.
double subcritical_loss(const IncomeHistogram &model, const IncomeHistogram &observed,
                        double threshold);

// Recovers alpha by matching the model PID to an observed one for the
// observed histogram's year: a coarse 20-point bracket scan followed by
// golden-section search to width 1e-4. A bracket failure (minimum at an
// interval endpoint, or multiple local minima in the scan) is reported via
// converged = false with the best point still returned.
CalibrationResult calibrate_alpha(const IncomeHistogram &observed, const PopulationPyramid &pyramid,
                                  const EconomySeries &econ, const ModelParams &params,
                                  const SearchInterval &search = {},
                                  const BuildOptions &options = {});

// Recovers the initial Pareto threshold so that the supercritical
// population share at `year` matches the target, by bisection on the
// monotone share-vs-threshold relation. Throws std::domain_error when the
// target is unattainable within (0, 1].
CalibrationResult calibrate_threshold(double target_share, int year,
                                      const PopulationPyramid &pyramid, const EconomySeries &econ,
                                      const ModelParams &params, const BuildOptions &options = {});

} // namespace pid
