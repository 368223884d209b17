#include "pid/calibrate.hpp"

#include "pid/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pid {

double subcritical_loss(const IncomeHistogram &model, const IncomeHistogram &observed,
                        double threshold) {
    if (model.bin_width != observed.bin_width)
        throw std::invalid_argument("subcritical_loss: bin widths differ");
    auto limit = static_cast<std::size_t>(std::floor(threshold / model.bin_width));
    std::size_t n = std::min(limit, std::max(model.densities.size(), observed.densities.size()));
    KahanSum sum;
    for (std::size_t i = 0; i < n; ++i) {
        double a = i < model.densities.size() ? model.densities[i] : 0.0;
        double b = i < observed.densities.size() ? observed.densities[i] : 0.0;
        sum.add((a - b) * (a - b));
    }
    return sum.value();
}

namespace {

constexpr double kGoldenRatio = 0.6180339887498949; // (sqrt(5)-1)/2

} // namespace

CalibrationResult calibrate_alpha(const IncomeHistogram &observed, const PopulationPyramid &pyramid,
                                  const EconomySeries &econ, const ModelParams &params,
                                  const SearchInterval &search, const BuildOptions &options) {
    if (!(search.lo > 0.0 && search.hi < 1.0 && search.lo < search.hi))
        throw std::invalid_argument("calibrate_alpha: search interval must satisfy 0 < lo < hi < 1");

    const int year = observed.year;
    BuildOptions opts = options;
    opts.mode = SimulationMode::deterministic;
    opts.bin_width = observed.bin_width;
    opts.dollars = observed.dollars;

    CalibrationResult result;
    result.pareto_threshold0_hat = params.pareto_threshold0;

    auto loss_at = [&](double alpha) {
        ModelParams p = params;
        p.alpha = alpha;
        IncomeHistogram model = build_pid(year, pyramid, econ, p, opts);
        double threshold = p.pareto_threshold0 * econ.real_factor(year, p.start_year);
        if (observed.dollars) threshold = to_dollars(threshold, year, econ, p);
        double l = subcritical_loss(model, observed, threshold);
        result.probes.emplace_back(alpha, l);
        ++result.iterations;
        return l;
    };

    // Coarse bracket scan.
    constexpr int kScanPoints = 20;
    std::vector<double> xs(kScanPoints), ls(kScanPoints);
    for (int i = 0; i < kScanPoints; ++i) {
        xs[static_cast<std::size_t>(i)] =
            search.lo + (search.hi - search.lo) * static_cast<double>(i) / (kScanPoints - 1);
        ls[static_cast<std::size_t>(i)] = loss_at(xs[static_cast<std::size_t>(i)]);
    }
    auto best = static_cast<std::size_t>(std::min_element(ls.begin(), ls.end()) - ls.begin());

    bool interior = best > 0 && best + 1 < kScanPoints;
    int local_minima = 0;
    for (std::size_t i = 1; i + 1 < kScanPoints; ++i) {
        if (ls[i] < ls[i - 1] && ls[i] <= ls[i + 1]) ++local_minima;
    }
    bool unimodal = local_minima <= 1;

    double a = xs[best > 0 ? best - 1 : best];
    double b = xs[best + 1 < kScanPoints ? best + 1 : best];
    if (a == b) {
        result.alpha_hat = xs[best];
        result.loss = ls[best];
        result.converged = false;
        return result;
    }

    // Golden-section to width 1e-4.
    double x1 = b - kGoldenRatio * (b - a);
    double x2 = a + kGoldenRatio * (b - a);
    double f1 = loss_at(x1);
    double f2 = loss_at(x2);
    while (b - a > 1e-4) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGoldenRatio * (b - a);
            f1 = loss_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGoldenRatio * (b - a);
            f2 = loss_at(x2);
        }
    }
    result.alpha_hat = f1 <= f2 ? x1 : x2;
    result.loss = std::min(f1, f2);
    result.converged = interior && unimodal;

    // The certificate: no probed point may beat the returned optimum.
    for (const auto &[x, l] : result.probes) {
        if (l < result.loss) {
            result.alpha_hat = x;
            result.loss = l;
        }
    }
    return result;
}

CalibrationResult calibrate_threshold(double target_share, int year,
                                      const PopulationPyramid &pyramid, const EconomySeries &econ,
                                      const ModelParams &params, const BuildOptions &options) {
    if (target_share < 0.0 || target_share >= 1.0)
        throw std::domain_error("calibrate_threshold: target share must lie in [0, 1)");

    // Incomes and weights for the calibration year, computed once; the
    // share at any threshold is then a sorted-prefix lookup.
    CohortEngine engine(params, econ, options.integration_step);
    if (!pyramid.contains(year))
        throw std::out_of_range("calibrate_threshold: pyramid has no year " + std::to_string(year));
    const double factor = econ.real_factor(year, params.start_year);
    const int max_te = work_experience(pyramid.max_age(year));
    const double class_weight = 1.0 / static_cast<double>(params.class_count());

    std::vector<std::pair<int, int>> spans;
    for (int te = 0; te <= max_te; ++te)
        if (pyramid.count(year, kWorkStartAge + te) > 0.0) spans.emplace_back(year - te, te);
    engine.prime(spans, options.threads);

    std::vector<std::pair<double, double>> incomes; // (income, weight), descending income
    double population = pyramid.total(year);
    if (!(population > 0.0)) throw std::domain_error("calibrate_threshold: empty pyramid year");
    for (int te = 0; te <= max_te; ++te) {
        double count = pyramid.count(year, kWorkStartAge + te);
        if (count <= 0.0) continue;
        const auto &u = engine.means_values(year - te, te);
        for (int s = params.grid_min; s <= params.grid_max; ++s) {
            double s_rel = static_cast<double>(s) / params.grid_max;
            for (double ul : u) incomes.emplace_back(s_rel * ul, count * class_weight);
        }
    }
    std::sort(incomes.begin(), incomes.end(), std::greater<>());

    auto share_above = [&](double threshold0) {
        double cut = threshold0 * factor;
        KahanSum s;
        for (const auto &[m, w] : incomes) {
            if (m < cut) break;
            s.add(w);
        }
        return s.value() / population;
    };

    CalibrationResult result;
    result.alpha_hat = params.alpha;

    double lo = 1e-9, hi = 1.0;
    double share_lo = share_above(lo);
    if (share_lo < target_share)
        throw std::domain_error("calibrate_threshold: target share " + std::to_string(target_share) +
                                " unattainable, maximum is " + std::to_string(share_lo));
    int iterations = 0;
    while (hi - lo > 1e-7) {
        double mid = 0.5 * (lo + hi);
        double s = share_above(mid);
        result.probes.emplace_back(mid, s);
        ++iterations;
        if (s > target_share)
            lo = mid;
        else
            hi = mid;
    }
    result.pareto_threshold0_hat = hi;
    result.iterations = iterations;
    double achieved = share_above(hi);
    result.loss = std::abs(achieved - target_share);
    result.converged = result.loss <= 1e-3;
    return result;
}

} // namespace pid
