#include "pid/pareto_tail.hpp"

#include "pid/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pid {

void TailConfig::validate(double threshold) const {
    if (!(exponent < -1.0)) throw std::invalid_argument("tail config: exponent must be < -1");
    if (!(threshold > 0.0)) throw std::invalid_argument("tail config: threshold must be > 0");
    if (!(m_max > threshold)) throw std::invalid_argument("tail config: m_max must exceed the threshold");
    if (!(boost_factor >= 1.0)) throw std::invalid_argument("tail config: boost_factor must be >= 1");
}

ReportedIncome apply_boost(double income, double threshold, const ModelParams &params) {
    return {income >= threshold ? income * params.boost_factor : income};
}

std::vector<double> tail_sample(std::size_t n, double threshold, const TailConfig &config,
                                std::uint64_t seed) {
    config.validate(threshold);
    std::vector<double> out;
    out.reserve(n);
    std::mt19937_64 rng(seed);
    const double b = config.exponent + 1.0; // < 0
    const double lo = std::pow(threshold, b);
    const double hi = std::pow(config.m_max, b);
    const double inv_b = 1.0 / b;
    for (std::size_t i = 0; i < n; ++i) {
        double u = uniform01(rng);
        out.push_back(std::pow(lo - u * (lo - hi), inv_b));
    }
    return out;
}

namespace {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LinearFit least_squares(const std::vector<double> &x, const std::vector<double> &y) {
    double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_exponent: degenerate abscissa");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

} // namespace

ExponentFit fit_exponent(const std::vector<double> &incomes, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("fit_exponent: threshold must be > 0");
    std::vector<double> tail;
    for (double m : incomes)
        if (m >= threshold) tail.push_back(m);
    if (tail.size() < 100)
        throw std::invalid_argument("fit_exponent: need at least 100 observations above the threshold, got " +
                                    std::to_string(tail.size()));

    ExponentFit fit;
    fit.n_tail = tail.size();

    // MLE for density ~ m^a on [threshold, inf): a = -1 - n / sum ln(m/thr).
    double log_sum = 0.0;
    for (double m : tail) log_sum += std::log(m / threshold);
    fit.mle = -1.0 - static_cast<double>(tail.size()) / log_sum;

    // Log-spaced bins, 20 per decade; regression over bins with enough
    // counts that single-draw noise does not dominate the high tail.
    const double ratio = std::pow(10.0, 1.0 / 20.0);
    double max_m = *std::max_element(tail.begin(), tail.end());
    std::vector<double> edges{threshold};
    while (edges.back() < max_m) edges.push_back(edges.back() * ratio);
    std::vector<double> counts(edges.size() - 1, 0.0);
    for (double m : tail) {
        auto idx = static_cast<std::size_t>(std::log(m / threshold) / std::log(ratio));
        if (idx >= counts.size()) idx = counts.size() - 1;
        counts[idx] += 1.0;
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] < 10.0) continue;
        double width = edges[i + 1] - edges[i];
        double density = counts[i] / (static_cast<double>(tail.size()) * width);
        lx.push_back(std::log(std::sqrt(edges[i] * edges[i + 1])));
        ly.push_back(std::log(density));
    }
    if (lx.size() < 3) throw std::invalid_argument("fit_exponent: too few populated bins for regression");
    fit.regression = least_squares(lx, ly).slope;
    return fit;
}

ExponentFit fit_exponent(const IncomeHistogram &hist, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("fit_exponent: threshold must be > 0");
    std::vector<double> lx, ly;
    double weight = 0.0, weighted_log = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < hist.densities.size(); ++i) {
        if (hist.bin_low(i) < threshold || hist.densities[i] <= 0.0) continue;
        ++used;
        lx.push_back(std::log(hist.bin_mid(i)));
        ly.push_back(std::log(hist.densities[i]));
        weight += hist.densities[i];
        weighted_log += hist.densities[i] * std::log(hist.bin_mid(i) / threshold);
    }
    if (used < 3) throw std::invalid_argument("fit_exponent: need at least 3 positive bins above the threshold");

    ExponentFit fit;
    fit.n_tail = used;
    fit.regression = least_squares(lx, ly).slope;
    fit.mle = -1.0 - weight / weighted_log;
    return fit;
}

std::optional<double> detect_threshold(const CumulativeCurve &observed,
                                       const CumulativeCurve &theoretical, double tol,
                                       int persistence) {
    if (persistence < 1) throw std::invalid_argument("detect_threshold: persistence must be >= 1");
    if (observed.income.size() != theoretical.income.size() || observed.income != theoretical.income)
        throw std::invalid_argument("detect_threshold: curves must share a common income grid");
    if (!(tol > 0.0)) throw std::invalid_argument("detect_threshold: tol must be > 0");

    const std::size_t n = observed.income.size();
    const auto run = static_cast<std::size_t>(persistence);
    std::size_t streak = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(observed.value[j] - theoretical.value[j]) > tol) {
            ++streak;
            if (streak >= run) return observed.income[j + 1 - run];
        } else {
            streak = 0;
        }
    }
    return std::nullopt;
}

double boost_ratio(const CumulativeCurve &observed_cum_income,
                   const CumulativeCurve &theoretical_cum_income, double threshold) {
    for (const auto *c : {&observed_cum_income, &theoretical_cum_income}) {
        if (c->value.empty() || std::abs(c->value.back() - 1.0) > 1e-9)
            throw std::invalid_argument("boost_ratio: curves must be normalized to 1 at infinity");
    }
    double obs_share = 1.0 - observed_cum_income.eval(threshold);
    double theo_share = 1.0 - theoretical_cum_income.eval(threshold);
    return boost_ratio(obs_share, theo_share);
}

double boost_ratio(double observed_share, double theoretical_share) {
    if (theoretical_share == 0.0)
        throw std::domain_error("boost_ratio: theoretical supercritical share is zero");
    return observed_share / theoretical_share;
}

double system_income_ratio(double supercritical_share_observed,
                           double supercritical_share_theoretical) {
    if (supercritical_share_observed < 0.0 || supercritical_share_observed >= 1.0 ||
        supercritical_share_theoretical < 0.0 || supercritical_share_theoretical > 1.0)
        throw std::domain_error("system_income_ratio: shares must lie in [0,1) and [0,1]");
    return (1.0 - supercritical_share_theoretical) / (1.0 - supercritical_share_observed);
}

} // namespace pid
