#include "pid/aggregate.hpp"

#include "pid/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pid {

CohortEngine::CohortEngine(ModelParams params, EconomySeries econ, double step)
    : params_(std::move(params)), econ_(std::move(econ)), track_(params_, econ_), step_(step) {
    params_.validate();
    if (!(step > 0.0) || step > 1.0)
        throw std::invalid_argument("cohort engine: step must be in (0, 1]");
    steps_per_year_ = std::max(1, static_cast<int>(std::lround(1.0 / step)));
}

void CohortEngine::advance(Cohort &c, int cohort_start, int te) const {
    const int span = params_.grid_span();
    if (c.u.empty()) {
        c.u.assign(static_cast<std::size_t>(span), 0.0);
        c.at_te.push_back(c.u);
        c.t = 0.0;
    }
    if (te < static_cast<int>(c.at_te.size())) return;
    if (cohort_start < econ_.first_year() || cohort_start + te > econ_.last_year())
        throw std::out_of_range("cohort engine: economy series does not cover cohort " +
                                std::to_string(cohort_start) + " to experience " + std::to_string(te));

    const double start_time = static_cast<double>(cohort_start);
    const double alpha = params_.alpha;
    const double denom = static_cast<double>(params_.grid_max);
    const double h = 1.0 / static_cast<double>(steps_per_year_);

    // One RK4 step of all per-L states over [t0, t0+dt].
    auto rk4 = [&](double t0, double dt, bool earning) {
        auto stage = [&](double t, const std::vector<double> &u, std::vector<double> &du) {
            double lam = track_.lambda(start_time + t);
            for (int i = 0; i < span; ++i) {
                double l_rel = static_cast<double>(params_.grid_min + i) / denom;
                double k = alpha / (lam * l_rel);
                du[static_cast<std::size_t>(i)] =
                    earning ? k * (lam * lam * l_rel - u[static_cast<std::size_t>(i)])
                            : -k * u[static_cast<std::size_t>(i)];
            }
        };
        std::vector<double> k1(c.u.size()), k2(c.u.size()), k3(c.u.size()), k4(c.u.size());
        std::vector<double> tmp(c.u.size());
        stage(t0, c.u, k1);
        for (std::size_t i = 0; i < c.u.size(); ++i) tmp[i] = c.u[i] + 0.5 * dt * k1[i];
        stage(t0 + 0.5 * dt, tmp, k2);
        for (std::size_t i = 0; i < c.u.size(); ++i) tmp[i] = c.u[i] + 0.5 * dt * k2[i];
        stage(t0 + 0.5 * dt, tmp, k3);
        for (std::size_t i = 0; i < c.u.size(); ++i) tmp[i] = c.u[i] + dt * k3[i];
        stage(t0 + dt, tmp, k4);
        for (std::size_t i = 0; i < c.u.size(); ++i)
            c.u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    };

    auto stop_margin = [&](double t) { return t - track_.t_cr(start_time + t); };

    for (int year = static_cast<int>(c.at_te.size()) - 1; year < te; ++year) {
        for (int j = 0; j < steps_per_year_; ++j) {
            double t0 = static_cast<double>(year) + static_cast<double>(j) * h;
            double t1 = (j + 1 == steps_per_year_) ? static_cast<double>(year + 1)
                                                   : t0 + h;
            if (c.earning && stop_margin(t1) >= 0.0) {
                double lo = t0, hi = t1;
                for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
                    double mid = 0.5 * (lo + hi);
                    (stop_margin(mid) < 0.0 ? lo : hi) = mid;
                }
                if (hi > t0) rk4(t0, hi - t0, true);
                c.earning = false;
                if (t1 > hi) rk4(hi, t1 - hi, false);
            } else {
                rk4(t0, t1 - t0, c.earning);
            }
        }
        c.t = static_cast<double>(year + 1);
        c.at_te.push_back(c.u);
    }
}

const std::vector<double> &CohortEngine::means_values(int cohort_start, int te) const {
    if (te < 0) throw std::domain_error("cohort engine: negative work experience");
    Cohort &c = cohorts_[cohort_start];
    advance(c, cohort_start, te);
    return c.at_te[static_cast<std::size_t>(te)];
}

double CohortEngine::income(int cohort_start, int te, const TrajectoryClass &cls) const {
    return cls.s_rel * means_values(cohort_start, te)[static_cast<std::size_t>(
                           std::lround(cls.l_rel * params_.grid_max) - params_.grid_min)];
}

void CohortEngine::prime(const std::vector<std::pair<int, int>> &cohort_experience, unsigned threads) {
    std::map<int, int> wanted;
    for (auto [cohort, te] : cohort_experience) {
        auto it = wanted.find(cohort);
        if (it == wanted.end())
            wanted.emplace(cohort, te);
        else
            it->second = std::max(it->second, te);
    }
    // Create map nodes up front so worker threads never mutate the map.
    std::vector<std::pair<int, int>> jobs;
    jobs.reserve(wanted.size());
    for (auto [cohort, te] : wanted) {
        cohorts_.try_emplace(cohort);
        jobs.emplace_back(cohort, te);
    }
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        advance(cohorts_.find(jobs[i].first)->second, jobs[i].first, jobs[i].second);
    });
}

namespace {

struct Binner {
    double width;
    std::vector<double> mass;

    void add(double income, double weight) {
        auto idx = static_cast<std::size_t>(std::floor(income / width));
        if (idx >= mass.size()) mass.resize(idx + 1, 0.0);
        mass[idx] += weight;
    }
};

std::vector<double> s_values(const ModelParams &params) {
    std::vector<double> s;
    s.reserve(static_cast<std::size_t>(params.grid_span()));
    for (int i = params.grid_min; i <= params.grid_max; ++i)
        s.push_back(static_cast<double>(i) / static_cast<double>(params.grid_max));
    return s;
}

} // namespace

IncomeHistogram build_pid(CohortEngine &engine, int year, const PopulationPyramid &pyramid,
                          const BuildOptions &options) {
    const ModelParams &params = engine.params();
    const EconomySeries &econ = engine.econ();
    if (!pyramid.contains(year)) throw std::out_of_range("build_pid: pyramid has no year " + std::to_string(year));
    if (!(options.bin_width > 0.0)) throw std::invalid_argument("build_pid: bin width must be > 0");

    const double threshold = params.pareto_threshold0 * econ.real_factor(year, params.start_year);
    const int max_age = pyramid.max_age(year);
    const double population = pyramid.total(year);
    const auto class_weight = 1.0 / static_cast<double>(params.class_count());
    const auto s_rel = s_values(params);

    std::vector<std::pair<int, int>> spans;
    for (int age = kWorkStartAge; age <= max_age; ++age) {
        if (pyramid.count(year, age) > 0.0) spans.emplace_back(year - work_experience(age), work_experience(age));
    }
    engine.prime(spans, options.threads);

    auto in_dollars = [&](double m) { return options.dollars ? to_dollars(m, year, econ, params) : m; };

    Binner bins{options.bin_width, {}};
    KahanSum supercritical;
    for (int age = kWorkStartAge; age <= max_age; ++age) {
        double count = pyramid.count(year, age);
        if (count <= 0.0) continue;
        int te = work_experience(age);
        const auto &u = engine.means_values(year - te, te);
        double w = count * class_weight;
        for (double s : s_rel) {
            for (double ul : u) {
                double m = s * ul;
                if (options.mode == SimulationMode::deterministic) {
                    bins.add(in_dollars(apply_boost(m, threshold, params).value), w);
                } else if (m >= threshold) {
                    supercritical.add(w);
                } else {
                    bins.add(in_dollars(m), w);
                }
            }
        }
    }

    if (options.mode == SimulationMode::stochastic && supercritical.value() > 0.0) {
        auto draws = tail_sample(options.tail_draws, threshold, options.tail, options.seed);
        if (draws.empty()) throw std::invalid_argument("build_pid: stochastic mode needs tail_draws > 0");
        double each = supercritical.value() / static_cast<double>(draws.size());
        for (double d : draws) bins.add(in_dollars(d), each);
    }

    IncomeHistogram hist;
    hist.year = year;
    hist.bin_width = options.bin_width;
    hist.dollars = options.dollars;
    hist.boosted = options.mode == SimulationMode::stochastic || params.boost_factor > 1.0;
    hist.densities = std::move(bins.mass);
    if (population > 0.0) {
        for (double &d : hist.densities) d /= population;
    }
    return hist;
}

IncomeHistogram build_pid(int year, const PopulationPyramid &pyramid, const EconomySeries &econ,
                          const ModelParams &params, const BuildOptions &options) {
    CohortEngine engine(params, econ, options.integration_step);
    return build_pid(engine, year, pyramid, options);
}

IncomeHistogram normalize_adjust(const IncomeHistogram &hist, const EconomySeries &econ,
                                 int base_year) {
    if (!hist.dollars)
        throw std::invalid_argument("normalize_adjust: input histogram must be dollar-denominated");
    double factor = econ.nominal_index(base_year) / econ.nominal_index(hist.year);

    IncomeHistogram out = hist;
    std::fill(out.densities.begin(), out.densities.end(), 0.0);
    for (std::size_t i = 0; i < hist.densities.size(); ++i) {
        double d = hist.densities[i];
        if (d == 0.0) continue;
        double a = hist.bin_low(i) * factor;
        double b = hist.bin_high(i) * factor;
        auto j = static_cast<std::size_t>(std::floor(a / hist.bin_width));
        for (; static_cast<double>(j) * hist.bin_width < b; ++j) {
            double lo = std::max(a, static_cast<double>(j) * hist.bin_width);
            double hi = std::min(b, static_cast<double>(j + 1) * hist.bin_width);
            if (hi <= lo) continue;
            if (j >= out.densities.size()) out.densities.resize(j + 1, 0.0);
            // Ratio first: a bin that maps onto exactly one target bin keeps
            // its density bit-identically.
            out.densities[j] += d * ((hi - lo) / (b - a));
        }
    }
    return out;
}

WorkExperienceProfile above_threshold_profile(CohortEngine &engine, int year, double threshold,
                                              const PopulationPyramid &pyramid,
                                              const BuildOptions &options) {
    const ModelParams &params = engine.params();
    if (!pyramid.contains(year))
        throw std::out_of_range("above_threshold_profile: pyramid has no year " + std::to_string(year));
    if (threshold < 0.0) throw std::domain_error("above_threshold_profile: threshold must be >= 0");

    const double pareto = params.pareto_threshold0 * engine.econ().real_factor(year, params.start_year);
    const int max_te = work_experience(pyramid.max_age(year));
    const auto class_weight = 1.0 / static_cast<double>(params.class_count());
    const auto s_rel = s_values(params);

    std::vector<std::pair<int, int>> spans;
    for (int te = 0; te <= max_te; ++te) {
        if (pyramid.count(year, kWorkStartAge + te) > 0.0) spans.emplace_back(year - te, te);
    }
    engine.prime(spans, options.threads);

    WorkExperienceProfile profile;
    profile.year = year;
    profile.threshold = threshold;
    profile.values.assign(static_cast<std::size_t>(max_te) + 1, 0.0);
    for (int te = 0; te <= max_te; ++te) {
        double count = pyramid.count(year, kWorkStartAge + te);
        if (count <= 0.0) continue;
        const auto &u = engine.means_values(year - te, te);
        KahanSum mass;
        for (double s : s_rel) {
            for (double ul : u) {
                if (apply_boost(s * ul, pareto, params).value >= threshold) mass.add(count * class_weight);
            }
        }
        profile.values[static_cast<std::size_t>(te)] = mass.value();
    }
    return profile;
}

WorkExperienceProfile above_threshold_profile(int year, double threshold,
                                              const PopulationPyramid &pyramid,
                                              const EconomySeries &econ, const ModelParams &params,
                                              const BuildOptions &options) {
    CohortEngine engine(params, econ, options.integration_step);
    return above_threshold_profile(engine, year, threshold, pyramid, options);
}

WorkExperienceProfile normalize_to_peak(const WorkExperienceProfile &profile,
                                        const WorkExperienceProfile &reference) {
    double peak = reference.peak();
    if (!(peak > 0.0)) throw std::domain_error("normalize_to_peak: reference profile has no positive peak");
    WorkExperienceProfile out = profile;
    for (double &v : out.values) v /= peak;
    return out;
}

std::vector<WorkExperienceProfile> density_evolution(const std::vector<int> &years,
                                                     const PopulationPyramid &pyramid,
                                                     const EconomySeries &econ,
                                                     const ModelParams &params,
                                                     const BuildOptions &options) {
    CohortEngine engine(params, econ, options.integration_step);
    std::vector<WorkExperienceProfile> out;
    out.reserve(years.size());
    for (int year : years) {
        double pareto = params.pareto_threshold0 * econ.real_factor(year, params.start_year);
        WorkExperienceProfile p = above_threshold_profile(engine, year, pareto, pyramid, options);
        double total = p.total();
        if (total > 0.0) {
            for (double &v : p.values) v /= total;
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<WorkExperienceProfile> forecast(const PopulationPyramid &projection,
                                            const EconomySeries &econ, double growth_rate,
                                            const std::vector<int> &years, const ModelParams &params,
                                            const BuildOptions &options) {
    if (years.empty()) return {};
    int last = *std::max_element(years.begin(), years.end());
    EconomySeries extended =
        last > econ.last_year() ? econ.extended(growth_rate, last - econ.last_year()) : econ;
    return density_evolution(years, projection, extended, params, options);
}

} // namespace pid
