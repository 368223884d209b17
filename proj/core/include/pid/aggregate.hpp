#pragma once

#include "pid/economy.hpp"
#include "pid/grid.hpp"
#include "pid/histogram.hpp"
#include "pid/params.hpp"
#include "pid/pareto_tail.hpp"
#include "pid/population.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace pid {

enum class SimulationMode { deterministic, stochastic };

struct BuildOptions {
    SimulationMode mode = SimulationMode::deterministic;
    std::uint64_t seed = 0;
    double bin_width = 0.01; // dimensionless units; pass e.g. 2500 with dollars=true
    bool dollars = false;
    TailConfig tail;                 // stochastic redistribution of supercritical incomes
    std::size_t tail_draws = 200000; // samples representing the supercritical mass
    double integration_step = 0.05;
    unsigned threads = 1;
};

// Integrates and caches cohort income histories. Incomes within a cohort
// are exactly proportional to S', so only one ODE per L index is stepped;
// a class income is s_rel * means_value(l index). The earning cut-off is
// class-independent, which keeps that factorization valid through decay.
class CohortEngine {
  public:
    CohortEngine(ModelParams params, EconomySeries econ, double step = 0.05);

    const ModelParams &params() const { return params_; }
    const EconomySeries &econ() const { return econ_; }

    // Un-boosted income of a class at integer work experience te for the
    // cohort entering the economy at cohort_start.
    double income(int cohort_start, int te, const TrajectoryClass &cls) const;

    // Per-L-index state vector at te (index 0 = grid_min).
    const std::vector<double> &means_values(int cohort_start, int te) const;

    // Integrates the listed cohorts up to the given work experiences,
    // possibly in parallel; afterwards lookups are read-only.
    void prime(const std::vector<std::pair<int, int>> &cohort_experience, unsigned threads);

  private:
    struct Cohort {
        double t = 0.0;
        bool earning = true;
        std::vector<double> u;                  // current per-L incomes
        std::vector<std::vector<double>> at_te; // snapshot per integer te
    };

    void advance(Cohort &c, int cohort_start, int te) const;

    ModelParams params_;
    EconomySeries econ_;
    ScalingTrack track_;
    double step_;
    int steps_per_year_;
    mutable std::map<int, Cohort> cohorts_;
};

// Population-level income distribution for one calendar year. Every single
// year of age contributes its count spread uniformly over the capacity
// grid; incomes are evaluated at work experience age-15 with decay beyond
// the critical experience. Deterministic mode multiplies supercritical
// incomes by the boost factor; stochastic mode redistributes the
// supercritical mass over a truncated power-law tail, preserving the count
// above the threshold exactly. Bit-reproducible for a fixed seed.
IncomeHistogram build_pid(int year, const PopulationPyramid &pyramid, const EconomySeries &econ,
                          const ModelParams &params, const BuildOptions &options = {});
IncomeHistogram build_pid(CohortEngine &engine, int year, const PopulationPyramid &pyramid,
                          const BuildOptions &options = {});

// Removes nominal per-capita GDP growth from a dollar-denominated
// histogram: incomes are divided by nominal(year)/nominal(base_year) and
// densities re-binned onto the base-year grid.
IncomeHistogram normalize_adjust(const IncomeHistogram &hist, const EconomySeries &econ,
                                 int base_year);

// Count of persons per single work-experience year whose reported income
// reaches the threshold (dimensionless units).
WorkExperienceProfile above_threshold_profile(int year, double threshold,
                                              const PopulationPyramid &pyramid,
                                              const EconomySeries &econ, const ModelParams &params,
                                              const BuildOptions &options = {});
WorkExperienceProfile above_threshold_profile(CohortEngine &engine, int year, double threshold,
                                              const PopulationPyramid &pyramid,
                                              const BuildOptions &options = {});

// Every value divided by the reference profile's peak.
WorkExperienceProfile normalize_to_peak(const WorkExperienceProfile &profile,
                                        const WorkExperienceProfile &reference);

// Per-year profiles at that year's Pareto threshold, each normalized to
// unit sum.
std::vector<WorkExperienceProfile> density_evolution(const std::vector<int> &years,
                                                     const PopulationPyramid &pyramid,
                                                     const EconomySeries &econ,
                                                     const ModelParams &params,
                                                     const BuildOptions &options = {});

// Forecast: extends the economy past its last observed year at the given
// annual real growth rate, then runs density_evolution on the projection
// pyramid.
std::vector<WorkExperienceProfile> forecast(const PopulationPyramid &projection,
                                            const EconomySeries &econ, double growth_rate,
                                            const std::vector<int> &years, const ModelParams &params,
                                            const BuildOptions &options = {});

} // namespace pid
