#include "pid/aggregate.hpp"
#include "pid/pareto_tail.hpp"
#include "pid/trajectory.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

pid::EconomySeries constant_econ(int first, int last) {
    std::vector<double> ones(static_cast<std::size_t>(last - first + 1), 1.0);
    return pid::EconomySeries(first, ones, ones);
}

pid::PopulationPyramid uniform_pyramid(int year, int lo, int hi) {
    pid::PopulationPyramid p;
    for (int age = lo; age <= hi; ++age) p.set(year, age, 1.0);
    return p;
}

void BM_IntegrateIncome(benchmark::State &state) {
    pid::ModelParams params;
    auto econ = constant_econ(1950, 2030);
    pid::TrajectoryClass cls{1.0, 0.5};
    for (auto _ : state) {
        auto traj = pid::integrate_income(cls, 1960, 60.0, econ, params, 0.05);
        benchmark::DoNotOptimize(traj.points.back().income);
    }
}
BENCHMARK(BM_IntegrateIncome)->Unit(benchmark::kMicrosecond);

void BM_BuildPid(benchmark::State &state) {
    pid::ModelParams params;
    auto econ = constant_econ(1880, 2000);
    auto pyr = uniform_pyramid(1960, 15, 75);
    for (auto _ : state) {
        auto hist = pid::build_pid(1960, pyr, econ, params);
        benchmark::DoNotOptimize(hist.densities.data());
    }
}
BENCHMARK(BM_BuildPid)->Unit(benchmark::kMillisecond);

void BM_ProfileWithWarmEngine(benchmark::State &state) {
    pid::ModelParams params;
    auto econ = constant_econ(1880, 2000);
    auto pyr = uniform_pyramid(1994, 15, 85);
    pid::CohortEngine engine(params, econ);
    pid::above_threshold_profile(engine, 1994, 0.43, pyr, {}); // prime the cohort cache
    for (auto _ : state) {
        auto prof = pid::above_threshold_profile(engine, 1994, 0.43, pyr, {});
        benchmark::DoNotOptimize(prof.values.data());
    }
}
BENCHMARK(BM_ProfileWithWarmEngine)->Unit(benchmark::kMicrosecond);

void BM_TailSample(benchmark::State &state) {
    pid::TailConfig config;
    for (auto _ : state) {
        auto draws = pid::tail_sample(static_cast<std::size_t>(state.range(0)), 1.0, config, 7);
        benchmark::DoNotOptimize(draws.data());
    }
}
BENCHMARK(BM_TailSample)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_FitExponent(benchmark::State &state) {
    pid::TailConfig config;
    auto draws = pid::tail_sample(100000, 1.0, config, 7);
    for (auto _ : state) {
        auto fit = pid::fit_exponent(draws, 1.0);
        benchmark::DoNotOptimize(fit.regression);
    }
}
BENCHMARK(BM_FitExponent)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
