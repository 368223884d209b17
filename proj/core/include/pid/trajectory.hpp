#pragma once

#include "pid/economy.hpp"
#include "pid/grid.hpp"
#include "pid/params.hpp"

#include <optional>
#include <vector>

namespace pid {

struct IncomePoint {
    double work_experience = 0.0; // years since entering the economy
    double income = 0.0;          // dimensionless, un-boosted
    bool above_threshold = false; // income >= Pareto threshold of the calendar year at this point
};

// Moment at which earning effort ceases: the first work experience t with
// t >= T_cr(start_year + t). The income value is carried across the switch,
// so income_before == income_after by construction.
struct EarningStop {
    double work_experience = 0.0;
    double income_before = 0.0;
    double income_after = 0.0;
};

struct Trajectory {
    TrajectoryClass cls;
    int start_year = 0;
    double step = 0.0;
    std::vector<IncomePoint> points;
    std::optional<EarningStop> earning_stop;
};

// Closed-form income under effectively constant coefficients:
//   sigma_min * lambda_min * S' * L' * (1 - exp(-alpha t / (lambda_min L'))).
// Exact for constant GDP; t >= 0.
double income_closed_form(const TrajectoryClass &cls, double t, const ScalingState &state,
                          const ModelParams &params);

// Exponential decay after earning stops:
//   value_at_tcr * exp(-alpha (t - t_cr) / (lambda_min L')).
// Throws std::domain_error when t < t_cr.
double income_decay(const TrajectoryClass &cls, double t, double t_cr, double value_at_tcr,
                    const ScalingState &state, const ModelParams &params);

// Fixed-step RK4 on dM/dt = k(t) (A(t) - M) with k = alpha/(lambda(t) L')
// and A = lambda(t)^2 S'L', the balance equation rewritten so its stationary
// limit matches the closed form. Earning switches off at the first passage
// of the critical experience; the switch point is located by bisection and
// integrated as two partial steps, keeping the trajectory continuous there.
// Requires the economy series to cover [start_year, start_year + horizon].
Trajectory integrate_income(const TrajectoryClass &cls, int start_year, double horizon,
                            const EconomySeries &econ, const ModelParams &params,
                            double step = 0.05);

// Characteristic time of income growth, L' lambda_min / alpha.
double characteristic_time(const TrajectoryClass &cls, const ScalingState &state,
                           const ModelParams &params);

// Smallest work experience at which the un-boosted income reaches the
// Pareto threshold of the corresponding calendar year; empty when the
// trajectory never reaches it before earning stops (after that the income
// decays while the threshold keeps growing, so no later crossing exists).
std::optional<double> pareto_crossing_time(const TrajectoryClass &cls, int start_year,
                                           const EconomySeries &econ, const ModelParams &params,
                                           double step = 0.05);

} // namespace pid
