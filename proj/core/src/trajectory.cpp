#include "pid/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace pid {

namespace {

// One RK4 step of dM/dt = f(t, M). `earning` selects between the balance
// equation and pure dissipation.
struct Stepper {
    const ScalingTrack &track;
    double start_time; // calendar time of work experience 0
    double s_rel;
    double l_rel;

    double rate(double t, double m, bool earning) const {
        double lam = track.lambda(start_time + t);
        double k = track.alpha() / (lam * l_rel);
        if (!earning) return -k * m;
        double asymptote = lam * lam * s_rel * l_rel;
        return k * (asymptote - m);
    }

    double step(double t, double m, double h, bool earning) const {
        double k1 = rate(t, m, earning);
        double k2 = rate(t + 0.5 * h, m + 0.5 * h * k1, earning);
        double k3 = rate(t + 0.5 * h, m + 0.5 * h * k2, earning);
        double k4 = rate(t + h, m + h * k3, earning);
        return m + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
};

// Signed distance to the earning cut-off; negative while still earning.
double stop_margin(const ScalingTrack &track, double start_time, double t) {
    return t - track.t_cr(start_time + t);
}

} // namespace

double income_closed_form(const TrajectoryClass &cls, double t, const ScalingState &state,
                          const ModelParams &params) {
    double rate = params.alpha / (state.lambda_min * cls.l_rel);
    return state.sigma_min * state.lambda_min * cls.capacity() * (1.0 - std::exp(-rate * t));
}

double income_decay(const TrajectoryClass &cls, double t, double t_cr, double value_at_tcr,
                    const ScalingState &state, const ModelParams &params) {
    if (t < t_cr) throw std::domain_error("income_decay: t must be >= t_cr");
    double rate = params.alpha / (state.lambda_min * cls.l_rel);
    return value_at_tcr * std::exp(-rate * (t - t_cr));
}

double characteristic_time(const TrajectoryClass &cls, const ScalingState &state,
                           const ModelParams &params) {
    return cls.l_rel * state.lambda_min / params.alpha;
}

Trajectory integrate_income(const TrajectoryClass &cls, int start_year, double horizon,
                            const EconomySeries &econ, const ModelParams &params, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("integrate_income: step must be > 0");
    if (horizon < 0.0) throw std::invalid_argument("integrate_income: horizon must be >= 0");
    if (!econ.contains(start_year) || start_year + horizon > static_cast<double>(econ.last_year()))
        throw std::out_of_range("integrate_income: economy series does not cover [" +
                                std::to_string(start_year) + ", start+" + std::to_string(horizon) + "]");

    ScalingTrack track(params, econ);
    Stepper stepper{track, static_cast<double>(start_year), cls.s_rel, cls.l_rel};

    Trajectory traj;
    traj.cls = cls;
    traj.start_year = start_year;
    traj.step = step;

    double m = 0.0;
    bool earning = true;

    auto record = [&](double te, double income) {
        bool above = income >= track.pareto_threshold(start_year + te);
        traj.points.push_back({te, income, above});
    };
    record(0.0, 0.0);

    // Step times come from the index, not accumulation, so the grid cannot
    // drift and the final point lands exactly on the horizon.
    const auto n_steps = static_cast<long>(std::ceil(horizon / step - 1e-9));
    for (long i = 1; i <= n_steps; ++i) {
        double t = static_cast<double>(i - 1) * step;
        double t_next = std::min(horizon, static_cast<double>(i) * step);

        if (earning && stop_margin(track, start_year, t_next) >= 0.0) {
            // Locate the first passage of the critical experience inside
            // this step, then integrate up to it and restart in decay mode.
            double lo = t, hi = t_next;
            for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
                double mid = 0.5 * (lo + hi);
                (stop_margin(track, start_year, mid) < 0.0 ? lo : hi) = mid;
            }
            double t_stop = hi;
            if (t_stop > t) m = stepper.step(t, m, t_stop - t, true);
            traj.earning_stop = EarningStop{t_stop, m, m};
            earning = false;
            if (t_next > t_stop) m = stepper.step(t_stop, m, t_next - t_stop, false);
        } else {
            m = stepper.step(t, m, t_next - t, earning);
        }
        record(t_next, m);
    }
    return traj;
}

std::optional<double> pareto_crossing_time(const TrajectoryClass &cls, int start_year,
                                           const EconomySeries &econ, const ModelParams &params,
                                           double step) {
    if (!(step > 0.0)) throw std::invalid_argument("pareto_crossing_time: step must be > 0");
    if (!econ.contains(start_year))
        throw std::out_of_range("pareto_crossing_time: start year outside economy series");

    ScalingTrack track(params, econ);
    Stepper stepper{track, static_cast<double>(start_year), cls.s_rel, cls.l_rel};
    const double t_end = static_cast<double>(econ.last_year() - start_year);

    auto gap = [&](double t, double m) { return m - track.pareto_threshold(start_year + t); };

    double t = 0.0;
    double m = 0.0;
    if (gap(0.0, 0.0) >= 0.0) return 0.0;

    while (t < t_end - 1e-12) {
        if (stop_margin(track, start_year, t) >= 0.0) return std::nullopt; // earning stopped first
        double h = std::min(step, t_end - t);
        double m_next = stepper.step(t, m, h, true);
        if (gap(t + h, m_next) >= 0.0) {
            // Bisect within [t, t+h]; income inside the step is a single
            // partial RK4 step from the bracket start.
            double lo = t, hi = t + h;
            for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
                double mid = 0.5 * (lo + hi);
                double m_mid = stepper.step(t, m, mid - t, true);
                (gap(mid, m_mid) < 0.0 ? lo : hi) = mid;
            }
            // If earning stops earlier in this same step, the threshold is
            // not actually reached.
            if (stop_margin(track, start_year, hi) >= 0.0) return std::nullopt;
            return hi;
        }
        t += h;
        m = m_next;
    }
    if (stop_margin(track, start_year, t) < 0.0)
        throw std::out_of_range("pareto_crossing_time: economy series ends before earning stops");
    return std::nullopt;
}

} // namespace pid
