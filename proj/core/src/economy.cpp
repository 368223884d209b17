#include "pid/economy.hpp"

#include "pid/csv.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace pid {

EconomySeries::EconomySeries(int first_year, std::vector<double> real, std::vector<double> nominal)
    : first_year_(first_year), real_(std::move(real)), nominal_(std::move(nominal)) {
    if (real_.empty() || real_.size() != nominal_.size())
        throw std::invalid_argument("economy series: real and nominal columns must be non-empty and equal length");
    for (std::size_t i = 0; i < real_.size(); ++i) {
        if (!(real_[i] > 0.0) || !(nominal_[i] > 0.0))
            throw std::invalid_argument("economy series: indices must be strictly positive (year " +
                                        std::to_string(first_year_ + static_cast<int>(i)) + ")");
    }
}

double EconomySeries::real_index(int year) const {
    if (!contains(year))
        throw std::out_of_range("economy series: year " + std::to_string(year) + " outside [" +
                                std::to_string(first_year()) + "," + std::to_string(last_year()) + "]");
    return real_[static_cast<std::size_t>(year - first_year_)];
}

double EconomySeries::nominal_index(int year) const {
    if (!contains(year))
        throw std::out_of_range("economy series: year " + std::to_string(year) + " outside [" +
                                std::to_string(first_year()) + "," + std::to_string(last_year()) + "]");
    return nominal_[static_cast<std::size_t>(year - first_year_)];
}

double EconomySeries::real_factor(int year, int base_year) const {
    return real_index(year) / real_index(base_year);
}

EconomySeries EconomySeries::extended(double growth, int years) const {
    if (years < 0) throw std::invalid_argument("economy series: negative extension");
    std::vector<double> real = real_;
    std::vector<double> nominal = nominal_;
    double ratio = nominal_.back() / real_.back();
    double r = real_.back();
    for (int k = 0; k < years; ++k) {
        r *= 1.0 + growth;
        real.push_back(r);
        nominal.push_back(r * ratio);
    }
    return EconomySeries(first_year_, std::move(real), std::move(nominal));
}

EconomySeries parse_economy_csv(std::istream &in, const std::string &source_name) {
    csv::Table t = csv::read_table(in, source_name);
    csv::require_header(t, {"year", "real_gdp_index", "nominal_gdp_index"}, source_name);
    std::map<int, std::pair<double, double>> by_year;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto &row = t.rows[i];
        int year = static_cast<int>(row[0]);
        if (static_cast<double>(year) != row[0])
            throw std::runtime_error(source_name + ":" + std::to_string(t.lines[i]) + ": year must be an integer");
        if (!by_year.emplace(year, std::make_pair(row[1], row[2])).second)
            throw std::runtime_error(source_name + ":" + std::to_string(t.lines[i]) + ": duplicate year " +
                                     std::to_string(year));
    }
    if (by_year.empty()) throw std::runtime_error(source_name + ": no data rows");
    int first = by_year.begin()->first;
    int expect = first;
    std::vector<double> real, nominal;
    for (const auto &[year, v] : by_year) {
        if (year != expect)
            throw std::runtime_error(source_name + ": years must be contiguous, missing " + std::to_string(expect));
        ++expect;
        real.push_back(v.first);
        nominal.push_back(v.second);
    }
    try {
        return EconomySeries(first, std::move(real), std::move(nominal));
    } catch (const std::invalid_argument &e) {
        throw std::runtime_error(source_name + ": " + e.what());
    }
}

EconomySeries load_economy_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    return parse_economy_csv(in, path);
}

ScalingState scaling_state(const ModelParams &params, const EconomySeries &econ, int year) {
    double factor = econ.real_factor(year, params.start_year);
    ScalingState s;
    s.year = year;
    s.lambda_min = std::sqrt(factor);
    s.sigma_min = s.lambda_min;
    s.t_cr = params.t_cr0 * s.lambda_min;
    s.pareto_threshold = params.pareto_threshold0 * factor;
    return s;
}

double to_dollars(double m, int year, const EconomySeries &econ, const ModelParams &params) {
    if (m < 0.0) throw std::domain_error("to_dollars: income must be >= 0");
    return m * params.dollar_anchor * econ.nominal_index(year) / econ.nominal_index(kDollarAnchorYear);
}

double from_dollars(double dollars, int year, const EconomySeries &econ, const ModelParams &params) {
    if (dollars < 0.0) throw std::domain_error("from_dollars: amount must be >= 0");
    return dollars / (params.dollar_anchor * econ.nominal_index(year) / econ.nominal_index(kDollarAnchorYear));
}

ScalingTrack::ScalingTrack(const ModelParams &params, const EconomySeries &econ)
    : first_year_(econ.first_year()), alpha_(params.alpha), t_cr0_(params.t_cr0),
      threshold0_(params.pareto_threshold0) {
    int n = econ.last_year() - econ.first_year() + 1;
    lambda_.reserve(n);
    factor_.reserve(n);
    for (int y = econ.first_year(); y <= econ.last_year(); ++y) {
        double f = econ.real_factor(y, params.start_year);
        factor_.push_back(f);
        lambda_.push_back(std::sqrt(f));
    }
}

double ScalingTrack::interp(const std::vector<double> &v, double calendar_time) const {
    double pos = calendar_time - first_year_;
    if (pos < 0.0 || pos > static_cast<double>(v.size()) - 1.0)
        throw std::out_of_range("scaling track: time " + std::to_string(calendar_time) +
                                " outside economy series coverage");
    auto i = static_cast<std::size_t>(pos);
    if (i >= v.size() - 1) return v.back();
    double f = pos - static_cast<double>(i);
    return (1.0 - f) * v[i] + f * v[i + 1];
}

double ScalingTrack::lambda(double calendar_time) const { return interp(lambda_, calendar_time); }
double ScalingTrack::real_factor(double calendar_time) const { return interp(factor_, calendar_time); }

} // namespace pid
