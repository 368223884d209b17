#pragma once

#include "pid/params.hpp"

#include <string>
#include <vector>

namespace pid {

// Calendar year at which the nominal index is anchored; the dollar anchor
// in ModelParams is quoted in dollars of this year.
inline constexpr int kDollarAnchorYear = 2000;

// Per-capita GDP indices per calendar year, contiguous. Values are stored
// as loaded; consumers re-anchor the real index at params.start_year and
// the nominal index at kDollarAnchorYear, so the input files may use any
// positive anchoring.
class EconomySeries {
  public:
    EconomySeries() = default;
    EconomySeries(int first_year, std::vector<double> real, std::vector<double> nominal);

    int first_year() const { return first_year_; }
    int last_year() const { return first_year_ + static_cast<int>(real_.size()) - 1; }
    bool contains(int year) const { return year >= first_year() && year <= last_year(); }

    double real_index(int year) const;
    double nominal_index(int year) const;

    // real_index(year) / real_index(base_year); this is GDP(t)/GDP(0) when
    // base_year is the modelling start.
    double real_factor(int year, int base_year) const;

    // Extends the series by `years` entries past the last year, growing the
    // real index by (1+growth) per year and holding the nominal/real ratio
    // of the last observed year.
    EconomySeries extended(double growth, int years) const;

  private:
    int first_year_ = 0;
    std::vector<double> real_;
    std::vector<double> nominal_;
};

// CSV schema: header `year,real_gdp_index,nominal_gdp_index`, one row per
// year. Years must be contiguous and indices strictly positive.
EconomySeries load_economy_csv(const std::string &path);
EconomySeries parse_economy_csv(std::istream &in, const std::string &source_name);

// GDP-driven scaling laws evaluated for one calendar year.
struct ScalingState {
    int year = 0;
    double lambda_min = 1.0;       // sqrt of the real GDP factor since start_year
    double sigma_min = 1.0;        // equal to lambda_min
    double t_cr = 0.0;             // critical work experience [years]
    double pareto_threshold = 0.0; // dimensionless threshold, grows as real GDP
};

ScalingState scaling_state(const ModelParams &params, const EconomySeries &econ, int year);

// Converts a dimensionless income to current dollars of `year`:
// m * dollar_anchor * nominal(year)/nominal(2000).
double to_dollars(double m, int year, const EconomySeries &econ, const ModelParams &params);
double from_dollars(double dollars, int year, const EconomySeries &econ, const ModelParams &params);

// Continuous-time view of the scaling laws over the series range. The
// sqrt-GDP coefficients are interpolated linearly between annual values;
// the threshold interpolates the real factor itself.
class ScalingTrack {
  public:
    ScalingTrack(const ModelParams &params, const EconomySeries &econ);

    double first_time() const { return first_year_; }
    double last_time() const { return first_year_ + static_cast<double>(lambda_.size()) - 1.0; }

    double lambda(double calendar_time) const;
    double real_factor(double calendar_time) const;
    double pareto_threshold(double calendar_time) const { return threshold0_ * real_factor(calendar_time); }
    double t_cr(double calendar_time) const { return t_cr0_ * lambda(calendar_time); }
    double alpha() const { return alpha_; }

  private:
    double interp(const std::vector<double> &v, double calendar_time) const;

    int first_year_;
    double alpha_;
    double t_cr0_;
    double threshold0_;
    std::vector<double> lambda_; // sqrt(real factor) at integer years
    std::vector<double> factor_; // real factor at integer years
};

} // namespace pid
