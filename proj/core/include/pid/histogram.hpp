#pragma once

#include <string>
#include <vector>

namespace pid {

// Binned income density for one calendar year. Bin i spans
// [i*bin_width, (i+1)*bin_width); densities are fractions of the 15+
// population and sum to 1 for a complete distribution.
struct IncomeHistogram {
    int year = 0;
    double bin_width = 0.01;
    std::vector<double> densities;
    bool boosted = false; // incomes above the threshold carry the boost factor
    bool dollars = false; // bin coordinates in current dollars instead of dimensionless units

    double bin_low(std::size_t i) const { return static_cast<double>(i) * bin_width; }
    double bin_high(std::size_t i) const { return static_cast<double>(i + 1) * bin_width; }
    double bin_mid(std::size_t i) const { return (static_cast<double>(i) + 0.5) * bin_width; }
    double total() const;
};

// Counts (or normalized values) per single year of work experience.
struct WorkExperienceProfile {
    int year = 0;
    double threshold = 0.0; // same units as the histogram it was derived from
    std::vector<double> values; // index = work experience in years

    double total() const;
    double peak() const;
    // Work experience of the maximum value (first one on ties).
    int peak_experience() const;
};

// Piecewise-linear cumulative curve on an income grid, starting at (0,0).
struct CumulativeCurve {
    std::vector<double> income;
    std::vector<double> value;

    // Linear interpolation; clamps to the end values outside the grid.
    double eval(double m) const;
};

// Fraction of people with income below m; part bins interpolate linearly.
double cumulative_people_below(const IncomeHistogram &hist, double m);

// Fraction of total income received by people with income below m, using
// bin-midpoint income weights; part bins interpolate linearly.
double cumulative_income_below(const IncomeHistogram &hist, double m);

// The same quantities as full curves over all bin edges.
CumulativeCurve people_curve(const IncomeHistogram &hist);
CumulativeCurve income_curve(const IncomeHistogram &hist);

} // namespace pid
