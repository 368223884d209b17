#include "pid/histogram.hpp"

#include "pid/numeric.hpp"

#include <algorithm>
#include <stdexcept>

namespace pid {

double IncomeHistogram::total() const {
    KahanSum s;
    for (double d : densities) s.add(d);
    return s.value();
}

double WorkExperienceProfile::total() const {
    KahanSum s;
    for (double v : values) s.add(v);
    return s.value();
}

double WorkExperienceProfile::peak() const {
    double best = 0.0;
    for (double v : values) best = std::max(best, v);
    return best;
}

int WorkExperienceProfile::peak_experience() const {
    if (values.empty()) return 0;
    return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

double CumulativeCurve::eval(double m) const {
    if (income.empty()) throw std::invalid_argument("cumulative curve: empty");
    if (m <= income.front()) return value.front();
    if (m >= income.back()) return value.back();
    auto it = std::upper_bound(income.begin(), income.end(), m);
    auto j = static_cast<std::size_t>(it - income.begin());
    double lo = income[j - 1], hi = income[j];
    double f = (m - lo) / (hi - lo);
    return (1.0 - f) * value[j - 1] + f * value[j];
}

CumulativeCurve people_curve(const IncomeHistogram &hist) {
    CumulativeCurve c;
    c.income.reserve(hist.densities.size() + 1);
    c.value.reserve(hist.densities.size() + 1);
    c.income.push_back(0.0);
    c.value.push_back(0.0);
    KahanSum s;
    for (std::size_t i = 0; i < hist.densities.size(); ++i) {
        s.add(hist.densities[i]);
        c.income.push_back(hist.bin_high(i));
        c.value.push_back(s.value());
    }
    return c;
}

CumulativeCurve income_curve(const IncomeHistogram &hist) {
    CumulativeCurve c;
    c.income.reserve(hist.densities.size() + 1);
    c.value.reserve(hist.densities.size() + 1);
    c.income.push_back(0.0);
    c.value.push_back(0.0);
    KahanSum s;
    for (std::size_t i = 0; i < hist.densities.size(); ++i) {
        s.add(hist.densities[i] * hist.bin_mid(i));
        c.income.push_back(hist.bin_high(i));
        c.value.push_back(s.value());
    }
    double total = c.value.back();
    if (total > 0.0) {
        for (double &v : c.value) v /= total;
    }
    return c;
}

double cumulative_people_below(const IncomeHistogram &hist, double m) {
    if (m < 0.0) throw std::domain_error("cumulative_people_below: income must be >= 0");
    return people_curve(hist).eval(m);
}

double cumulative_income_below(const IncomeHistogram &hist, double m) {
    if (m < 0.0) throw std::domain_error("cumulative_income_below: income must be >= 0");
    return income_curve(hist).eval(m);
}

} // namespace pid
