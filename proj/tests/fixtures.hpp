#pragma once

#include "pid/economy.hpp"
#include "pid/params.hpp"
#include "pid/population.hpp"

#include <cmath>
#include <vector>

namespace fixtures {

// Flat economy: every index 1.0.
inline pid::EconomySeries constant_econ(int first_year, int last_year) {
    std::vector<double> ones(static_cast<std::size_t>(last_year - first_year + 1), 1.0);
    return pid::EconomySeries(first_year, ones, ones);
}

// Steady growth, real index anchored at 1.0 in anchor_year. The default
// real rate reproduces a 1960->2002 factor of about 2.22.
inline pid::EconomySeries growth_econ(int first_year, int last_year, double real_rate = 0.0192,
                                      double nominal_rate = 0.05, int anchor_year = 1960) {
    std::vector<double> real, nominal;
    for (int y = first_year; y <= last_year; ++y) {
        real.push_back(std::pow(1.0 + real_rate, y - anchor_year));
        nominal.push_back(std::pow(1.0 + nominal_rate, y - 2000));
    }
    return pid::EconomySeries(first_year, real, nominal);
}

inline pid::PopulationPyramid uniform_pyramid(int year, int lo_age, int hi_age, double count = 1.0) {
    pid::PopulationPyramid p;
    for (int age = lo_age; age <= hi_age; ++age) p.set(year, age, count);
    return p;
}

} // namespace fixtures
