#include "pid/population.hpp"

#include "pid/csv.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace pid {

int work_experience(int age) {
    if (age < kWorkStartAge) throw std::domain_error("work_experience: age below " + std::to_string(kWorkStartAge));
    return age - kWorkStartAge;
}

void PopulationPyramid::set(int year, int age, double count) {
    if (age < kWorkStartAge) throw std::domain_error("pyramid: age below " + std::to_string(kWorkStartAge));
    if (count < 0.0) throw std::domain_error("pyramid: negative count");
    int folded = std::min(age, kMaxAge);
    auto &r = counts_[year];
    auto idx = static_cast<std::size_t>(folded - kWorkStartAge);
    if (r.size() <= idx) r.resize(idx + 1, 0.0);
    if (age > kMaxAge)
        r[idx] += count;
    else
        r[idx] = count;
}

const std::vector<double> &PopulationPyramid::row(int year) const {
    auto it = counts_.find(year);
    if (it == counts_.end()) throw std::out_of_range("pyramid: no data for year " + std::to_string(year));
    return it->second;
}

std::vector<int> PopulationPyramid::years() const {
    std::vector<int> out;
    out.reserve(counts_.size());
    for (const auto &[y, _] : counts_) out.push_back(y);
    return out;
}

int PopulationPyramid::max_age(int year) const {
    return kWorkStartAge + static_cast<int>(row(year).size()) - 1;
}

double PopulationPyramid::count(int year, int age) const {
    const auto &r = row(year);
    if (age < kWorkStartAge) return 0.0;
    auto idx = static_cast<std::size_t>(std::min(age, kMaxAge) - kWorkStartAge);
    return idx < r.size() ? r[idx] : 0.0;
}

double PopulationPyramid::total(int year) const {
    double sum = 0.0;
    for (double c : row(year)) sum += c;
    return sum;
}

void PopulationPyramid::write_csv(std::ostream &out) const {
    out << "year,age,count\n";
    for (const auto &[year, r] : counts_) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            out << year << ',' << (kWorkStartAge + static_cast<int>(i)) << ','
                << csv::format_double(r[i]) << '\n';
        }
    }
}

PopulationPyramid parse_pyramid_csv(std::istream &in, const std::string &source_name) {
    csv::Table t = csv::read_table(in, source_name);
    csv::require_header(t, {"year", "age", "count"}, source_name);

    PopulationPyramid p;
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto &r = t.rows[i];
        const std::string where = source_name + ":" + std::to_string(t.lines[i]);
        int year = static_cast<int>(r[0]);
        int age = static_cast<int>(r[1]);
        if (static_cast<double>(year) != r[0] || static_cast<double>(age) != r[1])
            throw std::runtime_error(where + ": year and age must be integers");
        if (age < kWorkStartAge) throw std::runtime_error(where + ": age below " + std::to_string(kWorkStartAge));
        if (r[2] < 0.0) throw std::runtime_error(where + ": negative count");
        if (!seen.emplace(year, std::min(age, kMaxAge)).second && age <= kMaxAge)
            throw std::runtime_error(where + ": duplicate (year, age) = (" + std::to_string(year) + ", " +
                                     std::to_string(age) + ")");
        p.set(year, age, r[2]);
    }

    // Ages must be contiguous from 15 within each year.
    for (int year : p.years()) {
        int hi = p.max_age(year);
        for (int age = kWorkStartAge; age <= hi; ++age) {
            if (!seen.count({year, age}))
                throw std::runtime_error(source_name + ": year " + std::to_string(year) +
                                         " is missing age " + std::to_string(age));
        }
    }
    return p;
}

PopulationPyramid load_pyramid_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    return parse_pyramid_csv(in, path);
}

std::vector<AgeBracket> default_bracket_scheme() {
    std::vector<AgeBracket> scheme;
    scheme.push_back({15, 24});
    for (int low = 25; low <= 70; low += 5) scheme.push_back({low, low + 4});
    scheme.push_back({75, kMaxAge});
    return scheme;
}

std::vector<double> bracket_totals(const PopulationPyramid &pyramid, int year,
                                   const std::vector<AgeBracket> &scheme) {
    std::vector<double> totals(scheme.size(), 0.0);
    int hi = pyramid.max_age(year);
    for (int age = kWorkStartAge; age <= hi; ++age) {
        double c = pyramid.count(year, age);
        for (std::size_t b = 0; b < scheme.size(); ++b) {
            if (age >= scheme[b].low && age <= scheme[b].high) {
                totals[b] += c;
                break;
            }
        }
    }
    return totals;
}

} // namespace pid
