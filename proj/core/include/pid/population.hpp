#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace pid {

inline constexpr int kWorkStartAge = 15;
inline constexpr int kMaxAge = 100; // ages above are folded into a 100+ bin

// Work experience is age minus the official work start age.
// Throws std::domain_error for ages below it.
int work_experience(int age);

// Counts of persons per single year of age, per calendar year. Counts are
// non-negative reals so interpolated projections are admissible. Ages are
// contiguous from 15; anything above 100 is folded into the terminal bin.
class PopulationPyramid {
  public:
    void set(int year, int age, double count);

    bool contains(int year) const { return counts_.count(year) != 0; }
    std::vector<int> years() const;
    int max_age(int year) const;
    // 0 for ages beyond the stored range of that year.
    double count(int year, int age) const;
    double total(int year) const;

    void write_csv(std::ostream &out) const;

  private:
    const std::vector<double> &row(int year) const;
    std::map<int, std::vector<double>> counts_; // index 0 = age 15
};

// CSV schema `year,age,count`, header required. Rejects negative counts,
// duplicate (year, age) pairs and non-contiguous ages, naming the row.
PopulationPyramid load_pyramid_csv(const std::string &path);
PopulationPyramid parse_pyramid_csv(std::istream &in, const std::string &source_name);

// Census-style age brackets: 15-24, then 5-year brackets to 70-74, open 75+.
struct AgeBracket {
    int low = 0;
    int high = 0; // inclusive; kMaxAge means open-ended
};

std::vector<AgeBracket> default_bracket_scheme();

// Sums pyramid counts per bracket; the grand total is preserved.
std::vector<double> bracket_totals(const PopulationPyramid &pyramid, int year,
                                   const std::vector<AgeBracket> &scheme);

} // namespace pid
