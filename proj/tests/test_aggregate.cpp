#include "pid/aggregate.hpp"

#include "pid/trajectory.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace pid;

namespace {

// Exactly representable bin width and threshold, so that the supercritical
// boundary coincides with a bin edge and census counts can be compared
// without part-bin ambiguity.
constexpr double kExactWidth = 1.0 / 128.0;
constexpr double kExactThreshold0 = 55.0 / 128.0; // 0.4296875

double mass_from_bin(const IncomeHistogram &h, std::size_t first_bin) {
    double s = 0.0;
    for (std::size_t i = first_bin; i < h.densities.size(); ++i) s += h.densities[i];
    return s;
}

// Census oracle: classify every (age, class) atom with the closed forms,
// valid under constant GDP where they are exact.
double census_supercritical_fraction(const PopulationPyramid &pyramid, int year,
                                     const ModelParams &params, double threshold) {
    ScalingState state;
    state.lambda_min = state.sigma_min = 1.0;
    auto classes = grid(params);
    double atoms = 0.0;
    for (int age = kWorkStartAge; age <= pyramid.max_age(year); ++age) {
        double count = pyramid.count(year, age);
        if (count <= 0.0) continue;
        double te = work_experience(age);
        for (const auto &cls : classes) {
            double m = te <= params.t_cr0
                           ? income_closed_form(cls, te, state, params)
                           : income_decay(cls, te, params.t_cr0,
                                          income_closed_form(cls, params.t_cr0, state, params), state,
                                          params);
            if (m >= threshold) atoms += count;
        }
    }
    return atoms / (pyramid.total(year) * static_cast<double>(classes.size()));
}

} // namespace

TEST_CASE("one fifteen-year-old lands in the lowest bin") {
    ModelParams params;
    auto econ = fixtures::constant_econ(1950, 1970);
    PopulationPyramid pyr;
    pyr.set(1960, 15, 1.0);
    auto hist = build_pid(1960, pyr, econ, params);
    REQUIRE(!hist.densities.empty());
    CHECK(hist.densities[0] == doctest::Approx(1.0));
    CHECK(hist.total() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("densities sum to one") {
    ModelParams params;
    auto econ = fixtures::constant_econ(1890, 2000);
    auto pyr = fixtures::uniform_pyramid(1960, 15, 75);
    for (auto mode : {SimulationMode::deterministic, SimulationMode::stochastic}) {
        BuildOptions opts;
        opts.mode = mode;
        opts.seed = 31;
        auto hist = build_pid(1960, pyr, econ, params, opts);
        CHECK(std::abs(hist.total() - 1.0) < 1e-9);
    }
}

TEST_CASE("about a tenth of a census-like population sits above the threshold") {
    // The ~10% supercritical share holds for a working-age-bulge pyramid;
    // the same quantity for a flat 15..75 pyramid is 0.063 and is frozen
    // below as a regression anchor.
    ModelParams params;
    auto econ = fixtures::constant_econ(1880, 2000);
    PopulationPyramid bell;
    for (int age = 15; age <= 75; ++age) {
        double x = (age - 40.0) / 18.0;
        bell.set(1960, age, std::exp(-0.5 * x * x));
    }
    auto prof = above_threshold_profile(1960, 0.43, bell, econ, params);
    double fraction = prof.total() / bell.total(1960);
    CHECK(fraction == doctest::Approx(0.10).epsilon(0.3)); // +-0.03

    auto uniform = fixtures::uniform_pyramid(1960, 15, 75);
    auto uprof = above_threshold_profile(1960, 0.43, uniform, econ, params);
    CHECK(uprof.total() / uniform.total(1960) == doctest::Approx(0.0633).epsilon(0.01));
}

TEST_CASE("deterministic and stochastic modes agree on the supercritical count") {
    ModelParams params;
    params.pareto_threshold0 = kExactThreshold0;
    auto econ = fixtures::constant_econ(1880, 2000);
    auto pyr = fixtures::uniform_pyramid(1960, 15, 75, 3.0);

    BuildOptions det;
    det.bin_width = kExactWidth;
    BuildOptions stoch = det;
    stoch.mode = SimulationMode::stochastic;
    stoch.seed = 7;

    auto hd = build_pid(1960, pyr, econ, params, det);
    auto hs = build_pid(1960, pyr, econ, params, stoch);

    double above_det = mass_from_bin(hd, 55);
    double above_stoch = mass_from_bin(hs, 55);
    CHECK(std::abs(above_det - above_stoch) < 1e-12);

    // Brute-force census of simulated persons via the closed forms.
    double oracle = census_supercritical_fraction(pyr, 1960, params, kExactThreshold0);
    CHECK(above_det == doctest::Approx(oracle).epsilon(1e-9));

    // Subcritical bins are untouched by the redistribution.
    for (std::size_t i = 0; i < 55; ++i) {
        CHECK(hd.densities[i] == doctest::Approx(hs.densities[i]).epsilon(1e-12));
    }
}

TEST_CASE("histograms are bit-reproducible") {
    ModelParams params;
    auto econ = fixtures::constant_econ(1890, 2000);
    auto pyr = fixtures::uniform_pyramid(1960, 15, 60);

    auto a = build_pid(1960, pyr, econ, params);
    auto b = build_pid(1960, pyr, econ, params);
    CHECK(a.densities == b.densities);

    BuildOptions s1;
    s1.mode = SimulationMode::stochastic;
    s1.seed = 11;
    auto c = build_pid(1960, pyr, econ, params, s1);
    auto d = build_pid(1960, pyr, econ, params, s1);
    CHECK(c.densities == d.densities);

    s1.seed = 12;
    auto e = build_pid(1960, pyr, econ, params, s1);
    CHECK(c.densities != e.densities);
}

TEST_CASE("threading does not change the result") {
    ModelParams params;
    auto econ = fixtures::growth_econ(1900, 2010);
    auto pyr = fixtures::uniform_pyramid(1994, 15, 90);
    BuildOptions one;
    BuildOptions four;
    four.threads = 4;
    auto a = build_pid(1994, pyr, econ, params, one);
    auto b = build_pid(1994, pyr, econ, params, four);
    CHECK(a.densities == b.densities);
}

TEST_CASE("missing years raise range errors") {
    ModelParams params;
    auto econ = fixtures::constant_econ(1950, 2000);
    auto pyr = fixtures::uniform_pyramid(1960, 15, 40);
    CHECK_THROWS_AS(build_pid(1961, pyr, econ, params), std::out_of_range);
    // Economy too short for the oldest cohort.
    auto old_pyr = fixtures::uniform_pyramid(1960, 15, 90);
    CHECK_THROWS_AS(build_pid(1960, old_pyr, econ, params), std::out_of_range);
}

TEST_CASE("nominal adjustment is the identity at the base year") {
    ModelParams params;
    auto econ = fixtures::growth_econ(1940, 2010, 0.0, 0.05);
    auto pyr = fixtures::uniform_pyramid(1999, 15, 70);
    BuildOptions opts;
    opts.dollars = true;
    opts.bin_width = 2500.0;
    auto hist = build_pid(1999, pyr, econ, params, opts);
    auto same = normalize_adjust(hist, econ, 1999);
    CHECK(same.densities == hist.densities);
}

TEST_CASE("doubling the nominal index halves every income coordinate") {
    IncomeHistogram hist;
    hist.year = 1961;
    hist.bin_width = 1.0;
    hist.dollars = true;
    hist.densities.assign(10, 0.0);
    hist.densities[8] = 1.0; // all mass in [8, 9)
    EconomySeries econ(1960, {1.0, 1.0}, {1.0, 2.0});
    auto adj = normalize_adjust(hist, econ, 1960);
    // [8,9)/2 = [4,4.5) falls entirely inside bin 4 of the original grid.
    CHECK(adj.densities[4] == doctest::Approx(1.0));
    CHECK(adj.total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cumulative_people_below(adj, 4.0) == doctest::Approx(0.0));
    CHECK(cumulative_people_below(adj, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("years with the same real state adjust onto the same curve") {
    ModelParams params;
    // Constant real GDP, 5% nominal inflation: the dimensionless model is
    // identical across years, dollar histograms differ only by scale.
    auto econ = fixtures::growth_econ(1900, 2010, 0.0, 0.05);
    PopulationPyramid pyr;
    for (int age = 15; age <= 70; ++age) {
        pyr.set(1994, age, 1.0);
        pyr.set(2002, age, 1.0);
    }
    BuildOptions opts;
    opts.dollars = true;
    opts.bin_width = 2500.0;
    auto a = normalize_adjust(build_pid(1994, pyr, econ, params, opts), econ, 1994);
    auto b = normalize_adjust(build_pid(2002, pyr, econ, params, opts), econ, 1994);

    double bin_cap = 0.0;
    for (double d : a.densities) bin_cap = std::max(bin_cap, d);
    auto ca = people_curve(a);
    auto cb = people_curve(b);
    for (double x = 0.0; x < 130000.0; x += 1250.0) {
        CHECK(std::abs(ca.eval(x) - cb.eval(x)) <= bin_cap + 1e-9); // within one bin
    }
}

TEST_CASE("normalize_adjust requires dollar input") {
    IncomeHistogram dimless;
    dimless.year = 1994;
    dimless.densities = {1.0};
    auto econ = fixtures::constant_econ(1990, 2000);
    CHECK_THROWS_AS(normalize_adjust(dimless, econ, 1994), std::invalid_argument);
}

TEST_CASE("zero threshold counts everyone") {
    ModelParams params;
    auto econ = fixtures::constant_econ(1890, 2000);
    auto pyr = fixtures::uniform_pyramid(1960, 15, 80, 2.5);
    auto prof = above_threshold_profile(1960, 0.0, pyr, econ, params);
    REQUIRE(prof.values.size() == 66);
    for (int te = 0; te <= 65; ++te) {
        CHECK(prof.values[static_cast<std::size_t>(te)] ==
              doctest::Approx(pyr.count(1960, 15 + te)).epsilon(1e-12));
    }
    CHECK(prof.total() == doctest::Approx(pyr.total(1960)).epsilon(1e-9));
}

TEST_CASE("a threshold above the boosted maximum empties the profile") {
    ModelParams params;
    auto econ = fixtures::constant_econ(1890, 2000);
    auto pyr = fixtures::uniform_pyramid(1960, 15, 80);
    double unreachable = 1.0 * params.boost_factor + 1e-9; // lambda = 1: max capacity 1, boosted
    auto prof = above_threshold_profile(1960, unreachable, pyr, econ, params);
    for (double v : prof.values) CHECK(v == 0.0);
}

TEST_CASE("profile counts fall as the threshold rises") {
    ModelParams params;
    auto econ = fixtures::growth_econ(1900, 2010);
    auto pyr = fixtures::uniform_pyramid(1994, 15, 85);
    CohortEngine engine(params, econ);
    double prev_total = -1.0;
    std::vector<double> prev;
    for (double thr : {0.0, 0.2, 0.5, 0.8, 1.2, 2.0}) {
        auto prof = above_threshold_profile(engine, 1994, thr, pyr, {});
        if (!prev.empty()) {
            for (std::size_t te = 0; te < prof.values.size(); ++te) {
                CHECK(prof.values[te] <= prev[te] + 1e-12);
            }
            CHECK(prof.total() <= prev_total + 1e-9);
        }
        prev = prof.values;
        prev_total = prof.total();
    }
}

TEST_CASE("the 2002 profile peaks near the critical experience") {
    ModelParams params;
    auto econ = fixtures::growth_econ(1875, 2030); // 1960->2002 factor ~2.22
    auto pyr = fixtures::uniform_pyramid(2002, 15, 100);
    double pareto = params.pareto_threshold0 * econ.real_factor(2002, params.start_year);
    auto prof = above_threshold_profile(2002, pareto, pyr, econ, params);
    double t_cr_2002 = params.t_cr0 * std::sqrt(econ.real_factor(2002, params.start_year));
    CHECK(t_cr_2002 == doctest::Approx(39.5).epsilon(0.01));
    CHECK(prof.peak_experience() >= 36);
    CHECK(prof.peak_experience() <= 41);
}

TEST_CASE("peak normalization") {
    WorkExperienceProfile p;
    p.values = {1.0, 4.0, 2.0};
    auto self = normalize_to_peak(p, p);
    CHECK(self.peak() == doctest::Approx(1.0));
    CHECK(self.values[0] == doctest::Approx(0.25));

    WorkExperienceProfile zero;
    zero.values = {0.0, 0.0};
    auto z = normalize_to_peak(zero, p);
    for (double v : z.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(normalize_to_peak(p, zero), std::domain_error);

    WorkExperienceProfile q;
    q.values = {3.0, 12.0, 6.0}; // proportional to p
    auto np = normalize_to_peak(p, p);
    auto nq = normalize_to_peak(q, q);
    for (std::size_t i = 0; i < np.values.size(); ++i) {
        CHECK(np.values[i] == doctest::Approx(nq.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("density evolution yields unit-sum profiles") {
    ModelParams params;
    auto econ = fixtures::growth_econ(1875, 2030);
    PopulationPyramid pyr;
    for (int y : {1980, 2002}) {
        for (int age = 15; age <= 100; ++age) pyr.set(y, age, 1.0);
    }
    auto evo = density_evolution({1980, 2002}, pyr, econ, params);
    REQUIRE(evo.size() == 2);
    for (const auto &p : evo) CHECK(p.total() == doctest::Approx(1.0).epsilon(1e-9));

    // Under growing GDP the early-experience segment flattens: the first
    // decade carries relatively more of the supercritical mass in 1980.
    auto early = [](const WorkExperienceProfile &p) {
        double s = 0.0;
        for (int te = 0; te < 10; ++te) s += p.values[static_cast<std::size_t>(te)];
        return s;
    };
    CHECK(early(evo[0]) > early(evo[1]));
}

TEST_CASE("density evolution is time-invariant in a flat economy") {
    ModelParams params;
    auto econ = fixtures::constant_econ(1875, 2030);
    PopulationPyramid pyr;
    for (int y : {1990, 2000}) {
        for (int age = 15; age <= 100; ++age) pyr.set(y, age, 1.0);
    }
    auto evo = density_evolution({1990, 2000}, pyr, econ, params);
    CHECK(evo[0].values == evo[1].values);
}

TEST_CASE("zero-growth forecast with a stationary projection is time-invariant") {
    ModelParams params;
    auto econ = fixtures::constant_econ(1875, 2005);
    PopulationPyramid proj;
    for (int y = 2002; y <= 2010; ++y) {
        for (int age = 15; age <= 100; ++age) proj.set(y, age, 1.0);
    }
    auto fc = forecast(proj, econ, 0.0, {2002, 2006, 2010}, params);
    REQUIRE(fc.size() == 3);
    CHECK(fc[0].values == fc[1].values);
    CHECK(fc[0].values == fc[2].values);
}

TEST_CASE("growth forecast shifts the peak out and thins the young tail") {
    ModelParams params;
    auto econ = fixtures::growth_econ(1875, 2002);
    PopulationPyramid proj;
    for (int y = 2002; y <= 2023; ++y) {
        for (int age = 15; age <= 100; ++age) {
            double x = (age - 42.0) / 20.0;
            proj.set(y, age, std::exp(-0.5 * x * x));
        }
    }
    std::vector<int> years;
    for (int y = 2002; y <= 2023; ++y) years.push_back(y);
    auto fc = forecast(proj, econ, 0.016, years, params);
    REQUIRE(fc.size() == years.size());

    // Relative mass below 15 years of experience declines monotonically.
    auto young = [](const WorkExperienceProfile &p) {
        double s = 0.0;
        for (int te = 0; te < 15; ++te) s += p.values[static_cast<std::size_t>(te)];
        return s;
    };
    for (std::size_t i = 1; i < fc.size(); ++i) CHECK(young(fc[i]) < young(fc[i - 1]));

    // Peak location, measured as the centroid of the upper half-band to be
    // robust to plateau ties, never moves toward younger ages.
    auto peak_location = [](const WorkExperienceProfile &p) {
        double peak = p.peak();
        double num = 0.0, den = 0.0;
        for (std::size_t te = 0; te < p.values.size(); ++te) {
            if (p.values[te] >= 0.5 * peak) {
                num += static_cast<double>(te) * p.values[te];
                den += p.values[te];
            }
        }
        return num / den;
    };
    for (std::size_t i = 1; i < fc.size(); ++i) {
        CHECK(peak_location(fc[i]) >= peak_location(fc[i - 1]) - 1e-12);
    }
    CHECK(fc.back().peak_experience() > fc.front().peak_experience());
}

TEST_CASE("cumulative people below") {
    IncomeHistogram h;
    h.bin_width = 1.0;
    h.densities = {0.5, 0.5};
    CHECK(cumulative_people_below(h, 0.0) == 0.0);
    CHECK(cumulative_people_below(h, 1.0) == doctest::Approx(0.5)); // median edge of a symmetric two-bin histogram
    CHECK(cumulative_people_below(h, 1e12) == doctest::Approx(1.0));
    CHECK(cumulative_people_below(h, 0.5) == doctest::Approx(0.25)); // linear part bin
    CHECK_THROWS_AS(cumulative_people_below(h, -1.0), std::domain_error);
}

TEST_CASE("cumulative income below") {
    IncomeHistogram h;
    h.bin_width = 1.0;
    h.densities = {0.5, 0.5};
    CHECK(cumulative_income_below(h, 1e12) == doctest::Approx(1.0));
    // Bin midpoints 0.5 and 1.5, equal counts: income below 1.0 is a quarter.
    CHECK(cumulative_income_below(h, 1.0) == doctest::Approx(0.25));
    CHECK(cumulative_income_below(h, 0.0) == 0.0);
}

TEST_CASE("cumulative curves are monotone in income") {
    ModelParams params;
    auto econ = fixtures::constant_econ(1890, 2000);
    auto pyr = fixtures::uniform_pyramid(1960, 15, 75);
    auto hist = build_pid(1960, pyr, econ, params);
    double prev_p = -1.0, prev_i = -1.0;
    for (double m = 0.0; m < 2.0; m += 0.013) {
        double cp = cumulative_people_below(hist, m);
        double ci = cumulative_income_below(hist, m);
        CHECK(cp >= prev_p - 1e-12); // non-decreasing up to interpolation rounding
        CHECK(ci >= prev_i - 1e-12);
        CHECK(cp >= 0.0);
        CHECK(cp <= 1.0);
        CHECK(ci >= 0.0);
        CHECK(ci <= 1.0);
        prev_p = cp;
        prev_i = ci;
    }
}

TEST_CASE("boost round trip through both build modes") {
    // With a high threshold the supercritical income share is small and the
    // share ratio recovers the configured boost factor.
    ModelParams boosted;
    boosted.pareto_threshold0 = 0.8;
    ModelParams plain = boosted;
    plain.boost_factor = 1.0;
    auto econ = fixtures::constant_econ(1880, 2000);
    auto pyr = fixtures::uniform_pyramid(1960, 15, 75);

    auto hb = build_pid(1960, pyr, econ, boosted, {});
    auto hp = build_pid(1960, pyr, econ, plain, {});
    double ratio = boost_ratio(income_curve(hb), income_curve(hp), 0.8);
    CHECK(ratio == doctest::Approx(1.35).epsilon(0.01 / 1.35));
}

TEST_CASE("threshold detection on a model-generated pair") {
    // Boosted observed curve against its un-boosted twin: the cumulative
    // people curves coincide below the Pareto threshold and diverge above.
    ModelParams params;
    params.pareto_threshold0 = kExactThreshold0;
    ModelParams plain = params;
    plain.boost_factor = 1.0;
    auto econ = fixtures::constant_econ(1880, 2000);
    auto pyr = fixtures::uniform_pyramid(1960, 15, 75);
    BuildOptions opts;
    opts.bin_width = kExactWidth;

    auto observed = build_pid(1960, pyr, econ, params, opts);
    auto theoretical = build_pid(1960, pyr, econ, plain, opts);
    std::size_t n = std::max(observed.densities.size(), theoretical.densities.size());
    observed.densities.resize(n, 0.0);
    theoretical.densities.resize(n, 0.0);

    auto div = detect_threshold(people_curve(observed), people_curve(theoretical), 1e-6);
    REQUIRE(div.has_value());
    CHECK(std::abs(*div - kExactThreshold0) <= kExactWidth + 1e-12); // within one bin
}
