#include "pid/aggregate.hpp"
#include "pid/calibrate.hpp"
#include "pid/csv.hpp"
#include "pid/economy.hpp"
#include "pid/io.hpp"
#include "pid/params.hpp"
#include "pid/pareto_tail.hpp"
#include "pid/population.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonConfig {
    std::string params_path;
    std::string pyramid_path;
    std::string economy_path;
    std::string out_dir = ".";
    std::string years_spec;
    std::string mode = "det";
    std::uint64_t seed = 0;
    bool seed_set = false;
    double bin_width = 0.01;
    bool dollars = false;
    unsigned threads = 1;
    // Census-style counting: thresholds snap down to a multiple of the
    // bracket width in current dollars, so everyone in the bracket
    // containing the threshold is counted.
    bool bracket_counting = false;
    double bracket_width = 2500.0;
};

std::vector<int> parse_years(const std::string &spec) {
    auto colon = spec.find(':');
    auto parse_one = [&](const std::string &s) {
        size_t pos = 0;
        int y = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("--years: bad year '" + s + "'");
        return y;
    };
    if (colon == std::string::npos) return {parse_one(spec)};
    int lo = parse_one(spec.substr(0, colon));
    int hi = parse_one(spec.substr(colon + 1));
    if (hi < lo) throw std::invalid_argument("--years: range end before start");
    std::vector<int> years;
    for (int y = lo; y <= hi; ++y) years.push_back(y);
    return years;
}

pid::ModelParams load_params(const CommonConfig &cfg) {
    if (cfg.params_path.empty()) return {};
    return pid::load_params_file(cfg.params_path);
}

pid::BuildOptions build_options(const CommonConfig &cfg, const pid::ModelParams &params) {
    pid::BuildOptions opts;
    if (cfg.mode == "det") {
        opts.mode = pid::SimulationMode::deterministic;
    } else if (cfg.mode == "stoch") {
        if (!cfg.seed_set) throw std::invalid_argument("--seed is required with --mode stoch");
        opts.mode = pid::SimulationMode::stochastic;
    } else {
        throw std::invalid_argument("--mode must be det or stoch");
    }
    opts.seed = cfg.seed;
    opts.bin_width = cfg.bin_width;
    opts.dollars = cfg.dollars;
    opts.threads = cfg.threads;
    opts.tail.boost_factor = params.boost_factor;
    return opts;
}

void write_json_file(const fs::path &path, const json &j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << j.dump(2) << '\n';
}

json sidecar_base(const std::string &command, const pid::ModelParams &params,
                  const CommonConfig &cfg) {
    json j;
    j["command"] = command;
    j["params_hash"] = pid::io::params_hash_hex(params);
    j["mode"] = cfg.mode;
    if (cfg.seed_set) j["seed"] = cfg.seed;
    return j;
}

int cmd_simulate(const CommonConfig &cfg, std::optional<int> adjust_to) {
    auto params = load_params(cfg);
    auto pyramid = pid::load_pyramid_csv(cfg.pyramid_path);
    auto econ = pid::load_economy_csv(cfg.economy_path);
    auto opts = build_options(cfg, params);
    if (adjust_to && !cfg.dollars)
        throw std::invalid_argument("--adjust-to requires --dollars (nominal adjustment acts on dollar bins)");
    fs::create_directories(cfg.out_dir);

    pid::CohortEngine engine(params, econ, opts.integration_step);
    for (int year : parse_years(cfg.years_spec)) {
        auto hist = pid::build_pid(engine, year, pyramid, opts);
        fs::path base = fs::path(cfg.out_dir) / ("pid_" + std::to_string(year));
        pid::io::write_histogram_csv(base.string() + ".csv", hist);

        json j = sidecar_base("simulate", params, cfg);
        j["year"] = year;
        j["threshold"] = params.pareto_threshold0 * econ.real_factor(year, params.start_year);
        j["bin_width"] = hist.bin_width;
        j["boosted"] = hist.boosted;
        j["dollars"] = hist.dollars;
        write_json_file(base.string() + ".json", j);

        if (adjust_to) {
            auto adjusted = pid::normalize_adjust(hist, econ, *adjust_to);
            pid::io::write_histogram_csv(base.string() + "_adjusted.csv", adjusted);
            json ja = j;
            ja["adjusted_to"] = *adjust_to;
            write_json_file(base.string() + "_adjusted.json", ja);
        }
    }
    return 0;
}

int cmd_profile(const CommonConfig &cfg, const std::string &threshold_spec,
                std::optional<int> normalize_peak_year) {
    auto params = load_params(cfg);
    auto pyramid = pid::load_pyramid_csv(cfg.pyramid_path);
    auto econ = pid::load_economy_csv(cfg.economy_path);
    auto opts = build_options(cfg, params);
    fs::create_directories(cfg.out_dir);

    pid::CohortEngine engine(params, econ, opts.integration_step);
    auto resolve_threshold = [&](int year) {
        double dimensionless;
        if (threshold_spec == "pareto") {
            dimensionless = params.pareto_threshold0 * econ.real_factor(year, params.start_year);
        } else {
            double dollars = std::stod(threshold_spec);
            if (dollars < 0.0) throw std::invalid_argument("--threshold: negative dollar amount");
            dimensionless = pid::from_dollars(dollars, year, econ, params);
        }
        if (cfg.bracket_counting) {
            double dollars = pid::to_dollars(dimensionless, year, econ, params);
            double snapped = std::floor(dollars / cfg.bracket_width) * cfg.bracket_width;
            dimensionless = pid::from_dollars(snapped, year, econ, params);
        }
        return dimensionless;
    };

    std::optional<pid::WorkExperienceProfile> reference;
    if (normalize_peak_year) {
        reference = pid::above_threshold_profile(engine, *normalize_peak_year,
                                                 resolve_threshold(*normalize_peak_year), pyramid, opts);
    }

    for (int year : parse_years(cfg.years_spec)) {
        double threshold = resolve_threshold(year);
        auto profile = pid::above_threshold_profile(engine, year, threshold, pyramid, opts);
        if (reference) profile = pid::normalize_to_peak(profile, *reference);
        fs::path base = fs::path(cfg.out_dir) / ("profile_" + std::to_string(year));
        pid::io::write_profile_csv(base.string() + ".csv", profile);

        json j = sidecar_base("profile", params, cfg);
        j["year"] = year;
        j["threshold"] = threshold;
        j["threshold_spec"] = threshold_spec;
        if (cfg.bracket_counting) j["bracket_width"] = cfg.bracket_width;
        if (normalize_peak_year) j["normalized_to_peak_of"] = *normalize_peak_year;
        write_json_file(base.string() + ".json", j);
    }
    return 0;
}

int cmd_forecast(const CommonConfig &cfg, const std::string &projection_path, double growth) {
    auto params = load_params(cfg);
    if (projection_path.empty()) throw std::invalid_argument("--projection is required for forecast");
    auto projection = pid::load_pyramid_csv(projection_path);
    auto econ = pid::load_economy_csv(cfg.economy_path);
    auto opts = build_options(cfg, params);
    fs::create_directories(cfg.out_dir);

    auto years = parse_years(cfg.years_spec);
    auto profiles = pid::forecast(projection, econ, growth, years, params, opts);
    for (std::size_t i = 0; i < years.size(); ++i) {
        fs::path base = fs::path(cfg.out_dir) / ("forecast_" + std::to_string(years[i]));
        pid::io::write_profile_csv(base.string() + ".csv", profiles[i]);

        json j = sidecar_base("forecast", params, cfg);
        j["year"] = years[i];
        j["threshold"] = profiles[i].threshold;
        j["growth"] = growth;
        write_json_file(base.string() + ".json", j);
    }
    return 0;
}

int cmd_calibrate(const CommonConfig &cfg, const std::string &observed_path, int year,
                  double alpha_min, double alpha_max, std::optional<double> target_share) {
    auto params = load_params(cfg);
    auto pyramid = pid::load_pyramid_csv(cfg.pyramid_path);
    auto econ = pid::load_economy_csv(cfg.economy_path);
    auto opts = build_options(cfg, params);
    fs::create_directories(cfg.out_dir);

    auto observed = pid::io::read_histogram_csv(observed_path);
    observed.year = year;
    auto result = pid::calibrate_alpha(observed, pyramid, econ, params, {alpha_min, alpha_max}, opts);

    json j = sidecar_base("calibrate", params, cfg);
    j["year"] = year;
    j["alpha_hat"] = result.alpha_hat;
    j["loss"] = result.loss;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    if (target_share) {
        pid::ModelParams refined = params;
        refined.alpha = result.alpha_hat;
        auto thr = pid::calibrate_threshold(*target_share, year, pyramid, econ, refined, opts);
        j["pareto_threshold0_hat"] = thr.pareto_threshold0_hat;
        j["threshold_share_error"] = thr.loss;
    }
    write_json_file(fs::path(cfg.out_dir) / "calibration.json", j);
    return 0;
}

int cmd_fit_tail(const CommonConfig &cfg, const std::string &input_path, double threshold) {
    auto params = load_params(cfg);
    fs::create_directories(cfg.out_dir);

    // Histogram or sample file, told apart by the header.
    std::ifstream probe(input_path);
    if (!probe) throw std::runtime_error(input_path + ": cannot open");
    std::string header;
    std::getline(probe, header);
    probe.close();

    pid::ExponentFit fit;
    if (header.rfind("bin_low", 0) == 0) {
        fit = pid::fit_exponent(pid::io::read_histogram_csv(input_path), threshold);
    } else {
        fit = pid::fit_exponent(pid::io::read_sample_csv(input_path), threshold);
    }

    json j = sidecar_base("fit-tail", params, cfg);
    j["threshold"] = threshold;
    j["exponent_regression"] = fit.regression;
    j["exponent_mle"] = fit.mle;
    j["n_tail"] = fit.n_tail;
    write_json_file(fs::path(cfg.out_dir) / "tail_fit.json", j);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Personal income distribution microsimulation"};
    app.require_subcommand(1);

    CommonConfig cfg;
    std::string threshold_spec = "pareto";
    std::string projection_path;
    std::string observed_path;
    std::string input_path;
    double growth = 0.016;
    double alpha_min = 0.04, alpha_max = 0.12;
    double tail_threshold = 1.0;
    int calibrate_year = 0;
    std::optional<int> normalize_peak_year;
    std::optional<double> target_share;

    auto add_common = [&](CLI::App *sub, bool needs_pyramid) {
        sub->add_option("--params", cfg.params_path, "Model params JSON (defaults when omitted)");
        if (needs_pyramid) sub->add_option("--pyramid", cfg.pyramid_path, "Population CSV year,age,count")->required();
        sub->add_option("--economy", cfg.economy_path, "Economy CSV year,real_gdp_index,nominal_gdp_index")
            ->required();
        sub->add_option("--out", cfg.out_dir, "Output directory");
        sub->add_option("--mode", cfg.mode, "det or stoch");
        sub->add_option("--seed", cfg.seed, "RNG seed (required for stoch)")->each([&](const std::string &) {
            cfg.seed_set = true;
        });
        sub->add_option("--bin-width", cfg.bin_width, "Histogram bin width");
        sub->add_flag("--dollars", cfg.dollars, "Bin incomes in current dollars");
        sub->add_option("--threads", cfg.threads, "Worker threads for aggregation");
    };

    std::optional<int> adjust_to;

    auto *simulate = app.add_subcommand("simulate", "Income histograms per calendar year");
    add_common(simulate, true);
    simulate->add_option("--years", cfg.years_spec, "Year or range y1:y2")->required();
    simulate->add_option("--adjust-to", adjust_to,
                         "Also write histograms adjusted for nominal growth to this base year");

    auto *profile = app.add_subcommand("profile", "Above-threshold counts by work experience");
    add_common(profile, true);
    profile->add_option("--years", cfg.years_spec, "Year or range y1:y2")->required();
    profile->add_option("--threshold", threshold_spec, "'pareto' or a current-dollar amount");
    profile->add_option("--normalize-peak", normalize_peak_year,
                        "Normalize every profile to the peak of this year's profile");
    profile->add_flag("--bracket-counting", cfg.bracket_counting,
                      "Snap thresholds down to the bracket containing them (Census-style)");
    profile->add_option("--bracket-width", cfg.bracket_width,
                        "Bracket width in current dollars for --bracket-counting");

    auto *fore = app.add_subcommand("forecast", "Normalized profiles under projected population and GDP growth");
    add_common(fore, false);
    fore->add_option("--projection", projection_path, "Projection pyramid CSV")->required();
    fore->add_option("--years", cfg.years_spec, "Year or range y1:y2")->required();
    fore->add_option("--growth", growth, "Annual real per-capita GDP growth rate");

    auto *cal = app.add_subcommand("calibrate", "Recover alpha (and optionally the threshold) from an observed PID");
    add_common(cal, true);
    cal->add_option("--observed", observed_path, "Observed histogram CSV bin_low,bin_high,density")->required();
    cal->add_option("--year", calibrate_year, "Calendar year of the observed histogram")->required();
    cal->add_option("--alpha-min", alpha_min, "Search interval lower edge");
    cal->add_option("--alpha-max", alpha_max, "Search interval upper edge");
    cal->add_option("--target-share", target_share, "Also recover threshold0 for this supercritical share");

    auto *tail = app.add_subcommand("fit-tail", "Power-law exponent of a tail sample or histogram");
    tail->add_option("--params", cfg.params_path, "Model params JSON");
    tail->add_option("--input", input_path, "Histogram CSV or sample CSV with header 'income'")->required();
    tail->add_option("--threshold", tail_threshold, "Tail threshold (same units as the input)")->required();
    tail->add_option("--out", cfg.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(cfg, adjust_to);
        if (profile->parsed()) return cmd_profile(cfg, threshold_spec, normalize_peak_year);
        if (fore->parsed()) return cmd_forecast(cfg, projection_path, growth);
        if (cal->parsed()) return cmd_calibrate(cfg, observed_path, calibrate_year, alpha_min, alpha_max, target_share);
        if (tail->parsed()) return cmd_fit_tail(cfg, input_path, tail_threshold);
    } catch (const std::invalid_argument &e) {
        std::cerr << "pidsim: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error &e) {
        std::cerr << "pidsim: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range &e) {
        std::cerr << "pidsim: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error &e) {
        std::cerr << "pidsim: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "pidsim: internal error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
