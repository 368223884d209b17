#include "pid/params.hpp"

#include "pid/csv.hpp"
#include "pid/numeric.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace pid {

void ModelParams::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("params: alpha must be > 0");
    if (!(t_cr0 > 0.0)) throw std::invalid_argument("params: t_cr0 must be > 0");
    if (!(pareto_threshold0 > 0.0 && pareto_threshold0 < 1.0))
        throw std::invalid_argument("params: pareto_threshold0 must be in (0,1)");
    if (grid_min < 2) throw std::invalid_argument("params: grid_min must be >= 2");
    if (grid_max <= grid_min) throw std::invalid_argument("params: grid_max must be > grid_min");
    if (!(boost_factor >= 1.0)) throw std::invalid_argument("params: boost_factor must be >= 1");
    if (!(dollar_anchor > 0.0)) throw std::invalid_argument("params: dollar_anchor must be > 0");
}

std::uint64_t ModelParams::hash() const {
    std::ostringstream os;
    os << "start_year=" << start_year << ";alpha=" << csv::format_double(alpha)
       << ";t_cr0=" << csv::format_double(t_cr0)
       << ";pareto_threshold0=" << csv::format_double(pareto_threshold0)
       << ";grid_min=" << grid_min << ";grid_max=" << grid_max
       << ";boost_factor=" << csv::format_double(boost_factor)
       << ";dollar_anchor=" << csv::format_double(dollar_anchor);
    const std::string s = os.str();
    return fnv1a64(s.data(), s.size());
}

ModelParams load_params_json(const std::string &text, const std::string &source_name) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::runtime_error(source_name + ": " + e.what());
    }
    if (!j.is_object()) throw std::runtime_error(source_name + ": expected a JSON object");

    ModelParams p;
    auto get = [&](const char *key, auto &field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("start_year", p.start_year);
    get("alpha", p.alpha);
    get("t_cr0", p.t_cr0);
    get("pareto_threshold0", p.pareto_threshold0);
    get("grid_min", p.grid_min);
    get("grid_max", p.grid_max);
    get("boost_factor", p.boost_factor);
    get("dollar_anchor", p.dollar_anchor);

    static const char *known[] = {"start_year", "alpha",       "t_cr0",        "pareto_threshold0",
                                  "grid_min",   "grid_max",    "boost_factor", "dollar_anchor"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char *k : known) ok = ok || it.key() == k;
        if (!ok) throw std::runtime_error(source_name + ": unknown field '" + it.key() + "'");
    }
    p.validate();
    return p;
}

ModelParams load_params_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_params_json(ss.str(), path);
}

std::string params_to_json(const ModelParams &p) {
    nlohmann::json j;
    j["start_year"] = p.start_year;
    j["alpha"] = p.alpha;
    j["t_cr0"] = p.t_cr0;
    j["pareto_threshold0"] = p.pareto_threshold0;
    j["grid_min"] = p.grid_min;
    j["grid_max"] = p.grid_max;
    j["boost_factor"] = p.boost_factor;
    j["dollar_anchor"] = p.dollar_anchor;
    return j.dump(2);
}

} // namespace pid
