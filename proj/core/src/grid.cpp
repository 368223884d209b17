#include "pid/grid.hpp"

namespace pid {

std::vector<TrajectoryClass> grid(const ModelParams &params) {
    params.validate();
    std::vector<TrajectoryClass> classes;
    classes.reserve(static_cast<std::size_t>(params.class_count()));
    const double denom = static_cast<double>(params.grid_max);
    for (int s = params.grid_min; s <= params.grid_max; ++s) {
        for (int l = params.grid_min; l <= params.grid_max; ++l) {
            classes.push_back({static_cast<double>(s) / denom, static_cast<double>(l) / denom});
        }
    }
    return classes;
}

} // namespace pid
