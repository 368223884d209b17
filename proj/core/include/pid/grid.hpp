#pragma once

#include "pid/params.hpp"

#include <vector>

namespace pid {

// One (capability, means) class of the capacity grid. Values are the
// relative S' = S/grid_max and L' = L/grid_max; with the default 2..30 grid
// there are 29x29 = 841 classes of capacity S'L' between 4/900 and 1.
struct TrajectoryClass {
    double s_rel = 0.0;
    double l_rel = 0.0;

    double capacity() const { return s_rel * l_rel; }
};

// All classes in lexicographic (S index, L index) order, each carrying
// equal population weight 1/class_count within a cohort. Deterministic and
// order-stable across runs.
std::vector<TrajectoryClass> grid(const ModelParams &params);

} // namespace pid
