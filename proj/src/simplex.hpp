#pragma once

#include <chrono>
#include <vector>

namespace garmod::detail {

// LP relaxation of a set-partitioning cover:
//   min sum x_j  s.t.  each cell covered exactly once,  per-size usage <= limit,  x >= 0.
struct CoverLp {
    int num_cells = 0;
    std::vector<std::vector<int>> columns;  // cells covered by each candidate
    std::vector<int> column_group;          // index into limits, or -1 when unlimited
    std::vector<double> limits;
};

struct LpResult {
    bool feasible = false;
    double value = 0.0;
    std::vector<double> reduced_costs;  // per candidate, clamped to >= 0
    long pivots = 0;
    // Stopped at the deadline: `value` is still a valid lower bound but feasibility is unknown.
    bool timed_out = false;
};

LpResult solve_cover_lp(const CoverLp& lp,
                        std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max());

}  // namespace garmod::detail
