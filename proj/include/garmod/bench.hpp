#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "garmod/decomposer.hpp"

namespace garmod {

// n x n board with round(removal * n^2) cells removed uniformly at random.
std::vector<Point> random_board(int n, double removal, uint32_t seed);

struct BenchRow {
    int size = 0;
    double removal = 0.0;
    uint32_t seed = 0;
    size_t cells = 0;
    size_t variables = 0;
    size_t components = 0;
    int modules = 0;
    double lp_bound = 0.0;
    double runtime_ms = 0.0;
    bool optimal = false;
};

BenchRow bench_board(int n, double removal, uint32_t seed, const ModuleSupply& supply, const SolveOptions& options);
// Every combination of size, removal fraction and seed 0..seeds-1.
std::vector<BenchRow> run_bench(const std::vector<int>& sizes, const std::vector<double>& removals, int seeds,
                                const ModuleSupply& supply, const SolveOptions& options);

struct ScalingRow {
    int panels = 0;
    size_t cells = 0;
    size_t variables = 0;
    double runtime_ms = 0.0;
};
// K disjoint side x side panels solved as one instance.
ScalingRow bench_panels(int panels, int side, const ModuleSupply& supply, const SolveOptions& options);

// Coefficient of determination of the least-squares line through the points.
double linear_r2(const std::vector<double>& xs, const std::vector<double>& ys);
double median(std::vector<double> v);

nlohmann::json bench_json(const std::vector<BenchRow>& rows);
// Per size and removal: median runtime, median modules, variables.
std::string bench_table(const std::vector<BenchRow>& rows);
// Median runtime against board size, one polyline per removal fraction, log-scaled runtime.
std::string bench_svg(const std::vector<BenchRow>& rows);

}  // namespace garmod
