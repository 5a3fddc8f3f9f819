#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "garmod/geometry.hpp"
#include "garmod/pattern.hpp"

namespace garmod {

// Available count of ℓ×ℓ foundation squares per side ℓ; nullopt means unbounded.
struct ModuleSupply {
    std::map<int, std::optional<int>> counts;

    static ModuleSupply unbounded(const std::vector<int>& sides);
    // Sides with a nonzero count, largest first.
    std::vector<int> sizes() const;
    bool bounded() const;
};

// Throws InvalidArgument.
void validate_supply(const ModuleSupply& supply);

struct Candidate {
    int panel = 0;
    int size = 1;
    Point origin;  // lower-left cell

    auto operator<=>(const Candidate&) const = default;
};

enum class ModuleRole { Foundation, Pleat, DartPair };
std::string_view to_string(ModuleRole role);
ModuleRole module_role_from_string(std::string_view s);

struct Placement {
    int panel = 0;
    int size = 1;  // side for squares, height in units for dart modules
    Point origin;
    ModuleRole role = ModuleRole::Foundation;
    Direction pleat_dir = Direction::Right;
    int dart_id = -1;
    int module_index = -1;

    bool operator==(const Placement&) const = default;
};

struct SolveStats {
    size_t cells = 0;
    size_t variables = 0;
    size_t components = 0;
    double runtime_ms = 0.0;
    double lp_bound = 0.0;
    int lower_bound = 0;
    long nodes = 0;
    bool optimal = true;
};

struct Assembly {
    std::vector<Placement> placements;
    int objective = 0;
    SolveStats stats;
    int revision = 0;

    // Foundation usage per side.
    std::map<int, int> usage() const;
};

struct SolveOptions {
    double time_budget_s = 60.0;
    int threads = 1;
};

// Exact-cover instance over indexed cells. Candidates list the cells they cover.
struct CoverProblem {
    int num_cells = 0;
    std::vector<std::vector<int>> candidate_cells;
    std::vector<int> candidate_size;
    std::map<int, int> limits;  // finite supply per side
};

struct CoverSolution {
    bool feasible = false;
    bool optimal = false;
    std::vector<int> chosen;  // candidate indices
    double lp_bound = 0.0;
    int lower_bound = 0;
    long nodes = 0;
};

class CoverBackend {
public:
    virtual ~CoverBackend() = default;
    virtual std::string name() const = 0;
    // Minimises the number of chosen candidates; sets optimal=false when the budget runs out.
    virtual CoverSolution solve(const CoverProblem& problem, double time_budget_s) const = 0;
};

// LP-bounded exact search: dense simplex relaxation, then depth-first exact cover restricted
// to covers whose reduced-cost total fits the current target, raising the target by one
// until a cover is found.
class ExactCoverBackend : public CoverBackend {
public:
    std::string name() const override { return "exact"; }
    CoverSolution solve(const CoverProblem& problem, double time_budget_s) const override;
};

// The problem in CPLEX LP text form, for external MILP solvers.
std::string to_lp_format(const CoverProblem& problem);

// Squares of available sizes inside the region, ordered by side descending then origin.
std::vector<Candidate> enumerate_candidates(const std::vector<Point>& region,
                                            const ModuleSupply& supply, int panel = 0);
// Region = the panel's Foundation cells.
std::vector<Candidate> enumerate_candidates(const Panel& panel, const ModuleSupply& supply);

struct Region {
    int panel = 0;
    std::vector<Point> cells;
};

struct RegionCover {
    std::vector<Candidate> chosen;
    SolveStats stats;
};

// Minimum cover of several regions sharing one supply. Throws Infeasible, or
// TimeBudgetExceeded when no cover was found in time.
RegionCover solve_regions(const std::vector<Region>& regions, const ModuleSupply& supply,
                          const SolveOptions& options = {}, const CoverBackend* backend = nullptr);

// Pleat and dart modules come from the feature log; foundation cells are covered optimally.
Assembly solve_cover(const Pattern& pattern, const ModuleSupply& supply,
                     const SolveOptions& options = {}, const CoverBackend* backend = nullptr);

// Independent test oracle: exhaustive memoised search. Returns -1 when no cover exists.
// Throws TooLarge above 36 cells.
int oracle_min_cover(const std::vector<Point>& cells, const ModuleSupply& supply);

// Cell-level accounting of an assembly against the pattern; empty when valid.
std::vector<std::string> assembly_violations(const Pattern& pattern, const Assembly& assembly,
                                             const ModuleSupply& supply);

}  // namespace garmod
