#include "garmod/decomposer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <atomic>
#include <thread>

#include "garmod/error.hpp"
#include "simplex.hpp"

namespace garmod {

ModuleSupply ModuleSupply::unbounded(const std::vector<int>& sides) {
    ModuleSupply s;
    for (int l : sides) s.counts[l] = std::nullopt;
    return s;
}

std::vector<int> ModuleSupply::sizes() const {
    std::vector<int> out;
    for (const auto& [l, n] : counts) {
        if (!n || *n > 0) out.push_back(l);
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

bool ModuleSupply::bounded() const {
    for (const auto& [l, n] : counts) {
        if (n) return true;
    }
    return false;
}

void validate_supply(const ModuleSupply& supply) {
    for (const auto& [l, n] : supply.counts) {
        if (l < 1) throw Error(ErrorCode::InvalidArgument, "module side must be >= 1");
        if (n && *n < 0) throw Error(ErrorCode::InvalidArgument, "module count must be >= 0");
    }
    if (supply.sizes().empty()) {
        throw Error(ErrorCode::InvalidArgument, "supply has no available module");
    }
}

std::string_view to_string(ModuleRole role) {
    switch (role) {
    case ModuleRole::Foundation: return "foundation";
    case ModuleRole::Pleat: return "pleat";
    case ModuleRole::DartPair: return "dart_pair";
    }
    return "?";
}

ModuleRole module_role_from_string(std::string_view s) {
    for (ModuleRole r : {ModuleRole::Foundation, ModuleRole::Pleat, ModuleRole::DartPair}) {
        if (to_string(r) == s) return r;
    }
    throw Error(ErrorCode::ParseError, "unknown module role '" + std::string(s) + "'");
}

std::map<int, int> Assembly::usage() const {
    std::map<int, int> out;
    for (const Placement& p : placements) {
        if (p.role == ModuleRole::Foundation) ++out[p.size];
    }
    return out;
}

// ---- candidates ----

std::vector<Candidate> enumerate_candidates(const std::vector<Point>& region,
                                            const ModuleSupply& supply, int panel) {
    std::set<Point> cells(region.begin(), region.end());
    std::vector<Candidate> out;
    for (int l : supply.sizes()) {
        for (const Point& o : cells) {
            bool fits = true;
            for (int dx = 0; dx < l && fits; ++dx) {
                for (int dy = 0; dy < l && fits; ++dy) {
                    fits = cells.count({o.x + dx, o.y + dy}) > 0;
                }
            }
            if (fits) out.push_back({panel, l, o});
        }
    }
    return out;
}

std::vector<Candidate> enumerate_candidates(const Panel& panel, const ModuleSupply& supply) {
    std::vector<Point> region;
    for (const Cell& c : panel.cells) {
        if (c.kind == CellKind::Foundation) region.push_back(c.pos);
    }
    return enumerate_candidates(region, supply, panel.id);
}

// ---- LP text export ----

std::string to_lp_format(const CoverProblem& problem) {
    std::ostringstream os;
    os << "Minimize\n obj:";
    for (size_t j = 0; j < problem.candidate_cells.size(); ++j) os << " + x" << j;
    os << "\nSubject To\n";
    std::vector<std::vector<size_t>> by_cell(static_cast<size_t>(problem.num_cells));
    for (size_t j = 0; j < problem.candidate_cells.size(); ++j) {
        for (int c : problem.candidate_cells[j]) by_cell[static_cast<size_t>(c)].push_back(j);
    }
    for (size_t c = 0; c < by_cell.size(); ++c) {
        os << " cell" << c << ":";
        for (size_t j : by_cell[c]) os << " + x" << j;
        os << " = 1\n";
    }
    for (const auto& [l, n] : problem.limits) {
        os << " supply" << l << ":";
        for (size_t j = 0; j < problem.candidate_size.size(); ++j) {
            if (problem.candidate_size[j] == l) os << " + x" << j;
        }
        os << " <= " << n << "\n";
    }
    os << "Binary\n";
    for (size_t j = 0; j < problem.candidate_cells.size(); ++j) os << " x" << j << "\n";
    os << "End\n";
    return os.str();
}

// ---- exact backend ----

namespace {

using Clock = std::chrono::steady_clock;

class Search {
public:
    Search(const CoverProblem& pb, const std::vector<double>& rc, Clock::time_point deadline)
        : pb_(pb), rc_(rc), deadline_(deadline) {
        size_t nc = static_cast<size_t>(pb.num_cells);
        cell_cands_.resize(nc);
        for (size_t j = 0; j < pb.candidate_cells.size(); ++j) {
            for (int c : pb.candidate_cells[j]) cell_cands_[static_cast<size_t>(c)].push_back(static_cast<int>(j));
        }
        for (auto& v : cell_cands_) {
            std::sort(v.begin(), v.end(), [&](int a, int b) {
                double ra = rc_[static_cast<size_t>(a)], rb = rc_[static_cast<size_t>(b)];
                if (std::fabs(ra - rb) > 1e-12) return ra < rb;
                int sa = pb_.candidate_size[static_cast<size_t>(a)];
                int sb = pb_.candidate_size[static_cast<size_t>(b)];
                if (sa != sb) return sa > sb;
                return a < b;
            });
        }
        for (const auto& [l, n] : pb.limits) remaining_[l] = n;
    }

    // Exhaustive search for a cover whose reduced-cost total is at most `budget`.
    // Returns 1 found, 0 proven none, -1 timed out.
    int run(double budget, int max_count) {
        max_count_ = max_count;
        covered_.assign(static_cast<size_t>(pb_.num_cells), 0);
        blocked_.assign(pb_.candidate_cells.size(), 0);
        chosen_.clear();
        uncovered_ = pb_.num_cells;
        timed_out_ = false;
        bool ok = dfs(budget + 1e-7);
        if (timed_out_) return -1;
        return ok ? 1 : 0;
    }

    const std::vector<int>& chosen() const { return chosen_; }
    long nodes() const { return nodes_; }

private:
    bool usable(int j, double budget) const {
        if (blocked_[static_cast<size_t>(j)] != 0) return false;
        if (rc_[static_cast<size_t>(j)] > budget) return false;
        auto it = remaining_.find(pb_.candidate_size[static_cast<size_t>(j)]);
        return it == remaining_.end() || it->second > 0;
    }

    void apply(int j, int delta) {
        for (int c : pb_.candidate_cells[static_cast<size_t>(j)]) {
            covered_[static_cast<size_t>(c)] = delta > 0;
            for (int k : cell_cands_[static_cast<size_t>(c)]) blocked_[static_cast<size_t>(k)] += delta;
        }
        uncovered_ -= delta * static_cast<int>(pb_.candidate_cells[static_cast<size_t>(j)].size());
        auto it = remaining_.find(pb_.candidate_size[static_cast<size_t>(j)]);
        if (it != remaining_.end()) it->second -= delta;
    }

    bool dfs(double budget) {
        if (uncovered_ == 0) return true;
        if (static_cast<int>(chosen_.size()) >= max_count_) return false;
        if ((++nodes_ & 255) == 0 && Clock::now() > deadline_) timed_out_ = true;
        if (timed_out_) return false;
        int best_cell = -1, best_count = 1 << 30;
        for (int c = 0; c < pb_.num_cells && best_count > 1; ++c) {
            if (covered_[static_cast<size_t>(c)]) continue;
            int count = 0;
            for (int j : cell_cands_[static_cast<size_t>(c)]) {
                if (usable(j, budget) && ++count >= best_count) break;
            }
            if (count == 0) return false;
            if (count < best_count) {
                best_count = count;
                best_cell = c;
            }
        }
        for (int j : cell_cands_[static_cast<size_t>(best_cell)]) {
            if (!usable(j, budget)) continue;
            apply(j, +1);
            chosen_.push_back(j);
            if (dfs(budget - rc_[static_cast<size_t>(j)])) return true;
            chosen_.pop_back();
            apply(j, -1);
            if (timed_out_) return false;
        }
        return false;
    }

    const CoverProblem& pb_;
    const std::vector<double>& rc_;
    Clock::time_point deadline_;
    std::vector<std::vector<int>> cell_cands_;
    std::vector<char> covered_;
    std::vector<int> blocked_;
    std::map<int, int> remaining_;
    std::vector<int> chosen_;
    int uncovered_ = 0;
    int max_count_ = 0;
    long nodes_ = 0;
    bool timed_out_ = false;
};

// Largest-first fill from the lowest uncovered cell; the first uncovered cell in row-major
// order can only be covered by a square anchored at it.
std::vector<int> greedy_cover(const CoverProblem& pb, const std::vector<Point>& cell_pos) {
    std::map<Point, int> index;
    for (size_t i = 0; i < cell_pos.size(); ++i) index[cell_pos[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> anchored(static_cast<size_t>(pb.num_cells));
    for (size_t j = 0; j < pb.candidate_cells.size(); ++j) {
        int lowest = *std::min_element(pb.candidate_cells[j].begin(), pb.candidate_cells[j].end(),
                                       [&](int a, int b) {
                                           const Point& pa = cell_pos[static_cast<size_t>(a)];
                                           const Point& pb2 = cell_pos[static_cast<size_t>(b)];
                                           return pa.y != pb2.y ? pa.y < pb2.y : pa.x < pb2.x;
                                       });
        anchored[static_cast<size_t>(lowest)].push_back(static_cast<int>(j));
    }
    std::vector<int> order(static_cast<size_t>(pb.num_cells));
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Point& pa = cell_pos[static_cast<size_t>(a)];
        const Point& pb2 = cell_pos[static_cast<size_t>(b)];
        return pa.y != pb2.y ? pa.y < pb2.y : pa.x < pb2.x;
    });
    std::vector<char> covered(static_cast<size_t>(pb.num_cells), 0);
    std::map<int, int> remaining = pb.limits;
    std::vector<int> chosen;
    for (int c : order) {
        if (covered[static_cast<size_t>(c)]) continue;
        int pick = -1;
        for (int j : anchored[static_cast<size_t>(c)]) {
            int l = pb.candidate_size[static_cast<size_t>(j)];
            auto it = remaining.find(l);
            if (it != remaining.end() && it->second <= 0) continue;
            bool free = true;
            for (int k : pb.candidate_cells[static_cast<size_t>(j)]) free &= !covered[static_cast<size_t>(k)];
            if (!free) continue;
            if (pick < 0 || l > pb.candidate_size[static_cast<size_t>(pick)]) pick = j;
        }
        if (pick < 0) return {};
        for (int k : pb.candidate_cells[static_cast<size_t>(pick)]) covered[static_cast<size_t>(k)] = 1;
        auto it = remaining.find(pb.candidate_size[static_cast<size_t>(pick)]);
        if (it != remaining.end()) --it->second;
        chosen.push_back(pick);
    }
    return chosen;
}

thread_local const std::vector<Point>* t_cell_positions = nullptr;

}  // namespace

CoverSolution ExactCoverBackend::solve(const CoverProblem& pb, double time_budget_s) const {
    auto deadline = Clock::now() + std::chrono::microseconds(static_cast<long long>(time_budget_s * 1e6));
    CoverSolution sol;
    if (pb.num_cells == 0) {
        sol.feasible = sol.optimal = true;
        return sol;
    }
    detail::CoverLp lp;
    lp.num_cells = pb.num_cells;
    lp.columns = pb.candidate_cells;
    std::map<int, int> group;
    for (const auto& [l, n] : pb.limits) {
        group[l] = static_cast<int>(lp.limits.size());
        lp.limits.push_back(static_cast<double>(n));
    }
    for (int l : pb.candidate_size) {
        auto it = group.find(l);
        lp.column_group.push_back(it == group.end() ? -1 : it->second);
    }
    detail::LpResult lpr = detail::solve_cover_lp(lp, deadline);
    std::vector<int> incumbent;
    if (t_cell_positions) incumbent = greedy_cover(pb, *t_cell_positions);
    if (lpr.timed_out) {
        sol.lp_bound = lpr.value;
        sol.lower_bound = std::max(1, static_cast<int>(std::ceil(lpr.value - 1e-6)));
        sol.optimal = false;
        sol.feasible = !incumbent.empty();
        sol.chosen = incumbent;
        return sol;
    }
    if (!lpr.feasible) {
        sol.feasible = false;
        sol.optimal = true;
        return sol;
    }
    sol.lp_bound = lpr.value;
    int target = std::max(1, static_cast<int>(std::ceil(lpr.value - 1e-6)));

    int upper = incumbent.empty() ? pb.num_cells + 1 : static_cast<int>(incumbent.size());

    Search search(pb, lpr.reduced_costs, deadline);
    for (; target < upper; ++target) {
        int r = search.run(static_cast<double>(target) - lpr.value, target);
        if (r == 1) {
            sol.feasible = sol.optimal = true;
            sol.chosen = search.chosen();
            sol.lower_bound = static_cast<int>(sol.chosen.size());
            sol.nodes = search.nodes();
            return sol;
        }
        if (r == -1) {
            sol.nodes = search.nodes();
            sol.lower_bound = target;
            sol.optimal = false;
            sol.feasible = !incumbent.empty();
            sol.chosen = incumbent;
            return sol;
        }
    }
    sol.nodes = search.nodes();
    if (incumbent.empty()) {
        sol.feasible = false;
        sol.optimal = true;
        return sol;
    }
    sol.feasible = sol.optimal = true;
    sol.chosen = incumbent;
    sol.lower_bound = upper;
    return sol;
}

// ---- region solving ----

namespace {

struct BuiltProblem {
    CoverProblem problem;
    std::vector<Candidate> candidates;
    std::vector<Point> cell_pos;
};

BuiltProblem build_problem(const std::vector<Region>& regions, const ModuleSupply& supply) {
    BuiltProblem b;
    std::map<std::pair<int, Point>, int> index;
    for (const Region& r : regions) {
        for (const Point& c : r.cells) {
            index[{r.panel, c}] = static_cast<int>(b.cell_pos.size());
            b.cell_pos.push_back(c);
        }
    }
    b.problem.num_cells = static_cast<int>(b.cell_pos.size());
    for (const Region& r : regions) {
        for (const Candidate& cand : enumerate_candidates(r.cells, supply, r.panel)) {
            std::vector<int> cells;
            for (int dx = 0; dx < cand.size; ++dx)
                for (int dy = 0; dy < cand.size; ++dy)
                    cells.push_back(index.at({r.panel, {cand.origin.x + dx, cand.origin.y + dy}}));
            b.problem.candidate_cells.push_back(std::move(cells));
            b.problem.candidate_size.push_back(cand.size);
            b.candidates.push_back(cand);
        }
    }
    for (const auto& [l, n] : supply.counts) {
        if (n) b.problem.limits[l] = *n;
    }
    return b;
}

struct PartResult {
    std::vector<Candidate> chosen;
    CoverSolution sol;
    size_t variables = 0;
};

PartResult solve_part(const std::vector<Region>& regions, const ModuleSupply& supply,
                      double budget_s, const CoverBackend& backend) {
    BuiltProblem b = build_problem(regions, supply);
    t_cell_positions = &b.cell_pos;
    PartResult out;
    out.sol = backend.solve(b.problem, budget_s);
    t_cell_positions = nullptr;
    out.variables = b.candidates.size();
    for (int j : out.sol.chosen) out.chosen.push_back(b.candidates[static_cast<size_t>(j)]);
    std::sort(out.chosen.begin(), out.chosen.end(), [](const Candidate& a, const Candidate& c) {
        if (a.panel != c.panel) return a.panel < c.panel;
        if (a.size != c.size) return a.size > c.size;
        return a.origin < c.origin;
    });
    return out;
}

// Fixes squares that are the only candidate for some cell, repeatedly, and removes their
// cells. Throws Infeasible when a cell has no candidate left.
std::vector<Candidate> presolve_forced(std::set<Point>& cells, int panel, ModuleSupply& supply) {
    std::vector<Candidate> forced;
    auto fits = [&](Point o, int l) {
        for (int dx = 0; dx < l; ++dx)
            for (int dy = 0; dy < l; ++dy)
                if (!cells.count({o.x + dx, o.y + dy})) return false;
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> sizes = supply.sizes();
        for (auto it = cells.begin(); it != cells.end();) {
            Point p = *it;
            int count = 0;
            Candidate only{panel, 0, {}};
            for (int l : sizes) {
                for (int dx = 0; dx < l && count < 2; ++dx) {
                    for (int dy = 0; dy < l && count < 2; ++dy) {
                        Point o{p.x - dx, p.y - dy};
                        if (fits(o, l)) {
                            ++count;
                            only = {panel, l, o};
                        }
                    }
                }
            }
            if (count == 0) throw Error(ErrorCode::Infeasible, "supply cannot cover the pattern");
            if (count > 1) {
                ++it;
                continue;
            }
            auto& n = supply.counts[only.size];
            if (n) --*n;
            forced.push_back(only);
            for (int dx = 0; dx < only.size; ++dx)
                for (int dy = 0; dy < only.size; ++dy) cells.erase({only.origin.x + dx, only.origin.y + dy});
            it = cells.upper_bound(p);
            changed = true;
            if (n && *n == 0) break;
        }
    }
    return forced;
}

}  // namespace

RegionCover solve_regions(const std::vector<Region>& regions, const ModuleSupply& supply,
                          const SolveOptions& options, const CoverBackend* backend) {
    validate_supply(supply);
    ExactCoverBackend fallback;
    const CoverBackend& be = backend ? *backend : fallback;
    auto start = Clock::now();

    std::vector<std::vector<Region>> parts;
    std::vector<Candidate> forced;
    ModuleSupply remaining = supply;
    size_t total_cells = 0;
    for (const Region& r : regions) {
        total_cells += r.cells.size();
        std::set<Point> cells(r.cells.begin(), r.cells.end());
        auto f = presolve_forced(cells, r.panel, remaining);
        forced.insert(forced.end(), f.begin(), f.end());
        std::vector<Point> rest(cells.begin(), cells.end());
        for (auto& comp : connected_components(rest)) parts.push_back({Region{r.panel, comp}});
    }
    for (const auto& [l, n] : remaining.counts) {
        if (n && *n < 0) throw Error(ErrorCode::Infeasible, "supply cannot cover the pattern");
    }
    bool any_left = false;
    for (const auto& [l, n] : remaining.counts) any_left |= !n || *n > 0;
    if (!any_left) {
        // Supply exhausted by forced squares: nothing else may remain.
        if (!parts.empty()) throw Error(ErrorCode::Infeasible, "supply cannot cover the pattern");
    }

    auto left = [&] {
        return std::max(0.0, options.time_budget_s - std::chrono::duration<double>(Clock::now() - start).count());
    };
    std::vector<PartResult> results(parts.size());
    int threads = std::max(1, options.threads);
    if (threads == 1 || parts.size() <= 1) {
        for (size_t i = 0; i < parts.size(); ++i) {
            results[i] = solve_part(parts[i], remaining, left(), be);
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (size_t i = next++; i < parts.size(); i = next++) {
                    results[i] = solve_part(parts[i], remaining, left(), be);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    RegionCover out;
    out.stats.cells = total_cells;
    out.stats.components = parts.size();
    bool all_feasible = true, all_optimal = true;
    std::map<int, int> usage;
    for (const PartResult& pr : results) {
        all_feasible &= pr.sol.feasible;
        all_optimal &= pr.sol.optimal;
        out.stats.variables += pr.variables;
        out.stats.nodes += pr.sol.nodes;
        out.stats.lp_bound += pr.sol.lp_bound;
        out.stats.lower_bound += pr.sol.lower_bound;
        for (const Candidate& c : pr.chosen) ++usage[c.size];
    }
    bool fits = true;
    for (const auto& [l, n] : remaining.counts) {
        if (n && usage[l] > *n) fits = false;
    }
    if (all_feasible && !all_optimal && !fits) all_feasible = false;

    if (all_feasible && fits) {
        for (const PartResult& pr : results) {
            out.chosen.insert(out.chosen.end(), pr.chosen.begin(), pr.chosen.end());
        }
        out.stats.optimal = all_optimal;
    } else {
        bool proven_infeasible = false;
        for (const PartResult& pr : results) proven_infeasible |= !pr.sol.feasible && pr.sol.optimal;
        if (proven_infeasible) throw Error(ErrorCode::Infeasible, "supply cannot cover the pattern");
        // Components compete for a finite supply: solve them jointly.
        std::vector<Region> all;
        for (const auto& part : parts) all.insert(all.end(), part.begin(), part.end());
        PartResult joint = solve_part(all, remaining, left(), be);
        if (!joint.sol.feasible) {
            if (joint.sol.optimal) throw Error(ErrorCode::Infeasible, "supply cannot cover the pattern");
            throw Error(ErrorCode::TimeBudgetExceeded, "no cover found within the time budget");
        }
        out.chosen = joint.chosen;
        out.stats.variables = joint.variables;
        out.stats.nodes += joint.sol.nodes;
        out.stats.lp_bound = joint.sol.lp_bound;
        out.stats.lower_bound = joint.sol.lower_bound;
        out.stats.optimal = joint.sol.optimal;
    }
    out.stats.lp_bound += static_cast<double>(forced.size());
    out.stats.lower_bound += static_cast<int>(forced.size());
    if (!out.stats.optimal && out.chosen.empty() && !parts.empty()) {
        throw Error(ErrorCode::TimeBudgetExceeded, "no cover found within the time budget");
    }
    out.chosen.insert(out.chosen.end(), forced.begin(), forced.end());
    std::sort(out.chosen.begin(), out.chosen.end(), [](const Candidate& a, const Candidate& c) {
        if (a.panel != c.panel) return a.panel < c.panel;
        if (a.size != c.size) return a.size > c.size;
        return a.origin < c.origin;
    });
    if (out.stats.optimal) out.stats.lower_bound = static_cast<int>(out.chosen.size());
    out.stats.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return out;
}

Assembly solve_cover(const Pattern& pattern, const ModuleSupply& supply, const SolveOptions& options,
                     const CoverBackend* backend) {
    if (pattern.phase != Phase::Features) {
        throw Error(ErrorCode::PhaseViolation, "decomposition needs a rasterized pattern");
    }
    Assembly a;
    a.revision = pattern.revision;
    std::vector<Region> regions;
    for (const Panel& panel : pattern.panels) {
        Region r{panel.id, {}};
        for (const Cell& c : panel.cells) {
            if (c.kind == CellKind::Foundation) r.cells.push_back(c.pos);
            if (c.kind == CellKind::Pleat) {
                Placement pl;
                pl.panel = panel.id;
                pl.size = 1;
                pl.origin = c.pos;
                pl.role = ModuleRole::Pleat;
                pl.pleat_dir = c.pleat_dir;
                a.placements.push_back(pl);
            }
        }
        regions.push_back(std::move(r));
    }
    for (const Dart& d : pattern.darts) {
        for (size_t k = 0; k < d.modules.size(); ++k) {
            const DartModule& m = d.modules[k];
            const Panel& panel = pattern.panel(m.first.panel);
            Point lo = panel.cell_by_id(m.first.cells.front())->pos;
            for (int cid : m.first.cells) lo = std::min(lo, panel.cell_by_id(cid)->pos);
            Placement pl;
            pl.panel = m.first.panel;
            pl.size = static_cast<int>(m.first.cells.size());
            pl.origin = lo;
            pl.role = ModuleRole::DartPair;
            pl.dart_id = d.id;
            pl.module_index = static_cast<int>(k);
            a.placements.push_back(pl);
        }
    }
    RegionCover rc = solve_regions(regions, supply, options, backend);
    for (const Candidate& c : rc.chosen) {
        Placement pl;
        pl.panel = c.panel;
        pl.size = c.size;
        pl.origin = c.origin;
        a.placements.push_back(pl);
    }
    std::stable_sort(a.placements.begin(), a.placements.end(), [](const Placement& x, const Placement& y) {
        if (x.panel != y.panel) return x.panel < y.panel;
        if (x.role != y.role) return x.role < y.role;
        if (x.size != y.size) return x.size > y.size;
        return x.origin < y.origin;
    });
    a.stats = rc.stats;
    a.objective = static_cast<int>(a.placements.size());
    if (a.stats.optimal) a.stats.lower_bound = a.objective;
    else a.stats.lower_bound += a.objective - static_cast<int>(rc.chosen.size());
    return a;
}

// ---- oracle ----

namespace {

struct OracleState {
    std::vector<std::vector<uint64_t>> masks_at;  // per lowest cell: candidate masks
    std::vector<std::vector<int>> sizes_at;
    std::vector<int> limit_slots;                 // side -> slot index, -1 unbounded
    std::map<std::pair<uint64_t, std::vector<int>>, int> memo;
    int num_cells = 0;
};

int oracle_rec(OracleState& st, uint64_t covered, std::vector<int>& used,
               const std::vector<int>& limits) {
    uint64_t full = st.num_cells == 64 ? ~0ULL : ((1ULL << st.num_cells) - 1);
    if (covered == full) return 0;
    auto key = std::make_pair(covered, used);
    auto it = st.memo.find(key);
    if (it != st.memo.end()) return it->second;
    int first = 0;
    while (covered & (1ULL << first)) ++first;
    int best = -1;
    const auto& masks = st.masks_at[static_cast<size_t>(first)];
    for (size_t k = 0; k < masks.size(); ++k) {
        if (masks[k] & covered) continue;
        int l = st.sizes_at[static_cast<size_t>(first)][k];
        int slot = st.limit_slots[static_cast<size_t>(l)];
        if (slot >= 0 && used[static_cast<size_t>(slot)] >= limits[static_cast<size_t>(slot)]) continue;
        if (slot >= 0) ++used[static_cast<size_t>(slot)];
        int sub = oracle_rec(st, covered | masks[k], used, limits);
        if (slot >= 0) --used[static_cast<size_t>(slot)];
        if (sub >= 0 && (best < 0 || sub + 1 < best)) best = sub + 1;
    }
    st.memo[key] = best;
    return best;
}

}  // namespace

int oracle_min_cover(const std::vector<Point>& cells_in, const ModuleSupply& supply) {
    std::vector<Point> cells(cells_in);
    std::sort(cells.begin(), cells.end(), [](const Point& a, const Point& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    if (cells.size() > 36) throw Error(ErrorCode::TooLarge, "oracle handles at most 36 cells");
    OracleState st;
    st.num_cells = static_cast<int>(cells.size());
    std::map<Point, int> index;
    for (size_t i = 0; i < cells.size(); ++i) index[cells[i]] = static_cast<int>(i);
    st.masks_at.resize(cells.size());
    st.sizes_at.resize(cells.size());
    int max_side = 1;
    for (const auto& [l, n] : supply.counts) max_side = std::max(max_side, l);
    st.limit_slots.assign(static_cast<size_t>(max_side + 1), -1);
    std::vector<int> limits;
    for (const auto& [l, n] : supply.counts) {
        if (n) {
            st.limit_slots[static_cast<size_t>(l)] = static_cast<int>(limits.size());
            limits.push_back(*n);
        }
    }
    for (size_t i = 0; i < cells.size(); ++i) {
        // Cell i is the lowest-then-leftmost cell of a square exactly when it is its origin.
        for (const auto& [l, n] : supply.counts) {
            if (n && *n == 0) continue;
            uint64_t mask = 0;
            bool fits = true;
            for (int dx = 0; dx < l && fits; ++dx) {
                for (int dy = 0; dy < l && fits; ++dy) {
                    auto it = index.find({cells[i].x + dx, cells[i].y + dy});
                    if (it == index.end()) fits = false;
                    else mask |= 1ULL << it->second;
                }
            }
            if (fits) {
                st.masks_at[i].push_back(mask);
                st.sizes_at[i].push_back(l);
            }
        }
    }
    std::vector<int> used(limits.size(), 0);
    return oracle_rec(st, 0, used, limits);
}

std::vector<std::string> assembly_violations(const Pattern& pattern, const Assembly& assembly,
                                             const ModuleSupply& supply) {
    std::vector<std::string> out;
    std::map<std::pair<int, Point>, int> cover_count;
    auto mark = [&](int panel, Point p) { ++cover_count[{panel, p}]; };
    for (const Placement& pl : assembly.placements) {
        switch (pl.role) {
        case ModuleRole::Foundation:
            for (int dx = 0; dx < pl.size; ++dx)
                for (int dy = 0; dy < pl.size; ++dy) mark(pl.panel, {pl.origin.x + dx, pl.origin.y + dy});
            break;
        case ModuleRole::Pleat: mark(pl.panel, pl.origin); break;
        case ModuleRole::DartPair: {
            const Dart& d = pattern.dart(pl.dart_id);
            const DartModule& m = d.modules.at(static_cast<size_t>(pl.module_index));
            for (const DartHalf* h : {&m.first, &m.second}) {
                const Panel& panel = pattern.panel(h->panel);
                for (int cid : h->cells) mark(h->panel, panel.cell_by_id(cid)->pos);
            }
            break;
        }
        }
    }
    size_t expected = 0;
    for (const Panel& panel : pattern.panels) {
        for (const Cell& c : panel.cells) {
            ++expected;
            auto it = cover_count.find({panel.id, c.pos});
            int n = it == cover_count.end() ? 0 : it->second;
            if (n != 1) {
                out.push_back("panel " + std::to_string(panel.id) + " cell (" + std::to_string(c.pos.x) +
                              "," + std::to_string(c.pos.y) + ") covered " + std::to_string(n) + " times");
            }
            if (it != cover_count.end()) cover_count.erase(it);
        }
    }
    for (const auto& [key, n] : cover_count) {
        out.push_back("placement covers a cell outside panel " + std::to_string(key.first));
    }
    for (const auto& [l, n] : assembly.usage()) {
        auto it = supply.counts.find(l);
        if (it == supply.counts.end()) {
            out.push_back("size " + std::to_string(l) + " not in supply");
        } else if (it->second && n > *it->second) {
            out.push_back("size " + std::to_string(l) + " used " + std::to_string(n) + " times, supply " +
                          std::to_string(*it->second));
        }
    }
    if (assembly.objective != static_cast<int>(assembly.placements.size())) {
        out.push_back("objective does not equal the number of placements");
    }
    (void)expected;
    return out;
}

}  // namespace garmod
