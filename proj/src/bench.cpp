#include "garmod/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "garmod/error.hpp"

namespace garmod {

std::vector<Point> random_board(int n, double removal, uint32_t seed) {
    if (n < 1 || removal < 0.0 || removal >= 1.0) throw Error(ErrorCode::InvalidArgument, "bad board parameters");
    std::vector<Point> cells;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) cells.push_back({x, y});
    }
    std::mt19937 rng(seed);
    std::shuffle(cells.begin(), cells.end(), rng);
    auto drop = static_cast<size_t>(std::lround(removal * n * n));
    cells.erase(cells.begin(), cells.begin() + static_cast<long>(drop));
    std::sort(cells.begin(), cells.end());
    return cells;
}

BenchRow bench_board(int n, double removal, uint32_t seed, const ModuleSupply& supply, const SolveOptions& options) {
    BenchRow row;
    row.size = n;
    row.removal = removal;
    row.seed = seed;
    std::vector<Point> cells = random_board(n, removal, seed);
    row.cells = cells.size();
    auto start = std::chrono::steady_clock::now();
    try {
        RegionCover rc = solve_regions({Region{0, cells}}, supply, options);
        row.variables = rc.stats.variables;
        row.components = rc.stats.components;
        row.modules = static_cast<int>(rc.chosen.size());
        row.lp_bound = rc.stats.lp_bound;
        row.optimal = rc.stats.optimal;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TimeBudgetExceeded) throw;
        row.modules = -1;
    }
    row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

std::vector<BenchRow> run_bench(const std::vector<int>& sizes, const std::vector<double>& removals, int seeds,
                                const ModuleSupply& supply, const SolveOptions& options) {
    std::vector<BenchRow> rows;
    for (int n : sizes) {
        for (double r : removals) {
            for (int s = 0; s < seeds; ++s) rows.push_back(bench_board(n, r, static_cast<uint32_t>(s), supply, options));
        }
    }
    return rows;
}

ScalingRow bench_panels(int panels, int side, const ModuleSupply& supply, const SolveOptions& options) {
    std::vector<Region> regions;
    ScalingRow row;
    row.panels = panels;
    for (int k = 0; k < panels; ++k) {
        Region r;
        r.panel = k;
        for (int y = 0; y < side; ++y) {
            for (int x = 0; x < side; ++x) r.cells.push_back({x, y});
        }
        row.cells += r.cells.size();
        regions.push_back(std::move(r));
    }
    auto start = std::chrono::steady_clock::now();
    RegionCover rc = solve_regions(regions, supply, options);
    row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    row.variables = rc.stats.variables;
    return row;
}

double linear_r2(const std::vector<double>& xs, const std::vector<double>& ys) {
    size_t n = xs.size();
    if (n < 2 || ys.size() != n) throw Error(ErrorCode::InvalidArgument, "need at least two points");
    double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0) throw Error(ErrorCode::InvalidArgument, "x values are all equal");
    if (syy == 0) return 1.0;
    return sxy * sxy / (sxx * syy);
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

nlohmann::json bench_json(const std::vector<BenchRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const BenchRow& r : rows) {
        out.push_back({{"size", r.size},
                       {"removal", r.removal},
                       {"seed", r.seed},
                       {"cells", r.cells},
                       {"variables", r.variables},
                       {"components", r.components},
                       {"modules", r.modules},
                       {"lp_bound", r.lp_bound},
                       {"runtime_ms", r.runtime_ms},
                       {"optimal", r.optimal}});
    }
    return out;
}

namespace {

using Group = std::map<std::pair<int, double>, std::vector<const BenchRow*>>;

Group grouped(const std::vector<BenchRow>& rows) {
    Group g;
    for (const BenchRow& r : rows) g[{r.size, r.removal}].push_back(&r);
    return g;
}

}  // namespace

std::string bench_table(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%5s %8s %5s %7s %9s %9s %12s %8s\n", "size", "removal", "runs", "cells",
                  "variables", "modules", "median_ms", "optimal");
    os << line;
    for (const auto& [key, group] : grouped(rows)) {
        std::vector<double> ms, mods, cells, vars;
        int optimal = 0;
        for (const BenchRow* r : group) {
            ms.push_back(r->runtime_ms);
            mods.push_back(r->modules);
            cells.push_back(static_cast<double>(r->cells));
            vars.push_back(static_cast<double>(r->variables));
            optimal += r->optimal;
        }
        std::snprintf(line, sizeof line, "%5d %8.3f %5zu %7.0f %9.0f %9.1f %12.2f %5d/%zu\n", key.first, key.second,
                      group.size(), median(cells), median(vars), median(mods), median(ms), optimal, group.size());
        os << line;
    }
    return os.str();
}

std::string bench_svg(const std::vector<BenchRow>& rows) {
    const double W = 640, H = 400, L = 60, B = 40, R = 20, T = 20;
    Group g = grouped(rows);
    std::map<double, std::vector<std::pair<int, double>>> series;
    int lo = 0, hi = 1;
    double tmin = 1e300, tmax = 0;
    bool first = true;
    for (const auto& [key, group] : g) {
        std::vector<double> ms;
        for (const BenchRow* r : group) ms.push_back(std::max(r->runtime_ms, 1e-3));
        double m = median(ms);
        series[key.second].push_back({key.first, m});
        lo = first ? key.first : std::min(lo, key.first);
        hi = first ? key.first : std::max(hi, key.first);
        tmin = std::min(tmin, m);
        tmax = std::max(tmax, m);
        first = false;
    }
    if (hi == lo) hi = lo + 1;
    if (series.empty()) tmin = tmax = 1;
    double lmin = std::floor(std::log10(tmin)), lmax = std::ceil(std::log10(tmax));
    if (lmax <= lmin) lmax = lmin + 1;
    auto px = [&](int n) { return L + (W - L - R) * (n - lo) / static_cast<double>(hi - lo); };
    auto py = [&](double ms) { return H - B - (H - B - T) * (std::log10(ms) - lmin) / (lmax - lmin); };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream os;
    char buf[256];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    std::snprintf(buf, sizeof buf, "<path d=\"M %.0f %.0f L %.0f %.0f L %.0f %.0f\" fill=\"none\" stroke=\"#000\"/>\n", L, T,
                  L, H - B, W - R, H - B);
    os << buf;
    for (double e = lmin; e <= lmax; e += 1) {
        std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">1e%.0f ms</text>\n",
                      L - 4, py(std::pow(10.0, e)) + 4, e);
        os << buf;
    }
    for (int n = lo; n <= hi; ++n) {
        if ((hi - lo) > 10 && (n - lo) % 5) continue;
        std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.0f\" font-size=\"11\" text-anchor=\"middle\">%d</text>\n",
                      px(n), H - B + 16, n);
        os << buf;
    }
    int k = 0;
    for (const auto& [removal, pts] : series) {
        const char* color = colors[k % 5];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (size_t i = 0; i < pts.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.1f,%.1f", i ? " " : "", px(pts[i].first), py(pts[i].second));
            os << buf;
        }
        os << "\"/>\n";
        std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"%.0f\" font-size=\"11\" fill=\"%s\">removal %.0f%%</text>\n",
                      L + 10, T + 14.0 * (k + 1), color, removal * 100);
        os << buf;
        ++k;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace garmod
