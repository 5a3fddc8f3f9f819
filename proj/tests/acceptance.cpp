// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when all pass.
//
//   acceptance [--cli <path to garmod>] [--only <n>]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "garmod/bench.hpp"
#include "garmod/layout.hpp"
#include "garmod/library.hpp"
#include "garmod/mesh.hpp"
#include "garmod/pipeline.hpp"
#include "garmod/serialize.hpp"
#include "garmod/validate.hpp"
#include "support/appendix_cases.hpp"
#include "support/fuzz.hpp"

namespace garmod {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Pinned thresholds.
constexpr int kOracleBoards = 500;
constexpr int kMaxOracleCells = 36;
constexpr double kOracleWallLimitS = 600.0;
constexpr double kLargeBudgetS = 60.0;
constexpr int kIrregularSeeds = 10;
constexpr double kIrregularRemoval = 0.10;
constexpr double kMinR2 = 0.9;
constexpr int kScalingRepeats = 15;
constexpr int kFuzzSequences = 10000;
constexpr int kFuzzSteps = 6;
constexpr int kGoldenCases = 17;
constexpr double kTol = 1e-9;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Pattern board_pattern(int n) {
    Pattern p = new_pattern({});
    add_panel(p, cases::rect(0, 0, n, n), "board");
    begin_stitching(p);
    enter_features_phase(p);
    return p;
}

// Exact cover and supply bounds, independently of the solver's own checks.
bool exact_cover(const std::vector<Point>& cells, const std::vector<Candidate>& chosen, const ModuleSupply& supply) {
    std::multiset<Point> covered;
    std::map<int, int> used;
    for (const Candidate& c : chosen) {
        ++used[c.size];
        for (int dy = 0; dy < c.size; ++dy)
            for (int dx = 0; dx < c.size; ++dx) covered.insert({c.origin.x + dx, c.origin.y + dy});
    }
    std::multiset<Point> want(cells.begin(), cells.end());
    if (covered != want) return false;
    for (const auto& [l, n] : used) {
        auto it = supply.counts.find(l);
        if (it == supply.counts.end()) return false;
        if (it->second && n > *it->second) return false;
    }
    return true;
}

Verdict solver_optimality() {
    std::mt19937 rng(20240601);
    auto start = Clock::now();
    int agree = 0, infeasible = 0, boards = 0;
    std::string first_miss;
    while (boards < kOracleBoards) {
        int w = 2 + static_cast<int>(rng() % 5), h = 2 + static_cast<int>(rng() % 5);
        double removal = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
        std::vector<Point> cells;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (std::uniform_real_distribution<double>(0, 1)(rng) >= removal) cells.push_back({x, y});
        if (cells.empty() || static_cast<int>(cells.size()) > kMaxOracleCells) continue;
        // Random size set within 1..4, each with a random finite count; at least one count is
        // nonzero, since an empty supply is invalid input rather than an instance.
        ModuleSupply supply;
        int n = static_cast<int>(cells.size());
        for (int l = 1; l <= 4; ++l) {
            if (rng() % (l == 1 ? 8 : 3) == 0) continue;
            int cap = std::max(1, n / (l * l));
            int lo = l == 1 ? 2 * cap / 3 : 0;
            supply.counts[l] = lo + static_cast<int>(rng() % static_cast<unsigned>(cap - lo + 1));
        }
        if (supply.sizes().empty()) continue;
        ++boards;
        int want = oracle_min_cover(cells, supply);
        int got = -1;
        bool valid = true;
        try {
            RegionCover rc = solve_regions({Region{0, cells}}, supply);
            got = static_cast<int>(rc.chosen.size());
            valid = rc.stats.optimal && exact_cover(cells, rc.chosen, supply);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Infeasible) valid = false;
        }
        if (want < 0) ++infeasible;
        if (got == want && valid) {
            ++agree;
        } else if (first_miss.empty()) {
            first_miss = fmt(" first miss: board %d, %zu cells, oracle %d, solver %d", boards, cells.size(), want, got);
        }
    }
    double wall = seconds_since(start);
    return {agree == boards && wall < kOracleWallLimitS,
            fmt("%d/%d boards agree (%d infeasible), %.1f s (limit %.0f s)", agree, boards, infeasible, wall,
                kOracleWallLimitS) + first_miss};
}

Verdict named_instances() {
    SolveOptions o;
    o.time_budget_s = kLargeBudgetS;
    Assembly a4 = solve_cover(board_pattern(4), default_supply(), o);
    Assembly a5 = solve_cover(board_pattern(5), default_supply(), o);
    auto start = Clock::now();
    Pattern big = board_pattern(25);
    Assembly a25 = solve_cover(big, default_supply(), o);
    double wall = seconds_since(start);
    bool ok25 = a25.stats.optimal && wall <= kLargeBudgetS && assembly_violations(big, a25, default_supply()).empty();
    return {a4.objective == 1 && a5.objective == 8 && ok25,
            fmt("4x4 -> %d (want 1), 5x5 -> %d (want 8), 25x25 -> %d modules, %s, %.2f s (limit %.0f s), "
                "%zu variables",
                a4.objective, a5.objective, a25.objective, a25.stats.optimal ? "proven optimal" : "NOT optimal", wall,
                kLargeBudgetS, a25.stats.variables)};
}

Verdict irregularity_ordering() {
    SolveOptions o;
    o.time_budget_s = kLargeBudgetS;
    std::vector<double> full, removed;
    bool all_optimal = true;
    for (int seed = 0; seed < kIrregularSeeds; ++seed) {
        BenchRow a = bench_board(25, 0.0, static_cast<uint32_t>(seed), default_supply(), o);
        BenchRow b = bench_board(25, kIrregularRemoval, static_cast<uint32_t>(seed), default_supply(), o);
        full.push_back(a.runtime_ms);
        removed.push_back(b.runtime_ms);
        all_optimal = all_optimal && a.optimal && b.optimal;
    }
    double m0 = median(full), m10 = median(removed);
    return {m10 < m0 && all_optimal, fmt("median 25x25 runtime %.1f ms at 0%% vs %.1f ms at 10%% over %d seeds%s", m0,
                                         m10, kIrregularSeeds, all_optimal ? "" : " (some solves not optimal)")};
}

Verdict panel_scaling() {
    std::vector<double> ks, ms;
    std::string points;
    for (int k : {1, 2, 4, 8}) {
        std::vector<double> runs;
        for (int rep = 0; rep < kScalingRepeats; ++rep) runs.push_back(bench_panels(k, 8, default_supply(), {}).runtime_ms);
        ks.push_back(k);
        ms.push_back(median(runs));
        points += fmt("%sK=%d %.2f ms", points.empty() ? "" : ", ", k, ms.back());
    }
    double r2 = linear_r2(ks, ms);
    return {r2 >= kMinR2, fmt("%s; R^2 = %.4f (min %.2f, median of %d runs each)", points.c_str(), r2, kMinR2,
                              kScalingRepeats)};
}

Verdict golden_suite() {
    auto all = cases::appendix_cases();
    int passed = 0;
    std::string failures;
    for (const cases::AppendixCase& c : all) {
        std::string why;
        try {
            why = cases::check_case(c, c.run());
        } catch (const std::exception& e) {
            why = e.what();
        }
        if (why.empty()) ++passed;
        else failures += "; " + c.name + ": " + why;
    }
    return {passed == kGoldenCases && static_cast<int>(all.size()) == kGoldenCases,
            fmt("%d/%zu cases pass (want %d)", passed, all.size(), kGoldenCases) + failures};
}

Verdict invariant_fuzzing() {
    std::mt19937 rng(424242);
    long accepted = 0, rejected = 0;
    std::string first;
    for (int seq = 0; seq < kFuzzSequences && first.empty(); ++seq) {
        Pattern p = fuzz::random_pattern(rng);
        for (int step = 0; step < kFuzzSteps && first.empty(); ++step) {
            FeatureRecord f = fuzz::random_edit(p, rng);
            std::string before = to_json(p);
            EditResult r = apply_feature(p, f);
            if (r.accepted()) {
                ++accepted;
                auto v = pattern_violations(p);
                if (!v.empty()) first = fmt("sequence %d step %d: ", seq, step) + to_string(v.front());
            } else {
                ++rejected;
                if (to_json(p) != before) first = fmt("sequence %d step %d: rejected edit changed the document", seq, step);
            }
        }
    }
    return {first.empty(), fmt("%d sequences, %ld accepted edits checked, %ld rejections byte-identical", kFuzzSequences,
                               accepted, rejected) + (first.empty() ? "" : "; " + first)};
}

Verdict export_arithmetic() {
    std::vector<std::string> fails;
    // Dart pair, w = Δ = 8, h = 16, no allowance.
    {
        PatternConfig c;
        c.seam_allowance = 0.0;
        Pattern p = new_pattern(c);
        add_panel(p, cases::rect(0, 0, 4, 4), "P");
        begin_stitching(p);
        enter_features_phase(p);
        if (!add_dart(p, 0, {2, 0}, DartOrientation::Vertical, 8.0, 16.0).accepted()) fails.push_back("dart rejected");
        int pairs = 0;
        for (const CutPiece& piece : cut_pieces(p, solve_cover(p, default_supply()))) {
            if (piece.kind != PieceKind::DartPair) continue;
            ++pairs;
            if (std::fabs(piece.width - 12.0) > kTol || std::fabs(piece.height - 16.0) > kTol) {
                fails.push_back(fmt("dart pair %.3f x %.3f", piece.width, piece.height));
            }
        }
        if (pairs == 0) fails.push_back("no dart pair piece");
    }
    // Marks per square edge: 2k per base unit.
    for (int k = 1; k <= 3; ++k) {
        PatternConfig c;
        c.connector_density = k;
        Pattern p = new_pattern(c);
        add_panel(p, cases::rect(0, 0, 7, 5), "P");
        begin_stitching(p);
        enter_features_phase(p);
        for (const CutPiece& piece : cut_pieces(p, solve_cover(p, default_supply()))) {
            int len = static_cast<int>(std::lround((piece.width - 2 * c.seam_allowance) / c.base_unit));
            for (int m : piece.marks_per_edge) {
                if (m != 2 * k * len) fails.push_back(fmt("k=%d side %d: %d marks, want %d", k, len, m, 2 * k * len));
            }
        }
    }
    // All-square layout fills the sheet exactly.
    double util = 0;
    {
        PatternConfig c;
        c.base_unit = 10.0;
        c.seam_allowance = 0.0;
        Pattern p = new_pattern(c);
        add_panel(p, cases::rect(0, 0, 4, 4), "P");
        begin_stitching(p);
        enter_features_phase(p);
        CutLayout layout = pack_layout(cut_pieces(p, solve_cover(p, ModuleSupply::unbounded({1}))), 40.0);
        util = layout.utilization;
        if (std::fabs(util - 1.0) > kTol) fails.push_back(fmt("all-square utilization %.6f", util));
    }
    // Area conservation on random patterns: piece area matches the fabric, layout area matches the pieces.
    std::mt19937 rng(99);
    int layouts = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Pattern p = fuzz::random_pattern(rng);
        for (int step = 0; step < 6; ++step) apply_feature(p, fuzz::random_edit(p, rng));
        auto pieces = cut_pieces(p, solve_cover(p, default_supply()));
        double unit = p.config.base_unit, fabric = 0, net = 0, cut = 0, placed = 0, used = 0;
        for (const Panel& panel : p.panels)
            for (const Cell& cell : panel.cells) fabric += cell.kind == CellKind::DartHole ? 0.0 : unit * unit;
        for (const Dart& d : p.darts) fabric += static_cast<double>(d.modules.size()) * (2 * unit - d.width / 2) * d.height;
        for (const CutPiece& piece : pieces) {
            net += piece.net_area;
            cut += piece.width * piece.height;
        }
        CutLayout layout = pack_layout(pieces, 80.0);
        for (const PlacedPiece& pp : layout.placed) placed += pp.width * pp.height;
        for (double hgt : layout.sheet_heights) used += hgt * layout.sheet_width;
        bool ok = std::fabs(net - fabric) < 1e-6 && std::fabs(placed - cut) < 1e-6 && layout_violations(layout).empty() &&
                  std::fabs(layout.utilization * used - cut) < 1e-6;
        if (!ok) fails.push_back(fmt("area not conserved on random pattern %d", trial));
        ++layouts;
    }
    return {fails.empty(), fmt("dart pair 12x16, marks 2k*len/unit for k=1..3, all-square utilization %.6f, area conserved "
                               "on %d layouts",
                               util, layouts) + (fails.empty() ? "" : "; " + fails.front())};
}

Verdict mesh_export() {
    std::vector<std::string> fails;
    size_t flat = 0, across = 0, folds = 0;
    {
        auto s = cases::side_by_side(1, 1, 1);
        MeshBundle b = build_mesh_bundle(s.p, drawn_alignment(s.p), 1.0);
        flat = b.threads.size();
        if (flat != 9) fails.push_back(fmt("flat seam has %zu threads", flat));
        if (sidecar_text(b).find("fabric areal_density_kg_m2 0.6\n") == std::string::npos) {
            fails.push_back("sidecar lacks density 0.6");
        }
    }
    {
        auto s = cases::side_by_side(1, 1, 1);
        gather_edge(s.p, s.seam, SeamSideId::A);
        MeshBundle b = build_mesh_bundle(s.p, drawn_alignment(s.p), 1.0);
        auto at = [&](int mesh, int vid) { return b.meshes[static_cast<size_t>(mesh)].local[static_cast<size_t>(vid)]; };
        for (const Thread& t : b.threads) {
            Vec2 u = at(t.mesh_a, t.vid_a), v = at(t.mesh_b, t.vid_b);
            if (t.tag == ThreadTag::Seam) {
                ++across;
                if (t.mesh_a != 0) std::swap(u, v);
                // Short side y in [0, 8]: its first half meets [0, 4] of the long side, the second [8, 12].
                bool ok = v.y < 4.0 ? std::fabs(u.y - v.y) < kTol
                          : v.y > 4.0 ? std::fabs(u.y - (v.y + 4.0)) < kTol
                                      : std::fabs(u.y - 4.0) < kTol || std::fabs(u.y - 8.0) < kTol;
                if (!ok) fails.push_back(fmt("gathered thread (%.2f) -> (%.2f)", v.y, u.y));
            } else if (t.tag == ThreadTag::GatherFold) {
                ++folds;
                double mid = u.y < 8.0 ? 6.0 : 14.0;
                if (t.mesh_a != 0 || t.mesh_b != 0 || std::fabs(u.y + v.y - 2 * mid) > kTol) {
                    fails.push_back("remainder not self-matched about its midpoint");
                }
            }
        }
        if (across != 10 || folds != 4) fails.push_back(fmt("gathered seam %zu across, %zu folds", across, folds));
        auto v = mesh_violations(s.p, b);
        if (!v.empty()) fails.push_back(v.front());
    }
    return {fails.empty(), fmt("flat 8 cm seam %zu threads, gathered 16:8 seam %zu half-unit threads + %zu "
                               "self-matched remainder threads, sidecar density 0.6",
                               flat, across, folds) + (fails.empty() ? "" : "; " + fails.front())};
}

int run_cli(const std::string& cli, const std::string& args) {
    std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Verdict walkthrough(const std::string& cli) {
    if (cli.empty() || !fs::exists(cli)) return {false, "CLI binary not found: " + cli};
    fs::path dir = fs::temp_directory_path() / "garmod_acceptance_walkthrough";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto at = [&](const std::string& n) { return (dir / n).string(); };
    std::vector<std::pair<std::string, std::string>> steps = {
        {"template", "template compound-skirt -o " + at("start.json")},
        {"apply", "apply " + at("start.json") + " --builtin compound-skirt -o " + at("skirt.json")},
        {"validate", "validate " + at("skirt.json")},
        {"decompose", "decompose " + at("skirt.json") + " -o " + at("assembly.json")},
        {"export-svg", "export-svg " + at("skirt.json") + " --sheet-width 60 -o " + at("sheets")},
        {"export-mesh", "export-mesh " + at("skirt.json") + " --drawn -o " + at("mesh")},
    };
    for (const auto& [name, args] : steps) {
        int code = run_cli(cli, args);
        if (code != 0) return {false, fmt("step %s exited %d", name.c_str(), code)};
    }
    Pattern p = load_pattern(at("skirt.json"));
    Assembly a = assembly_from_json(nlohmann::json::parse(slurp(at("assembly.json"))));
    bool cover_ok = assembly_violations(p, a, default_supply()).empty();
    bool svg_ok = fs::exists(dir / "sheets" / "sheet_01.svg") && fs::exists(dir / "sheets" / "instructions.md");
    bool mesh_ok = fs::exists(dir / "mesh" / "threads.txt");
    int pleats = 0;
    for (const Panel& panel : p.panels)
        for (const Cell& c : panel.cells) pleats += c.kind == CellKind::Pleat;
    bool features_ok = p.darts.size() == 2 && pleats == 6 && p.features.size() == 10;
    Pattern lib = make_template("compound-skirt");
    apply_script(lib, compound_skirt_script());
    bool same = to_json(lib) == slurp(at("skirt.json"));
    fs::remove_all(dir);
    return {cover_ok && svg_ok && mesh_ok && features_ok,
            fmt("6 CLI steps exit 0; %d modules, cover %s, %d pleats, %zu darts, svg %s, mesh %s, file %s library replay",
                a.objective, cover_ok ? "valid" : "INVALID", pleats, p.darts.size(), svg_ok ? "written" : "MISSING",
                mesh_ok ? "written" : "MISSING", same ? "matches" : "differs from")};
}

}  // namespace
}  // namespace garmod

int main(int argc, char** argv) {
    using namespace garmod;
    std::string cli = GARMOD_CLI;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--cli") && i + 1 < argc) cli = argv[++i];
        else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
    }
    std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"solver optimality vs exhaustive oracle", solver_optimality},
        {"named instances 4x4, 5x5, 25x25", named_instances},
        {"irregularity lowers median runtime", irregularity_ordering},
        {"panel-count scaling is linear", panel_scaling},
        {"feature casework golden suite", golden_suite},
        {"invariant fuzzing", invariant_fuzzing},
        {"export arithmetic", export_arithmetic},
        {"mesh export", mesh_export},
        {"compound-skirt walkthrough via CLI", [&] { return walkthrough(cli); }},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        auto start = Clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s [%zu] %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    v.detail.c_str(), seconds_since(start));
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
