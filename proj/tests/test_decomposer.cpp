#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <set>

#include "garmod/decomposer.hpp"
#include "garmod/error.hpp"

using namespace garmod;

namespace {

std::vector<Point> square_board(int n) {
    std::vector<Point> cells;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) cells.push_back({x, y});
    return cells;
}

int solve_count(const std::vector<Point>& cells, const ModuleSupply& supply, double budget = 60.0) {
    SolveOptions opt;
    opt.time_budget_s = budget;
    RegionCover rc = solve_regions({Region{0, cells}}, supply, opt);
    EXPECT_TRUE(rc.stats.optimal);
    return static_cast<int>(rc.chosen.size());
}

void expect_exact_cover(const std::vector<Point>& cells, const RegionCover& rc) {
    std::multiset<Point> covered;
    for (const Candidate& c : rc.chosen)
        for (int dx = 0; dx < c.size; ++dx)
            for (int dy = 0; dy < c.size; ++dy) covered.insert({c.origin.x + dx, c.origin.y + dy});
    std::multiset<Point> want(cells.begin(), cells.end());
    EXPECT_EQ(covered, want);
}

ModuleSupply all_sizes(int n) {
    std::vector<int> sides;
    for (int l = 1; l <= n; ++l) sides.push_back(l);
    return ModuleSupply::unbounded(sides);
}

}  // namespace

TEST(Decomposer, OracleKnownValues) {
    EXPECT_EQ(oracle_min_cover(square_board(4), all_sizes(4)), 1);
    EXPECT_EQ(oracle_min_cover(square_board(5), all_sizes(4)), 8);
    EXPECT_EQ(oracle_min_cover(square_board(5), all_sizes(5)), 1);
    EXPECT_EQ(oracle_min_cover(square_board(6), ModuleSupply::unbounded({2, 3})), 4);
    EXPECT_EQ(oracle_min_cover(square_board(3), ModuleSupply::unbounded({2})), -1);
    ModuleSupply limited;
    limited.counts[2] = 1;
    limited.counts[1] = std::nullopt;
    EXPECT_EQ(oracle_min_cover(square_board(4), limited), 13);
    EXPECT_THROW(oracle_min_cover(square_board(7), all_sizes(2)), Error);
}

TEST(Decomposer, NamedSquares) {
    EXPECT_EQ(solve_count(square_board(4), all_sizes(4)), 1);
    EXPECT_EQ(solve_count(square_board(5), all_sizes(4)), 8);
    for (auto [n, want] : std::vector<std::pair<int, int>>{{8, 4}, {10, 11}, {12, 9}}) {
        EXPECT_EQ(solve_count(square_board(n), all_sizes(4)), want) << n;
    }
}

TEST(Decomposer, CoverIsExactAndDeterministic) {
    auto cells = square_board(10);
    RegionCover a = solve_regions({Region{0, cells}}, all_sizes(4));
    RegionCover b = solve_regions({Region{0, cells}}, all_sizes(4));
    expect_exact_cover(cells, a);
    EXPECT_EQ(a.chosen, b.chosen);
    EXPECT_NEAR(a.stats.lp_bound, 11.0, 1e-6);
}

TEST(Decomposer, MatchesOracleOnRandomBoards) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 150; ++trial) {
        int w = 2 + static_cast<int>(rng() % 6), h = 2 + static_cast<int>(rng() % 6);
        std::vector<Point> cells;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (rng() % 5 != 0 && cells.size() < 36) cells.push_back({x, y});
        if (cells.empty()) continue;
        ModuleSupply supply;
        supply.counts[1] = std::nullopt;
        for (int l = 2; l <= 4; ++l) {
            if (rng() % 2) supply.counts[l] = static_cast<int>(rng() % 3);
        }
        int want = oracle_min_cover(cells, supply);
        ASSERT_GE(want, 0);
        RegionCover rc = solve_regions({Region{0, cells}}, supply);
        EXPECT_EQ(static_cast<int>(rc.chosen.size()), want) << "trial " << trial;
        expect_exact_cover(cells, rc);
        for (const auto& [l, n] : supply.counts) {
            if (!n) continue;
            int used = 0;
            for (const Candidate& c : rc.chosen) used += c.size == l;
            EXPECT_LE(used, *n);
        }
    }
}

TEST(Decomposer, InfeasibleSupply) {
    EXPECT_THROW(solve_regions({Region{0, square_board(3)}}, ModuleSupply::unbounded({2})), Error);
    try {
        ModuleSupply s;
        s.counts[1] = 3;
        solve_regions({Region{0, square_board(2)}}, s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Infeasible);
    }
}

TEST(Decomposer, SharedFiniteSupplyAcrossComponents) {
    std::vector<Point> a = square_board(2), b;
    for (const Point& p : square_board(2)) b.push_back({p.x + 10, p.y});
    ModuleSupply s;
    s.counts[2] = 1;
    s.counts[1] = std::nullopt;
    RegionCover rc = solve_regions({Region{0, a}, Region{1, b}}, s);
    EXPECT_EQ(rc.chosen.size(), 5u);
    EXPECT_TRUE(rc.stats.optimal);
}

TEST(Decomposer, ThreadsGiveSameResult) {
    std::vector<Region> regions;
    for (int k = 0; k < 4; ++k) regions.push_back({k, square_board(7 + k)});
    SolveOptions one, four;
    four.threads = 4;
    EXPECT_EQ(solve_regions(regions, all_sizes(4), one).chosen,
              solve_regions(regions, all_sizes(4), four).chosen);
}

TEST(Decomposer, LpFormatListsConstraints) {
    CoverProblem pb;
    pb.num_cells = 2;
    pb.candidate_cells = {{0}, {1}};
    pb.candidate_size = {1, 1};
    pb.limits[1] = 5;
    std::string lp = to_lp_format(pb);
    EXPECT_NE(lp.find("cell0: + x0 = 1"), std::string::npos);
    EXPECT_NE(lp.find("supply1: + x0 + x1 <= 5"), std::string::npos);
    EXPECT_NE(lp.find("Binary"), std::string::npos);
}

TEST(Decomposer, TinyBudgetReportsIncumbent) {
    SolveOptions opt;
    opt.time_budget_s = 0.0;
    RegionCover rc = solve_regions({Region{0, square_board(17)}}, all_sizes(4), opt);
    expect_exact_cover(square_board(17), rc);
    EXPECT_GE(static_cast<int>(rc.chosen.size()), rc.stats.lower_bound);
}
