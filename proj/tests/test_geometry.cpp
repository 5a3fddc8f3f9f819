#include <gtest/gtest.h>

#include <random>
#include <set>

#include "garmod/error.hpp"
#include "garmod/geometry.hpp"

using namespace garmod;

namespace {

std::vector<Point> rect(int x, int y, int w, int h) {
    return {{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}};
}

ErrorCode code_of(const std::vector<Point>& outline) {
    try {
        normalize_outline(outline);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Geometry, SquareRasterizesToSixteenCells) {
    auto loop = normalize_outline(rect(0, 0, 4, 4));
    EXPECT_EQ(rasterize(loop).size(), 16u);
}

TEST(Geometry, LShapeHasEightCells) {
    std::vector<Point> l{{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 3}, {0, 3}};
    auto loop = normalize_outline(l);
    auto cells = rasterize(loop);
    EXPECT_EQ(cells.size(), 8u);
    EXPECT_EQ(std::count(cells.begin(), cells.end(), Point{2, 2}), 0);
}

TEST(Geometry, NormalizationOrientsAndDropsCollinear) {
    std::vector<Point> cw{{0, 0}, {0, 2}, {0, 3}, {2, 3}, {2, 0}, {1, 0}};
    auto loop = normalize_outline(cw);
    EXPECT_EQ(loop, (std::vector<Point>{{0, 0}, {2, 0}, {2, 3}, {0, 3}}));
    EXPECT_GT(signed_area2(loop), 0);
    std::vector<Point> closed = rect(1, 1, 2, 2);
    closed.push_back(closed.front());
    EXPECT_EQ(normalize_outline(closed).size(), 4u);
}

TEST(Geometry, RejectsBadOutlines) {
    EXPECT_EQ(code_of({{0, 0}, {2, 0}, {2, 2}, {1, 3}, {0, 2}}), ErrorCode::OffGrid);
    EXPECT_EQ(code_of({{0, 0}, {2, 0}, {2, 2}}), ErrorCode::NotClosed);
    // Bow tie style crossing.
    EXPECT_EQ(code_of({{0, 0}, {2, 0}, {2, 2}, {1, 2}, {1, -1}, {0, -1}}), ErrorCode::SelfIntersecting);
    EXPECT_EQ(code_of({{0, 0}, {3, 0}, {1, 0}, {1, 2}, {0, 2}}), ErrorCode::SelfIntersecting);
}

TEST(Geometry, TraceBoundaryRoundTripsRandomRectilinearShapes) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        // Random union of rectangles grown from a seed; keep the outer loop when hole-free.
        std::set<Point> cells;
        int rects = 1 + static_cast<int>(rng() % 4);
        for (int r = 0; r < rects; ++r) {
            int x = static_cast<int>(rng() % 6), y = static_cast<int>(rng() % 6);
            int w = 1 + static_cast<int>(rng() % 4), h = 1 + static_cast<int>(rng() % 4);
            for (int i = 0; i < w; ++i)
                for (int j = 0; j < h; ++j) cells.insert({x + i, y + j});
        }
        std::vector<Point> v(cells.begin(), cells.end());
        if (!is_connected(v)) continue;
        auto loops = trace_boundary(v);
        if (loops.size() != 1) continue;
        std::vector<Point> loop;
        try {
            loop = normalize_outline(loops[0]);
        } catch (const Error&) {
            continue;  // pinch points are not simple outlines
        }
        EXPECT_EQ(loop, loops[0]);
        EXPECT_EQ(rasterize(loop), v);
    }
}

TEST(Geometry, ComponentsAndConnectivity) {
    std::vector<Point> cells{{0, 0}, {1, 0}, {3, 0}, {3, 1}, {1, 1}};
    auto comps = connected_components(cells);
    EXPECT_EQ(comps.size(), 2u);
    EXPECT_FALSE(is_connected(cells));
    EXPECT_TRUE(is_connected({{0, 0}, {0, 1}}));
    EXPECT_FALSE(is_connected({{0, 0}, {1, 1}}));
}

TEST(Geometry, SideHelpers) {
    for (Side s : kSides) {
        EXPECT_EQ(opposite(opposite(s)), s);
        EXPECT_EQ(side_of(direction_of(s)), s);
        EXPECT_EQ(side_from_string(to_string(s)), s);
        auto e = side_endpoints({3, 4}, s);
        EXPECT_EQ(std::abs(e[1].x - e[0].x) + std::abs(e[1].y - e[0].y), 1);
    }
}
