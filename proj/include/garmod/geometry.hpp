#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string_view>
#include <vector>

namespace garmod {

// Grid point or cell coordinate, in base units. Cell (x, y) is the unit square [x, x+1] x [y, y+1].
struct Point {
    int x = 0;
    int y = 0;

    auto operator<=>(const Point&) const = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(int s, Point a) { return {s * a.x, s * a.y}; }

enum class Side { Bottom, Right, Top, Left };
enum class Direction { Left, Right, Up, Down };
enum class Axis { Column, Row };

inline constexpr std::array<Side, 4> kSides = {Side::Bottom, Side::Right, Side::Top, Side::Left};

Point side_offset(Side side);
Side opposite(Side side);
Side side_of(Direction dir);
Direction direction_of(Side side);
bool is_horizontal(Direction dir);  // Left or Right

std::string_view to_string(Side side);
std::string_view to_string(Direction dir);
std::string_view to_string(Axis axis);
Side side_from_string(std::string_view s);
Direction direction_from_string(std::string_view s);
Axis axis_from_string(std::string_view s);

// Endpoints of a cell side, in the order a counter-clockwise walk around the cell visits them.
std::array<Point, 2> side_endpoints(Point cell, Side side);

int64_t signed_area2(const std::vector<Point>& loop);

// Validates a rectilinear loop and returns it counter-clockwise with collinear vertices removed,
// starting at the lowest-then-leftmost vertex. A trailing copy of the first vertex is accepted.
// Throws NotClosed, OffGrid, SelfIntersecting.
std::vector<Point> normalize_outline(const std::vector<Point>& outline);

// Unit cells strictly inside a simple rectilinear loop, sorted.
std::vector<Point> rasterize(const std::vector<Point>& outline);

// Boundary loops of a cell set as normalized vertex lists (outer loop counter-clockwise,
// holes clockwise), each starting at its lowest-then-leftmost vertex; outer loop first.
std::vector<std::vector<Point>> trace_boundary(const std::vector<Point>& cells);

// True when the cells form one 4-connected component.
bool is_connected(const std::vector<Point>& cells);

// Splits a cell set into 4-connected components, each sorted.
std::vector<std::vector<Point>> connected_components(const std::vector<Point>& cells);

}  // namespace garmod
