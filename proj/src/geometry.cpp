#include "garmod/geometry.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "garmod/error.hpp"

namespace garmod {

Point side_offset(Side side) {
    switch (side) {
    case Side::Bottom: return {0, -1};
    case Side::Right: return {1, 0};
    case Side::Top: return {0, 1};
    case Side::Left: return {-1, 0};
    }
    return {0, 0};
}

Side opposite(Side side) {
    switch (side) {
    case Side::Bottom: return Side::Top;
    case Side::Right: return Side::Left;
    case Side::Top: return Side::Bottom;
    case Side::Left: return Side::Right;
    }
    return side;
}

Side side_of(Direction dir) {
    switch (dir) {
    case Direction::Left: return Side::Left;
    case Direction::Right: return Side::Right;
    case Direction::Up: return Side::Top;
    case Direction::Down: return Side::Bottom;
    }
    return Side::Bottom;
}

Direction direction_of(Side side) {
    switch (side) {
    case Side::Left: return Direction::Left;
    case Side::Right: return Direction::Right;
    case Side::Top: return Direction::Up;
    case Side::Bottom: return Direction::Down;
    }
    return Direction::Down;
}

bool is_horizontal(Direction dir) { return dir == Direction::Left || dir == Direction::Right; }

std::string_view to_string(Side side) {
    switch (side) {
    case Side::Bottom: return "bottom";
    case Side::Right: return "right";
    case Side::Top: return "top";
    case Side::Left: return "left";
    }
    return "?";
}

std::string_view to_string(Direction dir) {
    switch (dir) {
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    }
    return "?";
}

std::string_view to_string(Axis axis) { return axis == Axis::Column ? "column" : "row"; }

Side side_from_string(std::string_view s) {
    for (Side side : kSides) {
        if (to_string(side) == s) return side;
    }
    throw Error(ErrorCode::ParseError, "unknown side '" + std::string(s) + "'");
}

Direction direction_from_string(std::string_view s) {
    for (Direction d : {Direction::Left, Direction::Right, Direction::Up, Direction::Down}) {
        if (to_string(d) == s) return d;
    }
    throw Error(ErrorCode::ParseError, "unknown direction '" + std::string(s) + "'");
}

Axis axis_from_string(std::string_view s) {
    if (s == "column") return Axis::Column;
    if (s == "row") return Axis::Row;
    throw Error(ErrorCode::ParseError, "unknown axis '" + std::string(s) + "'");
}

std::array<Point, 2> side_endpoints(Point c, Side side) {
    switch (side) {
    case Side::Bottom: return {Point{c.x, c.y}, Point{c.x + 1, c.y}};
    case Side::Right: return {Point{c.x + 1, c.y}, Point{c.x + 1, c.y + 1}};
    case Side::Top: return {Point{c.x + 1, c.y + 1}, Point{c.x, c.y + 1}};
    case Side::Left: return {Point{c.x, c.y + 1}, Point{c.x, c.y}};
    }
    return {c, c};
}

int64_t signed_area2(const std::vector<Point>& loop) {
    int64_t acc = 0;
    for (size_t i = 0; i < loop.size(); ++i) {
        const Point& a = loop[i];
        const Point& b = loop[(i + 1) % loop.size()];
        acc += static_cast<int64_t>(a.x) * b.y - static_cast<int64_t>(b.x) * a.y;
    }
    return acc;
}

namespace {

int sgn(int v) { return (v > 0) - (v < 0); }

// Drops vertices where the loop continues straight; returns false on a reversal (spike).
bool drop_collinear(std::vector<Point>& loop) {
    bool changed = true;
    while (changed && loop.size() >= 3) {
        changed = false;
        for (size_t i = 0; i < loop.size(); ++i) {
            const Point& prev = loop[(i + loop.size() - 1) % loop.size()];
            const Point& cur = loop[i];
            const Point& next = loop[(i + 1) % loop.size()];
            Point d1{sgn(cur.x - prev.x), sgn(cur.y - prev.y)};
            Point d2{sgn(next.x - cur.x), sgn(next.y - cur.y)};
            if (d1 == d2) {
                loop.erase(loop.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
            if (d1.x == -d2.x && d1.y == -d2.y) return false;
        }
    }
    return true;
}

void rotate_to_lowest(std::vector<Point>& loop) {
    auto lowest = std::min_element(loop.begin(), loop.end(), [](const Point& a, const Point& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });
    std::rotate(loop.begin(), lowest, loop.end());
}

struct Seg {
    Point a, b;
};

bool on_segment(const Seg& s, Point p) {
    return std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) &&
           std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
}

bool segments_touch(const Seg& s, const Seg& t) {
    bool s_h = s.a.y == s.b.y;
    bool t_h = t.a.y == t.b.y;
    if (s_h == t_h) {
        if (s_h && s.a.y != t.a.y) return false;
        if (!s_h && s.a.x != t.a.x) return false;
        return on_segment(s, t.a) || on_segment(s, t.b) || on_segment(t, s.a) || on_segment(t, s.b);
    }
    const Seg& h = s_h ? s : t;
    const Seg& v = s_h ? t : s;
    Point cross{v.a.x, h.a.y};
    return on_segment(h, cross) && on_segment(v, cross);
}

}  // namespace

std::vector<Point> normalize_outline(const std::vector<Point>& outline) {
    std::vector<Point> loop;
    for (const Point& p : outline) {
        if (loop.empty() || loop.back() != p) loop.push_back(p);
    }
    if (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    if (loop.size() < 4) throw Error(ErrorCode::NotClosed, "outline needs at least four vertices");
    for (size_t i = 0; i + 1 < loop.size(); ++i) {
        const Point& a = loop[i];
        const Point& b = loop[i + 1];
        if (a.x != b.x && a.y != b.y) {
            throw Error(ErrorCode::OffGrid, "outline segment is not axis-aligned");
        }
    }
    if (loop.back().x != loop.front().x && loop.back().y != loop.front().y) {
        throw Error(ErrorCode::NotClosed, "closing segment is not axis-aligned");
    }
    if (!drop_collinear(loop) || loop.size() < 4) {
        throw Error(ErrorCode::SelfIntersecting, "outline doubles back on itself");
    }
    size_t n = loop.size();
    for (size_t i = 0; i < n; ++i) {
        Seg s{loop[i], loop[(i + 1) % n]};
        for (size_t j = i + 1; j < n; ++j) {
            bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if (adjacent) continue;
            Seg t{loop[j], loop[(j + 1) % n]};
            if (segments_touch(s, t)) {
                throw Error(ErrorCode::SelfIntersecting, "outline crosses or touches itself");
            }
        }
    }
    int64_t area = signed_area2(loop);
    if (area == 0) throw Error(ErrorCode::SelfIntersecting, "outline encloses no area");
    if (area < 0) std::reverse(loop.begin(), loop.end());
    rotate_to_lowest(loop);
    return loop;
}

std::vector<Point> rasterize(const std::vector<Point>& outline) {
    if (outline.empty()) return {};
    int x0 = outline[0].x, x1 = x0, y0 = outline[0].y, y1 = y0;
    for (const Point& p : outline) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    std::vector<Point> cells;
    size_t n = outline.size();
    for (int y = y0; y < y1; ++y) {
        // Vertical edges crossing the row's center line, sorted by x; cells between odd/even pairs.
        std::vector<int> xs;
        for (size_t i = 0; i < n; ++i) {
            const Point& a = outline[i];
            const Point& b = outline[(i + 1) % n];
            if (a.x != b.x) continue;
            if (std::min(a.y, b.y) <= y && y < std::max(a.y, b.y)) xs.push_back(a.x);
        }
        std::sort(xs.begin(), xs.end());
        for (size_t k = 0; k + 1 < xs.size(); k += 2) {
            for (int x = xs[k]; x < xs[k + 1]; ++x) cells.push_back({x, y});
        }
    }
    std::sort(cells.begin(), cells.end());
    return cells;
}

std::vector<std::vector<Point>> trace_boundary(const std::vector<Point>& cells) {
    std::set<Point> present(cells.begin(), cells.end());
    std::multimap<Point, Point> out_edges;
    for (const Point& c : cells) {
        for (Side s : kSides) {
            if (present.count(c + side_offset(s))) continue;
            auto ends = side_endpoints(c, s);
            out_edges.emplace(ends[0], ends[1]);
        }
    }
    std::vector<std::vector<Point>> loops;
    while (!out_edges.empty()) {
        auto start_it = out_edges.begin();
        Point start = start_it->first;
        Point cur = start_it->second;
        out_edges.erase(start_it);
        std::vector<Point> loop{start};
        Point prev = start;
        while (cur != start) {
            loop.push_back(cur);
            Point dir{sgn(cur.x - prev.x), sgn(cur.y - prev.y)};
            Point left{-dir.y, dir.x};
            Point right{dir.y, -dir.x};
            auto range = out_edges.equal_range(cur);
            auto pick = range.second;
            for (Point want : {left, dir, right}) {
                for (auto it = range.first; it != range.second; ++it) {
                    Point d{sgn(it->second.x - cur.x), sgn(it->second.y - cur.y)};
                    if (d == want) {
                        pick = it;
                        break;
                    }
                }
                if (pick != range.second) break;
            }
            if (pick == range.second) break;
            prev = cur;
            cur = pick->second;
            out_edges.erase(pick);
        }
        drop_collinear(loop);
        rotate_to_lowest(loop);
        loops.push_back(std::move(loop));
    }
    std::stable_sort(loops.begin(), loops.end(), [](const auto& a, const auto& b) {
        return signed_area2(a) > signed_area2(b);
    });
    return loops;
}

std::vector<std::vector<Point>> connected_components(const std::vector<Point>& cells) {
    std::set<Point> remaining(cells.begin(), cells.end());
    std::vector<std::vector<Point>> comps;
    while (!remaining.empty()) {
        std::vector<Point> comp;
        std::queue<Point> q;
        q.push(*remaining.begin());
        remaining.erase(remaining.begin());
        while (!q.empty()) {
            Point c = q.front();
            q.pop();
            comp.push_back(c);
            for (Side s : kSides) {
                auto it = remaining.find(c + side_offset(s));
                if (it == remaining.end()) continue;
                q.push(*it);
                remaining.erase(it);
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

bool is_connected(const std::vector<Point>& cells) {
    return cells.empty() || connected_components(cells).size() == 1;
}

}  // namespace garmod
