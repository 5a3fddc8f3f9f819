#pragma once

// Random patterns and random edit sequences for invariant checks.

#include <random>
#include <string>
#include <vector>

#include "garmod/edit_engine.hpp"
#include "garmod/pattern.hpp"

namespace garmod::fuzz {

inline std::vector<Point> rect(int x, int y, int w, int h) {
    return {{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}};
}

// One to three rectangular panels in a row or column, neighbours stitched along shared
// spans of equal length, sometimes with an L-shaped first panel.
inline Pattern random_pattern(std::mt19937& rng) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    Pattern p = new_pattern({});
    int n = pick(1, 3);
    bool vertical = pick(0, 1) == 1;
    std::vector<int> ids;
    std::vector<std::pair<int, int>> dims;
    bool l_shaped = false;
    int offset = 0;
    for (int i = 0; i < n; ++i) {
        int w = pick(2, 5), h = pick(2, 5);
        Point o = vertical ? Point{0, offset} : Point{offset, 0};
        if (i == 0 && w >= 3 && h >= 3 && pick(0, 2) == 0) {
            l_shaped = true;
            ids.push_back(add_panel(p, {o, {o.x + w, o.y}, {o.x + w, o.y + 1}, {o.x + 1, o.y + 1},
                                        {o.x + 1, o.y + h}, {o.x, o.y + h}}));
        } else {
            ids.push_back(add_panel(p, rect(o.x, o.y, w, h)));
        }
        dims.emplace_back(w, h);
        offset += (vertical ? h : w) + 1;
    }
    begin_stitching(p);
    offset = 0;
    for (int i = 0; i + 1 < n; ++i) {
        auto [w0, h0] = dims[i];
        auto [w1, h1] = dims[i + 1];
        int next = offset + (vertical ? h0 : w0) + 1;
        int span = vertical ? std::min(w0, w1) : std::min(h0, h1);
        if (i == 0 && l_shaped) span = 1;
        span = pick(1, span);
        if (vertical) {
            int top = offset + h0;
            stitch_span(p, ids[i], {span, top}, {0, top}, ids[i + 1], {0, next}, {span, next});
        } else {
            int right = offset + w0;
            stitch_span(p, ids[i], {right, 0}, {right, span}, ids[i + 1], {next, span}, {next, 0});
        }
        offset = next;
    }
    enter_features_phase(p);
    return p;
}

// A random edit aimed at existing geometry so that a fair share gets accepted.
inline FeatureRecord random_edit(const Pattern& p, std::mt19937& rng) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    FeatureRecord f;
    const Panel& panel = p.panels[static_cast<size_t>(pick(0, static_cast<int>(p.panels.size()) - 1))];
    const Cell& cell = panel.cells[static_cast<size_t>(pick(0, static_cast<int>(panel.cells.size()) - 1))];
    f.panel = panel.id;
    f.cell = cell.pos;
    static const Direction dirs[] = {Direction::Left, Direction::Right, Direction::Up, Direction::Down};
    f.direction = dirs[pick(0, 3)];
    f.axis = pick(0, 1) ? Axis::Column : Axis::Row;
    f.strip_side = pick(0, 1) ? StripSide::After : StripSide::Before;
    int kind = pick(0, 9);
    if (kind <= 1 && !p.seams.empty()) {
        const Seam& s = p.seams[static_cast<size_t>(pick(0, static_cast<int>(p.seams.size()) - 1))];
        f.kind = FeatureKind::Gather;
        f.seam = s.id;
        f.seam_side = pick(0, 1) ? SeamSideId::A : SeamSideId::B;
    } else if (kind == 2) {
        f.kind = FeatureKind::ConvertPleat;
    } else if (kind == 3) {
        f.kind = FeatureKind::InsertPleat;
    } else if (kind == 4) {
        f.kind = FeatureKind::Dart;
        f.cell = cell.pos + Point{pick(0, 1), pick(0, 1)};
        f.dart_orientation = pick(0, 1) ? DartOrientation::Vertical : DartOrientation::Horizontal;
        static const double widths[] = {4.0, 8.0, 12.0, 16.0};
        f.width = widths[pick(0, 3)];
        f.height = 8.0 * pick(1, 3);
    } else if (kind <= 6) {
        f.kind = FeatureKind::InsertStrip;
    } else if (kind == 7) {
        f.kind = FeatureKind::DeleteStrip;
    } else {
        f.kind = pick(0, 1) ? FeatureKind::ResolveDelete : FeatureKind::ResolveExpand;
        f.segment = panel.segments[static_cast<size_t>(pick(0, static_cast<int>(panel.segments.size()) - 1))].id;
    }
    return f;
}

}  // namespace garmod::fuzz
