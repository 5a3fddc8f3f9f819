#include "garmod/edit_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace garmod {

std::string_view to_string(EditStatus status) {
    return status == EditStatus::Accepted ? "accepted" : "rejected";
}

std::vector<Side> folded_sides(Direction dir) {
    if (is_horizontal(dir)) return {Side::Bottom, Side::Top};
    return {Side::Right, Side::Left};
}

// ---- diffs ----

GridDiff diff_patterns(const Pattern& before, const Pattern& after) {
    GridDiff d;
    d.revision_before = before.revision;
    d.revision_after = after.revision;
    for (const Panel& pa : after.panels) {
        const Panel* pb = nullptr;
        for (const Panel& c : before.panels) {
            if (c.id == pa.id) pb = &c;
        }
        PanelDiff pd;
        pd.panel = pa.id;
        pd.outline = pa.outline;
        std::map<int, const Cell*> old_cells;
        std::map<int, const Segment*> old_segs;
        if (pb) {
            for (const Cell& c : pb->cells) old_cells[c.id] = &c;
            for (const Segment& s : pb->segments) old_segs[s.id] = &s;
        }
        for (const Cell& c : pa.cells) {
            auto it = old_cells.find(c.id);
            if (it == old_cells.end() || !(*it->second == c)) pd.cells_upserted.push_back(c);
            if (it != old_cells.end()) old_cells.erase(it);
        }
        for (const auto& [id, c] : old_cells) pd.cells_removed.push_back(id);
        for (const Segment& s : pa.segments) {
            auto it = old_segs.find(s.id);
            if (it == old_segs.end() || !(*it->second == s)) pd.segments_upserted.push_back(s);
            if (it != old_segs.end()) old_segs.erase(it);
        }
        for (const auto& [id, s] : old_segs) pd.segments_removed.push_back(id);
        bool outline_changed = !pb || pb->outline != pa.outline;
        if (outline_changed || !pd.cells_upserted.empty() || !pd.cells_removed.empty() ||
            !pd.segments_upserted.empty() || !pd.segments_removed.empty()) {
            d.panels.push_back(std::move(pd));
        }
    }
    for (const Seam& s : after.seams) {
        bool same = false;
        for (const Seam& o : before.seams) {
            if (o.id == s.id) same = o == s;
        }
        if (!same) d.seams.push_back(s);
    }
    for (const Dart& dart : after.darts) {
        bool same = false;
        for (const Dart& o : before.darts) {
            if (o.id == dart.id) same = o == dart;
        }
        if (!same) d.darts_upserted.push_back(dart);
    }
    for (size_t i = before.features.size(); i < after.features.size(); ++i) {
        d.features_added.push_back(after.features[i]);
    }
    d.next_cell_id = after.next_cell_id;
    d.next_segment_id = after.next_segment_id;
    d.next_dart_id = after.next_dart_id;
    return d;
}

void apply_diff(Pattern& p, const GridDiff& d) {
    if (p.revision != d.revision_before) {
        throw Error(ErrorCode::InvalidArgument, "diff starts at revision " + std::to_string(d.revision_before) +
                                                    ", pattern is at " + std::to_string(p.revision));
    }
    for (const PanelDiff& pd : d.panels) {
        Panel& panel = p.panel(pd.panel);
        panel.outline = pd.outline;
        std::set<int> gone(pd.cells_removed.begin(), pd.cells_removed.end());
        std::erase_if(panel.cells, [&](const Cell& c) { return gone.count(c.id) > 0; });
        for (const Cell& c : pd.cells_upserted) {
            auto it = std::find_if(panel.cells.begin(), panel.cells.end(), [&](const Cell& x) { return x.id == c.id; });
            if (it == panel.cells.end()) panel.cells.push_back(c);
            else *it = c;
        }
        std::set<int> gone_segs(pd.segments_removed.begin(), pd.segments_removed.end());
        std::erase_if(panel.segments, [&](const Segment& s) { return gone_segs.count(s.id) > 0; });
        for (const Segment& s : pd.segments_upserted) {
            auto it = std::find_if(panel.segments.begin(), panel.segments.end(),
                                   [&](const Segment& x) { return x.id == s.id; });
            if (it == panel.segments.end()) panel.segments.push_back(s);
            else *it = s;
        }
        panel.reindex();
    }
    for (const Seam& s : d.seams) p.seam(s.id) = s;
    for (const Dart& dart : d.darts_upserted) {
        auto it = std::find_if(p.darts.begin(), p.darts.end(), [&](const Dart& x) { return x.id == dart.id; });
        if (it == p.darts.end()) p.darts.push_back(dart);
        else *it = dart;
    }
    std::sort(p.darts.begin(), p.darts.end(), [](const Dart& a, const Dart& b) { return a.id < b.id; });
    p.features.insert(p.features.end(), d.features_added.begin(), d.features_added.end());
    p.next_cell_id = d.next_cell_id;
    p.next_segment_id = d.next_segment_id;
    p.next_dart_id = d.next_dart_id;
    p.revision = d.revision_after;
}

namespace {

using CellPair = std::pair<int, int>;
using SideKey = std::pair<int, Side>;

CellPair ordered(int a, int b) { return a < b ? CellPair{a, b} : CellPair{b, a}; }

Side side_toward(Point offset) {
    for (Side s : kSides) {
        if (side_offset(s) == offset) return s;
    }
    throw Error(ErrorCode::InvalidArgument, "offset is not a unit step");
}

std::set<CellPair> adjacency(const std::map<int, Point>& pos) {
    std::map<Point, int> at;
    for (const auto& [id, p] : pos) at[p] = id;
    std::set<CellPair> out;
    for (const auto& [id, p] : pos) {
        for (Point off : {Point{1, 0}, Point{0, 1}}) {
            auto it = at.find(p + off);
            if (it != at.end()) out.insert(ordered(id, it->second));
        }
    }
    return out;
}

std::set<SideKey> exposed_sides(const std::map<int, Point>& pos) {
    std::set<Point> occupied;
    for (const auto& [id, p] : pos) occupied.insert(p);
    std::set<SideKey> out;
    for (const auto& [id, p] : pos) {
        for (Side s : kSides) {
            if (!occupied.count(p + side_offset(s))) out.insert({id, s});
        }
    }
    return out;
}

bool unique_positions(const std::map<int, Point>& pos) {
    std::set<Point> seen;
    for (const auto& [id, p] : pos) {
        if (!seen.insert(p).second) return false;
    }
    return true;
}

bool folds_away(Direction dir, Side side) {
    auto sides = folded_sides(dir);
    return std::find(sides.begin(), sides.end(), side) != sides.end();
}

Point along_of(Axis axis) { return axis == Axis::Column ? Point{0, 1} : Point{1, 0}; }
Point across_of(Axis axis) { return axis == Axis::Column ? Point{1, 0} : Point{0, 1}; }

// Axis of the strip perpendicular to a boundary side.
Axis strip_axis_for(Side side) {
    return side == Side::Bottom || side == Side::Top ? Axis::Column : Axis::Row;
}

std::vector<int> strip_run(const Panel& panel, Point at, Point along) {
    if (!panel.cell_at(at)) {
        throw Error(ErrorCode::UnknownCell, "no cell at (" + std::to_string(at.x) + "," + std::to_string(at.y) + ")");
    }
    Point start = at;
    while (panel.cell_at(start - along)) start = start - along;
    std::vector<int> ids;
    for (Point q = start; panel.cell_at(q); q = q + along) ids.push_back(panel.cell_at(q)->id);
    return ids;
}

// Cells reachable from the strip's neighbours on the `toward` side without crossing the strip.
std::set<int> flood_beyond(const Panel& panel, const std::vector<int>& strip, Point toward) {
    std::set<int> in_strip(strip.begin(), strip.end());
    std::set<int> seen;
    std::vector<const Cell*> stack;
    for (int id : strip) {
        const Cell* n = panel.cell_at(panel.cell_by_id(id)->pos + toward);
        if (n && !in_strip.count(n->id) && seen.insert(n->id).second) stack.push_back(n);
    }
    while (!stack.empty()) {
        const Cell* c = stack.back();
        stack.pop_back();
        for (Side s : kSides) {
            const Cell* n = panel.neighbor(*c, s);
            if (n && !in_strip.count(n->id) && seen.insert(n->id).second) stack.push_back(n);
        }
    }
    return seen;
}

void shift_dart_anchors(Pattern& w, int pid, const std::set<int>& moved, Point shift) {
    for (Dart& d : w.darts) {
        if (d.panel != pid) continue;
        bool hit = false;
        for (const DartModule& m : d.modules) {
            for (const DartHalf* h : {&m.first, &m.second}) {
                if (h->panel != pid) continue;
                for (int c : h->cells) hit |= moved.count(c) > 0;
            }
        }
        if (hit) d.anchor = d.anchor + shift;
    }
}

std::vector<int>& seam_side_list(Seam& s, int segment_id) {
    if (std::find(s.side_a.begin(), s.side_a.end(), segment_id) != s.side_a.end()) return s.side_a;
    return s.side_b;
}

bool seam_gathered(const Seam& s) {
    for (const auto& side : {s.side_a, s.side_b}) {
        for (int id : side) {
            if (s.matching.match_count(id) > 1) return true;
        }
    }
    return false;
}

struct Grown {
    std::vector<int> strip;
    std::vector<int> dups;  // aligned with strip
    int end_lo = -1, end_hi = -1;
    int like_lo = -1, like_hi = -1;  // boundary segments the new end segments copy
    std::set<int> seams;             // seams that gained a segment
};

// Duplicates the strip through `at` and shifts the cells beyond it by one unit.
Grown grow_strip(Pattern& w, int pid, Point at, Axis axis, StripSide side) {
    Panel& panel = w.panel(pid);
    Point along = along_of(axis);
    Point shift = side == StripSide::After ? across_of(axis) : -1 * across_of(axis);
    Side shift_side = side_toward(shift);
    Side lo_side = side_toward(-1 * along), hi_side = side_toward(along);

    Grown g;
    g.strip = strip_run(panel, at, along);
    for (int id : g.strip) {
        if (panel.cell_by_id(id)->kind == CellKind::DartHole) {
            throw Error(ErrorCode::FeatureInWay, "strip passes through a dart");
        }
    }
    const Segment* like_lo = panel.segment_on(g.strip.front(), lo_side);
    const Segment* like_hi = panel.segment_on(g.strip.back(), hi_side);
    if (!like_lo || !like_hi) throw Error(ErrorCode::DisconnectionHazard, "strip ends are not on the boundary");
    int like_lo_id = like_lo->id, like_hi_id = like_hi->id;
    g.like_lo = like_lo_id;
    g.like_hi = like_hi_id;

    std::set<int> moved = flood_beyond(panel, g.strip, shift);
    std::map<int, Point> old_pos, new_pos;
    for (const Cell& c : panel.cells) {
        old_pos[c.id] = c.pos;
        new_pos[c.id] = moved.count(c.id) ? c.pos + shift : c.pos;
    }
    std::map<int, int> dup_of;
    for (int id : g.strip) {
        int d = w.next_cell_id++;
        dup_of[id] = d;
        g.dups.push_back(d);
        new_pos[d] = old_pos[id] + shift;
    }
    if (!unique_positions(new_pos)) {
        throw Error(ErrorCode::DisconnectionHazard, "shifted cells would overlap the panel");
    }
    std::set<CellPair> expect = adjacency(old_pos);
    for (int id : g.strip) {
        int d = dup_of[id];
        if (const Cell* b = panel.cell_at(old_pos[id] + shift)) {
            expect.erase(ordered(id, b->id));
            expect.insert(ordered(d, b->id));
        }
        expect.insert(ordered(id, d));
    }
    for (size_t i = 0; i + 1 < g.dups.size(); ++i) expect.insert(ordered(g.dups[i], g.dups[i + 1]));
    if (adjacency(new_pos) != expect) {
        throw Error(ErrorCode::DisconnectionHazard, "strip insertion would change which cells touch");
    }

    std::set<int> in_strip(g.strip.begin(), g.strip.end());
    std::set<SideKey> mapped;
    for (Segment& s : panel.segments) {
        if (in_strip.count(s.cell_id) && s.side == shift_side) {
            // The duplicate is plain foundation, so a side the pleat had folded away reopens.
            if (!s.active) {
                s.active = true;
                if (s.seam_id >= 0) g.seams.insert(s.seam_id);
            }
            s.cell_id = dup_of[s.cell_id];
        }
        mapped.insert({s.cell_id, s.side});
    }
    std::set<SideKey> required = exposed_sides(new_pos);
    std::set<SideKey> missing;
    for (const SideKey& k : required) {
        if (!mapped.count(k)) missing.insert(k);
    }
    bool extra = false;
    for (const SideKey& k : mapped) extra |= !required.count(k);
    std::set<SideKey> ends{{g.dups.front(), lo_side}, {g.dups.back(), hi_side}};
    if (extra || missing != ends) {
        throw Error(ErrorCode::DisconnectionHazard, "strip insertion would break the panel boundary");
    }

    for (Cell& c : panel.cells) c.pos = new_pos[c.id];
    for (int id : g.strip) {
        Cell nc;
        nc.id = dup_of[id];
        nc.pos = new_pos[nc.id];
        panel.cells.push_back(nc);
    }
    std::vector<std::pair<int, int>> joins;  // new segment, segment whose seam it joins
    for (auto [dup, sd, like] : {std::tuple{g.dups.front(), lo_side, like_lo_id},
                                 std::tuple{g.dups.back(), hi_side, like_hi_id}}) {
        Segment ns;
        ns.id = w.next_segment_id++;
        ns.cell_id = dup;
        ns.side = sd;
        panel.segments.push_back(ns);
        (sd == lo_side ? g.end_lo : g.end_hi) = ns.id;
        joins.emplace_back(ns.id, like);
    }
    shift_dart_anchors(w, pid, moved, shift);
    panel.reindex();
    for (auto [ns, like] : joins) {
        int seam_id = panel.segment_by_id(like)->seam_id;
        if (seam_id < 0) continue;
        Seam& s = w.seam(seam_id);
        seam_side_list(s, like).push_back(ns);
        panel.segment_by_id(ns)->seam_id = seam_id;
        g.seams.insert(seam_id);
    }
    return g;
}

// Removes the strip through `at` and pulls the cells on its far side back by one unit.
std::set<int> shrink_strip(Pattern& w, int pid, Point at, Axis axis) {
    Panel& panel = w.panel(pid);
    Point along = along_of(axis), across = across_of(axis);
    Side neg_side = side_toward(-1 * across), pos_side = side_toward(across);

    std::vector<int> strip = strip_run(panel, at, along);
    for (int id : strip) {
        if (panel.cell_by_id(id)->kind != CellKind::Foundation) {
            throw Error(ErrorCode::FeatureInWay, "strip carries a pleat or dart");
        }
    }
    if (strip.size() == panel.cells.size()) {
        throw Error(ErrorCode::DisconnectionHazard, "deleting the strip would remove the panel");
    }
    std::set<int> in_strip(strip.begin(), strip.end());
    std::set<int> moved = flood_beyond(panel, strip, across);
    std::map<int, Point> old_pos, new_pos;
    for (const Cell& c : panel.cells) {
        old_pos[c.id] = c.pos;
        if (!in_strip.count(c.id)) new_pos[c.id] = moved.count(c.id) ? c.pos - across : c.pos;
    }
    if (!unique_positions(new_pos)) {
        throw Error(ErrorCode::DisconnectionHazard, "shifted cells would overlap the panel");
    }
    std::vector<Point> remaining;
    for (const auto& [id, p] : new_pos) remaining.push_back(p);
    if (!is_connected(remaining)) throw Error(ErrorCode::DisconnectionHazard, "deleting the strip splits the panel");

    std::set<CellPair> expect;
    for (const CellPair& pr : adjacency(old_pos)) {
        if (!in_strip.count(pr.first) && !in_strip.count(pr.second)) expect.insert(pr);
    }
    for (int id : strip) {
        const Cell* l = panel.cell_at(old_pos[id] - across);
        const Cell* a = panel.cell_at(old_pos[id] + across);
        if (l && a) expect.insert(ordered(l->id, a->id));
    }
    if (adjacency(new_pos) != expect) {
        throw Error(ErrorCode::DisconnectionHazard, "strip deletion would change which cells touch");
    }

    std::set<int> removed, seams;
    std::set<SideKey> mapped;
    for (Segment& s : panel.segments) {
        if (in_strip.count(s.cell_id)) {
            Point p = old_pos[s.cell_id];
            if (s.side == neg_side || s.side == pos_side) {
                Point other = s.side == neg_side ? p + across : p - across;
                const Cell* c = panel.cell_at(other);
                if (!c) throw Error(ErrorCode::DisconnectionHazard, "strip is a one-cell-wide bridge");
                s.cell_id = c->id;
                if (c->kind == CellKind::Pleat && folds_away(c->pleat_dir, s.side)) {
                    s.active = false;
                    if (s.seam_id >= 0) seams.insert(s.seam_id);
                }
            } else {
                removed.insert(s.id);
                if (s.seam_id >= 0) seams.insert(s.seam_id);
                continue;
            }
        }
        mapped.insert({s.cell_id, s.side});
    }
    if (mapped != exposed_sides(new_pos)) {
        throw Error(ErrorCode::DisconnectionHazard, "strip deletion would break the panel boundary");
    }
    for (int sid : removed) {
        int seam_id = panel.segment_by_id(sid)->seam_id;
        if (seam_id < 0) continue;
        Seam& s = w.seam(seam_id);
        std::erase(s.side_a, sid);
        std::erase(s.side_b, sid);
    }
    std::erase_if(panel.segments, [&](const Segment& s) { return removed.count(s.id) > 0; });
    std::erase_if(panel.cells, [&](const Cell& c) { return in_strip.count(c.id) > 0; });
    for (Cell& c : panel.cells) c.pos = new_pos[c.id];
    shift_dart_anchors(w, pid, moved, -1 * across);
    panel.reindex();
    return seams;
}

// Re-sorts every seam of the panels and rematches the given seams against their
// pre-edit matchings. Failures surface with `failure` as the reason.
void settle_seams(Pattern& w, const Pattern& before, const std::set<int>& rematch, ErrorCode failure) {
    for (Seam& s : w.seams) reorder_seam(w, s);
    for (int id : rematch) {
        Seam& s = w.seam(id);
        try {
            s.matching = rebalance(before.seam(id).matching, active_ids(w, s.side_a), active_ids(w, s.side_b));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::RatioViolation) throw Error(failure, e.detail());
            throw;
        }
    }
}

// Each doubled segment takes its twin's partner, so the gather sits exactly opposite the
// strips that grew. Falls back to the minimal rebalance when that is not a valid matching.
void double_matches(const Pattern& w, Seam& seam, const SeamMatching& previous, const std::vector<std::pair<int, int>>& twins) {
    std::map<int, size_t> ord_a, ord_b;
    for (size_t i = 0; i < seam.side_a.size(); ++i) ord_a[seam.side_a[i]] = i;
    for (size_t i = 0; i < seam.side_b.size(); ++i) ord_b[seam.side_b[i]] = i;
    std::vector<std::pair<int, int>> pairs = previous.pairs;
    for (auto [fresh, twin] : twins) {
        for (auto [a, b] : previous.pairs) {
            if (a == twin) pairs.emplace_back(fresh, b);
            if (b == twin) pairs.emplace_back(a, fresh);
        }
    }
    std::sort(pairs.begin(), pairs.end(), [&](const auto& x, const auto& y) {
        return std::pair{ord_a[x.first], ord_b[x.second]} < std::pair{ord_a[y.first], ord_b[y.second]};
    });
    SeamMatching doubled{pairs};
    auto a = active_ids(w, seam.side_a);
    auto b = active_ids(w, seam.side_b);
    if (matching_violations(doubled, a, b).empty()) {
        seam.matching = doubled;
        return;
    }
    seam.matching = rebalance(previous, a, b);
}

void check_fold_target(const Panel& panel, const Cell& cell, Direction dir) {
    Side ts = side_of(dir);
    if (const Cell* n = panel.neighbor(cell, ts)) {
        if (n->kind == CellKind::DartHole) throw Error(ErrorCode::InfeasibleFold, "pleat would fold onto a dart");
        return;
    }
    const Segment* seg = panel.segment_on(cell.id, ts);
    if (!seg || seg->seam_id < 0) {
        throw Error(ErrorCode::InfeasibleFold, "nothing to fold onto in direction " + std::string(to_string(dir)));
    }
}

void refresh_outlines(Pattern& w, const Pattern& before) {
    for (Panel& panel : w.panels) {
        const Panel& old = before.panel(panel.id);
        if (old.cell_positions() == panel.cell_positions()) continue;
        auto loops = trace_boundary(panel.cell_positions());
        if (!loops.empty()) panel.outline = loops.front();
    }
}

template <class Body>
EditResult run_edit(Pattern& p, FeatureRecord record, Body&& body) {
    EditResult r;
    try {
        if (p.phase != Phase::Features) {
            throw Error(ErrorCode::PhaseViolation, "feature edits need the features phase");
        }
        int level = feature_level(record.kind);
        for (int l = level + 1; l <= 3; ++l) {
            if (p.has_feature_level(l)) {
                throw Error(ErrorCode::OrderViolation,
                            "features go gathers, then pleats, then darts; this pattern already has " +
                                std::string(l == 2 ? "pleats" : "darts"));
            }
        }
        Pattern w = p;
        r.case_label = body(w);
        refresh_outlines(w, p);
        w.revision = p.revision + 1;
        record.revision = w.revision;
        w.features.push_back(record);
        r.diff = diff_patterns(p, w);
        for (const Seam& s : w.seams) {
            const Seam& old = p.seam(s.id);
            if (old == s) continue;
            r.affected_seams.push_back(s.id);
            std::set<std::pair<int, int>> a(old.matching.pairs.begin(), old.matching.pairs.end());
            std::set<std::pair<int, int>> b(s.matching.pairs.begin(), s.matching.pairs.end());
            MatchingDiff md;
            md.seam = s.id;
            std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(md.removed));
            std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(md.added));
            if (!md.removed.empty() || !md.added.empty()) r.matching_diffs.push_back(std::move(md));
        }
        p = std::move(w);
    } catch (const Error& e) {
        r = EditResult{};
        r.status = EditStatus::Rejected;
        r.reason = e.code();
        r.message = e.detail();
    }
    return r;
}

FeatureRecord record_of(FeatureKind kind) {
    FeatureRecord f;
    f.kind = kind;
    return f;
}

}  // namespace

// ---- strips ----

EditResult insert_strip(Pattern& p, const StripLocator& strip, StripSide side) {
    FeatureRecord rec = record_of(FeatureKind::InsertStrip);
    rec.panel = strip.panel;
    rec.cell = strip.cell;
    rec.axis = strip.axis;
    rec.strip_side = side;
    const Pattern& before = p;
    return run_edit(p, rec, [&](Pattern& w) {
        Grown g = grow_strip(w, strip.panel, strip.cell, strip.axis, side);
        settle_seams(w, before, g.seams, ErrorCode::RatioViolation);
        return std::string();
    });
}

EditResult delete_strip(Pattern& p, const StripLocator& strip) {
    FeatureRecord rec = record_of(FeatureKind::DeleteStrip);
    rec.panel = strip.panel;
    rec.cell = strip.cell;
    rec.axis = strip.axis;
    const Pattern& before = p;
    return run_edit(p, rec, [&](Pattern& w) {
        std::set<int> seams = shrink_strip(w, strip.panel, strip.cell, strip.axis);
        settle_seams(w, before, seams, ErrorCode::RatioViolation);
        return std::string();
    });
}

// ---- gathers ----

EditResult gather_edge(Pattern& p, int seam_id, SeamSideId side) {
    FeatureRecord rec = record_of(FeatureKind::Gather);
    rec.seam = seam_id;
    rec.seam_side = side;
    const Pattern& before = p;
    return run_edit(p, rec, [&](Pattern& w) {
        Seam& seam = w.seam(seam_id);
        int pid = side == SeamSideId::A ? seam.panel_a : seam.panel_b;
        std::vector<int> e = side == SeamSideId::A ? seam.side_a : seam.side_b;
        if (e.empty()) throw Error(ErrorCode::NotInSeam, "seam side has no segments");
        if (seam_gathered(seam)) throw Error(ErrorCode::AlreadyGathered, "the seam is already gathered");
        Panel& panel = w.panel(pid);
        Side es = panel.segment_by_id(e.front())->side;
        std::set<int> line;
        for (int id : e) {
            const Segment* s = panel.segment_by_id(id);
            if (s->side != es || !s->active) throw Error(ErrorCode::InvalidArgument, "edge is not straight");
            Point q = panel.cell_by_id(s->cell_id)->pos;
            line.insert(es == Side::Bottom || es == Side::Top ? q.y : q.x);
        }
        if (line.size() != 1) throw Error(ErrorCode::InvalidArgument, "edge is not straight");

        Point inward = side_offset(opposite(es));
        std::vector<int> e_cells, f_segs;
        for (int id : e) {
            const Cell* c = panel.cell_by_id(panel.segment_by_id(id)->cell_id);
            e_cells.push_back(c->id);
            Point q = c->pos;
            while (panel.cell_at(q + inward)) q = q + inward;
            const Segment* f = panel.segment_on(panel.cell_at(q)->id, opposite(es));
            if (!f) throw Error(ErrorCode::DisconnectionHazard, "strip has no far end");
            f_segs.push_back(f->id);
        }
        std::set<int> f_seams;
        for (int id : f_segs) {
            int s = panel.segment_by_id(id)->seam_id;
            if (s >= 0) f_seams.insert(s);
        }
        for (int s : f_seams) {
            if (seam_gathered(w.seam(s))) {
                throw Error(ErrorCode::AlreadyGathered, "gathering would exceed the opposite edge's maximum length");
            }
        }
        std::string label = "1";
        if (!f_seams.empty()) {
            std::set<int> f_set(f_segs.begin(), f_segs.end());
            bool full = true;
            for (int s : f_seams) {
                Seam& fs = w.seam(s);
                const auto& mine = seam_side_list(fs, *std::find_if(f_segs.begin(), f_segs.end(), [&](int id) {
                    return panel.segment_by_id(id)->seam_id == s;
                }));
                for (int id : mine) full &= f_set.count(id) > 0;
            }
            label = full ? "3A" : "3B";
        }

        Axis axis = strip_axis_for(es);
        std::set<int> touched{seam_id};
        touched.insert(f_seams.begin(), f_seams.end());
        std::vector<std::pair<int, int>> twins;  // new end segment, segment it doubles
        for (int cid : e_cells) {
            Grown g = grow_strip(w, pid, panel.cell_by_id(cid)->pos, axis, StripSide::After);
            touched.insert(g.seams.begin(), g.seams.end());
            twins.emplace_back(g.end_lo, g.like_lo);
            twins.emplace_back(g.end_hi, g.like_hi);
        }
        settle_seams(w, before, {}, ErrorCode::RatioViolation);
        for (int id : touched) double_matches(w, w.seam(id), before.seam(id).matching, twins);
        return label;
    });
}

// ---- pleats ----

EditResult convert_to_pleat(Pattern& p, int pid, Point cell, Direction dir) {
    FeatureRecord rec = record_of(FeatureKind::ConvertPleat);
    rec.panel = pid;
    rec.cell = cell;
    rec.direction = dir;
    const Pattern& before = p;
    return run_edit(p, rec, [&](Pattern& w) {
        Panel& panel = w.panel(pid);
        const Cell* c = panel.cell_at(cell);
        if (!c) throw Error(ErrorCode::UnknownCell, "no cell at the pleat position");
        if (c->kind == CellKind::Pleat) throw Error(ErrorCode::AlreadyPleat, "cell is already a pleat");
        if (c->kind == CellKind::DartHole) throw Error(ErrorCode::InfeasibleFold, "cell belongs to a dart");
        check_fold_target(panel, *c, dir);
        Cell* mc = panel.cell_by_id(c->id);
        mc->kind = CellKind::Pleat;
        mc->pleat_dir = dir;
        std::set<int> touched;
        for (Side s : folded_sides(dir)) {
            const Segment* seg = panel.segment_on(mc->id, s);
            if (!seg || !seg->active) continue;
            Segment* ms = panel.segment_by_id(seg->id);
            ms->active = false;
            if (ms->seam_id >= 0) touched.insert(ms->seam_id);
        }
        settle_seams(w, before, touched, ErrorCode::InfeasibleFold);
        return std::string(touched.empty() ? "1" : "2");
    });
}

EditResult insert_pleat(Pattern& p, int pid, Point cell, Direction dir) {
    FeatureRecord rec = record_of(FeatureKind::InsertPleat);
    rec.panel = pid;
    rec.cell = cell;
    rec.direction = dir;
    const Pattern& before = p;
    return run_edit(p, rec, [&](Pattern& w) {
        Panel& panel = w.panel(pid);
        const Cell* c = panel.cell_at(cell);
        if (!c) throw Error(ErrorCode::UnknownCell, "no cell at the pleat position");
        int cid = c->id;
        Axis axis = is_horizontal(dir) ? Axis::Column : Axis::Row;
        Grown g = grow_strip(w, pid, cell, axis, StripSide::After);
        size_t k = static_cast<size_t>(std::find(g.strip.begin(), g.strip.end(), cid) - g.strip.begin());
        Cell* d = panel.cell_by_id(g.dups[k]);
        d->kind = CellKind::Pleat;
        d->pleat_dir = dir;
        for (Side s : folded_sides(dir)) {
            const Segment* seg = panel.segment_on(d->id, s);
            if (seg) panel.segment_by_id(seg->id)->active = false;
        }
        check_fold_target(panel, *d, dir);
        settle_seams(w, before, g.seams, ErrorCode::RatioViolation);
        bool changed = false;
        for (int s : g.seams) changed |= !(w.seam(s).matching == before.seam(s).matching);
        return std::string(changed ? "2" : "1");
    });
}

EditResult resolve_by_delete(Pattern& p, int segment) {
    FeatureRecord rec = record_of(FeatureKind::ResolveDelete);
    rec.segment = segment;
    const Pattern& before = p;
    return run_edit(p, rec, [&](Pattern& w) {
        Panel* panel = w.panel_of_segment(segment);
        if (!panel) throw Error(ErrorCode::UnknownSegment, "unknown segment " + std::to_string(segment));
        const Segment& s = *panel->segment_by_id(segment);
        if (!s.active || s.seam_id < 0) throw Error(ErrorCode::NotGathered, "segment is not in a gathered seam");
        const Seam& seam = w.seam(s.seam_id);
        auto partners = seam.matching.partners(segment);
        if (partners.size() != 1 || seam.matching.match_count(partners.front()) != 2) {
            throw Error(ErrorCode::NotGathered, "segment is not on the longer side of a gathered pair");
        }
        Point pos = panel->cell_by_id(s.cell_id)->pos;
        std::set<int> seams = shrink_strip(w, panel->id, pos, strip_axis_for(s.side));
        settle_seams(w, before, seams, ErrorCode::RatioViolation);
        return std::string("b");
    });
}

EditResult resolve_by_expand(Pattern& p, int segment) {
    FeatureRecord rec = record_of(FeatureKind::ResolveExpand);
    rec.segment = segment;
    const Pattern& before = p;
    return run_edit(p, rec, [&](Pattern& w) {
        Panel* panel = w.panel_of_segment(segment);
        if (!panel) throw Error(ErrorCode::UnknownSegment, "unknown segment " + std::to_string(segment));
        const Segment& s = *panel->segment_by_id(segment);
        if (!s.active || s.seam_id < 0 || w.seam(s.seam_id).matching.match_count(segment) != 2) {
            throw Error(ErrorCode::NotGathered, "segment does not carry a gathered pair");
        }
        Point pos = panel->cell_by_id(s.cell_id)->pos;
        Grown g = grow_strip(w, panel->id, pos, strip_axis_for(s.side), StripSide::After);
        settle_seams(w, before, g.seams, ErrorCode::RatioViolation);
        return std::string("c");
    });
}

// ---- darts ----

namespace {

// Local frame where the dart axis runs along +v; horizontal darts swap x and y.
struct DartFrame {
    bool vertical = true;
    Point global(int u, int v) const { return vertical ? Point{u, v} : Point{v, u}; }
    Side global(Side local) const {
        if (vertical) return local;
        switch (local) {
        case Side::Bottom: return Side::Left;
        case Side::Top: return Side::Right;
        case Side::Left: return Side::Bottom;
        case Side::Right: return Side::Top;
        }
        return local;
    }
};

struct CrossColumn {
    int panel = -1;
    std::vector<int> cells;     // aligned with the local column cells
    std::vector<int> own_segs;  // seam segments consumed on the anchor panel
    std::vector<int> far_segs;  // their partners
    int seam = -1;
};

// Follows the seam on the given local side of each cell to the partner panel's cells.
CrossColumn cross_seam(const Pattern& w, const Panel& panel, const std::vector<int>& cells, Side side) {
    CrossColumn out;
    for (int cid : cells) {
        const Segment* seg = panel.segment_on(cid, side);
        if (!seg) throw Error(ErrorCode::InsufficientSpace, "dart would extend beyond the panel boundary");
        if (seg->seam_id < 0) throw Error(ErrorCode::InsufficientSpace, "dart would extend beyond the panel boundary");
        if (out.seam >= 0 && seg->seam_id != out.seam) {
            throw Error(ErrorCode::InsufficientSpace, "dart would run past the end of the seam");
        }
        out.seam = seg->seam_id;
        const Seam& seam = w.seam(seg->seam_id);
        auto partners = seam.matching.partners(seg->id);
        if (!seg->active || partners.size() != 1 || seam.matching.match_count(partners.front()) != 1) {
            throw Error(ErrorCode::GatheredSeam, "dart cannot cross a gathered seam");
        }
        const Panel* other = w.panel_of_segment(partners.front());
        out.panel = other->id;
        out.cells.push_back(other->segment_by_id(partners.front())->cell_id);
        out.own_segs.push_back(seg->id);
        out.far_segs.push_back(partners.front());
    }
    return out;
}

void check_footprint(const Pattern& w, const std::vector<std::pair<int, int>>& cells) {
    for (auto [pid, cid] : cells) {
        const Cell* c = w.panel(pid).cell_by_id(cid);
        if (c && c->kind == CellKind::DartHole) throw Error(ErrorCode::DartOverlap, "dart would overlap another dart");
    }
    for (auto [pid, cid] : cells) {
        const Cell* c = w.panel(pid).cell_by_id(cid);
        if (!c || c->kind != CellKind::Foundation) {
            throw Error(ErrorCode::InsufficientSpace, "dart needs foundation cells across its footprint");
        }
    }
}

}  // namespace

EditResult add_dart(Pattern& p, int pid, Point anchor, DartOrientation orientation, double width_cm,
                    double height_cm) {
    FeatureRecord rec = record_of(FeatureKind::Dart);
    rec.panel = pid;
    rec.cell = anchor;
    rec.dart_orientation = orientation;
    rec.width = width_cm;
    rec.height = height_cm;
    const Pattern& before = p;
    return run_edit(p, rec, [&](Pattern& w) {
        const double unit = w.config.base_unit;
        if (!(width_cm > 0.0) || width_cm > 2.0 * unit + 1e-9) {
            throw Error(ErrorCode::InvalidArgument, "dart width must be in (0, 2 base units]");
        }
        double n_real = height_cm / unit;
        int n = static_cast<int>(std::lround(n_real));
        if (n < 1 || std::fabs(n_real - n) > 1e-9) {
            throw Error(ErrorCode::InvalidArgument, "dart height must be a positive multiple of the base unit");
        }
        bool universal = std::fabs(width_cm - unit) < 1e-9;
        bool full = std::fabs(width_cm - 2.0 * unit) < 1e-9;

        Panel& panel = w.panel(pid);
        DartFrame fr{orientation == DartOrientation::Vertical};
        int U = fr.vertical ? anchor.x : anchor.y;
        int V = fr.vertical ? anchor.y : anchor.x;
        auto at = [&](int u, int v) { return panel.cell_at(fr.global(u, v)); };
        bool lo_l = at(U - 1, V - 1), lo_r = at(U, V - 1), hi_l = at(U - 1, V), hi_r = at(U, V);
        int count = lo_l + lo_r + hi_l + hi_r;

        // Cells of a local column u over v in [v0, v0+len), listed starting from `narrow_v`.
        auto column = [&](int u, int v0, int len, bool narrow_at_low) {
            std::vector<int> ids;
            for (int k = 0; k < len; ++k) {
                int v = narrow_at_low ? v0 + k : v0 + len - 1 - k;
                const Cell* c = at(u, v);
                if (!c) throw Error(ErrorCode::InsufficientSpace, "dart would extend beyond the panel boundary");
                ids.push_back(c->id);
            }
            return ids;
        };

        Dart dart;
        dart.id = w.next_dart_id++;
        dart.panel = pid;
        dart.anchor = anchor;
        dart.orientation = orientation;
        dart.width = width_cm;
        dart.height = height_cm;
        std::set<int> touched;
        std::vector<std::pair<int, int>> footprint;
        std::vector<std::pair<int, int>> deactivate;  // panel, segment

        auto add_module = [&](DartHalf first, DartHalf second, Side narrow_local) {
            DartModule m{std::move(first), std::move(second), fr.global(narrow_local)};
            for (const DartHalf* h : {&m.first, &m.second}) {
                for (int c : h->cells) footprint.emplace_back(h->panel, c);
            }
            dart.modules.push_back(std::move(m));
        };

        if (count == 4) {
            dart.case_label = "A";
            add_module({pid, column(U - 1, V - n, n, false)}, {pid, column(U, V - n, n, false)}, Side::Top);
            add_module({pid, column(U - 1, V, n, true)}, {pid, column(U, V, n, true)}, Side::Bottom);
            check_footprint(w, footprint);
        } else if (count == 2 && ((hi_l && hi_r) || (lo_l && lo_r))) {
            // Narrow end on a boundary crossing the dart axis.
            bool up = hi_l && hi_r;
            int v0 = up ? V : V - n;
            Side narrow_local = up ? Side::Bottom : Side::Top;
            add_module({pid, column(U - 1, v0, n, up)}, {pid, column(U, v0, n, up)}, narrow_local);
            check_footprint(w, footprint);
            const DartModule& m = dart.modules.front();
            Side ns = fr.global(narrow_local);
            const Segment* s1 = panel.segment_on(m.first.cells.front(), ns);
            const Segment* s2 = panel.segment_on(m.second.cells.front(), ns);
            if (!s1 || !s2 || !s1->active || !s2->active) {
                throw Error(ErrorCode::DartSeamConflict, "narrow end does not lie on an open boundary");
            }
            if (s1->seam_id < 0 && s2->seam_id < 0) {
                dart.case_label = "E";
                if (universal || full) deactivate.emplace_back(pid, s2->id);
                if (full) deactivate.emplace_back(pid, s1->id);
            } else if (s1->seam_id >= 0 && s1->seam_id == s2->seam_id) {
                dart.case_label = "F";
                if (!universal) {
                    throw Error(ErrorCode::NonUniversalOnSeam,
                                "only a dart of width one base unit keeps a seamed narrow end aligned");
                }
                if (seam_gathered(w.seam(s1->seam_id))) {
                    throw Error(ErrorCode::GatheredSeam, "dart on a seam that is already gathered");
                }
                deactivate.emplace_back(pid, s2->id);
            } else {
                throw Error(ErrorCode::DartSeamConflict, "narrow end straddles a free edge and a seam");
            }
        } else if (count == 2 && ((hi_l && lo_l) || (hi_r && lo_r))) {
            // Anchor on a boundary along the dart axis: a diamond across the seam.
            dart.case_label = "B";
            bool left = hi_l && lo_l;
            int u = left ? U - 1 : U;
            Side toward = left ? Side::Right : Side::Left;
            std::vector<int> low = column(u, V - n, n, false), high = column(u, V, n, true);
            CrossColumn cl = cross_seam(w, panel, low, fr.global(toward));
            CrossColumn ch = cross_seam(w, panel, high, fr.global(toward));
            if (cl.panel != ch.panel || cl.seam != ch.seam) {
                throw Error(ErrorCode::InsufficientSpace, "dart would run past the end of the seam");
            }
            DartHalf own_lo{pid, low}, own_hi{pid, high}, far_lo{cl.panel, cl.cells}, far_hi{ch.panel, ch.cells};
            if (left) {
                add_module(own_lo, far_lo, Side::Top);
                add_module(own_hi, far_hi, Side::Bottom);
            } else {
                add_module(far_lo, own_lo, Side::Top);
                add_module(far_hi, own_hi, Side::Bottom);
            }
            check_footprint(w, footprint);
            for (const CrossColumn* cc : {&cl, &ch}) {
                for (int s : cc->own_segs) deactivate.emplace_back(pid, s);
                for (int s : cc->far_segs) deactivate.emplace_back(cc->panel, s);
            }
        } else if (count == 1) {
            // Corner: the two halves join across the seam on the open side.
            dart.case_label = "G";
            bool up = hi_l || hi_r;
            bool left = hi_l || lo_l;
            int u = left ? U - 1 : U;
            int v0 = up ? V : V - n;
            Side narrow_local = up ? Side::Bottom : Side::Top;
            Side toward = left ? Side::Right : Side::Left;
            std::vector<int> own = column(u, v0, n, up);
            CrossColumn cc = cross_seam(w, panel, own, fr.global(toward));
            DartHalf mine{pid, own}, theirs{cc.panel, cc.cells};
            if (left) add_module(mine, theirs, narrow_local);
            else add_module(theirs, mine, narrow_local);
            check_footprint(w, footprint);

            // The partner's narrow side is the side of its end cell that touches the image of
            // the anchor and is not the seam side.
            const Panel& other = w.panel(cc.panel);
            const Segment* own_seam_seg = panel.segment_by_id(cc.own_segs.front());
            const Segment* far_seam_seg = other.segment_by_id(cc.far_segs.front());
            auto own_ends = side_endpoints(panel.cell_by_id(own_seam_seg->cell_id)->pos, own_seam_seg->side);
            auto far_ends = side_endpoints(other.cell_by_id(far_seam_seg->cell_id)->pos, far_seam_seg->side);
            Point image = own_ends[0] == anchor ? far_ends[1] : far_ends[0];
            const Cell* far_cell = other.cell_by_id(far_seam_seg->cell_id);
            const Segment* far_narrow = nullptr;
            for (Side s : kSides) {
                if (s == far_seam_seg->side || s == opposite(far_seam_seg->side)) continue;
                auto ends = side_endpoints(far_cell->pos, s);
                if (ends[0] == image || ends[1] == image) far_narrow = other.segment_on(far_cell->id, s);
            }
            const Segment* own_narrow = panel.segment_on(own.front(), fr.global(narrow_local));
            if (!far_narrow || !own_narrow) {
                throw Error(ErrorCode::InsufficientSpace, "corner dart needs an open corner on both panels");
            }
            if (own_narrow->seam_id >= 0 || far_narrow->seam_id >= 0 || !own_narrow->active || !far_narrow->active) {
                throw Error(ErrorCode::DartSeamConflict, "corner dart needs free narrow ends");
            }
            std::pair<int, int> first_narrow = left ? std::pair{pid, own_narrow->id} : std::pair{cc.panel, far_narrow->id};
            std::pair<int, int> second_narrow = left ? std::pair{cc.panel, far_narrow->id} : std::pair{pid, own_narrow->id};
            if (universal || full) deactivate.push_back(second_narrow);
            if (full) deactivate.push_back(first_narrow);
            for (int s : cc.own_segs) deactivate.emplace_back(pid, s);
            for (int s : cc.far_segs) deactivate.emplace_back(cc.panel, s);
        } else {
            throw Error(ErrorCode::InsufficientSpace, "no room for a dart at this grid point");
        }

        for (auto [cpid, cid] : footprint) {
            Cell* c = w.panel(cpid).cell_by_id(cid);
            c->kind = CellKind::DartHole;
            c->dart_id = dart.id;
        }
        for (auto [spid, sid] : deactivate) {
            Segment* s = w.panel(spid).segment_by_id(sid);
            s->active = false;
            dart.consumed_segments.push_back(sid);
            if (s->seam_id >= 0) touched.insert(s->seam_id);
        }
        std::sort(dart.consumed_segments.begin(), dart.consumed_segments.end());
        std::string label = dart.case_label;
        w.darts.push_back(std::move(dart));
        settle_seams(w, before, touched, ErrorCode::GatheredSeam);
        return label;
    });
}

// ---- replay ----

EditResult apply_feature(Pattern& p, const FeatureRecord& f) {
    switch (f.kind) {
    case FeatureKind::Gather: return gather_edge(p, f.seam, f.seam_side);
    case FeatureKind::ConvertPleat: return convert_to_pleat(p, f.panel, f.cell, f.direction);
    case FeatureKind::InsertPleat: return insert_pleat(p, f.panel, f.cell, f.direction);
    case FeatureKind::Dart: return add_dart(p, f.panel, f.cell, f.dart_orientation, f.width, f.height);
    case FeatureKind::InsertStrip: return insert_strip(p, {f.panel, f.cell, f.axis}, f.strip_side);
    case FeatureKind::DeleteStrip: return delete_strip(p, {f.panel, f.cell, f.axis});
    case FeatureKind::ResolveDelete: return resolve_by_delete(p, f.segment);
    case FeatureKind::ResolveExpand: return resolve_by_expand(p, f.segment);
    }
    EditResult r;
    r.status = EditStatus::Rejected;
    r.reason = ErrorCode::InvalidArgument;
    r.message = "unknown feature kind";
    return r;
}

}  // namespace garmod
