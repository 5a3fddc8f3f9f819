#include "garmod/validate.hpp"

#include <algorithm>
#include <set>

#include "garmod/edit_engine.hpp"

namespace garmod {

std::string to_string(const Violation& v) {
    std::string out = v.rule;
    if (v.panel >= 0) out += " panel " + std::to_string(v.panel);
    if (v.seam >= 0) out += " seam " + std::to_string(v.seam);
    return out + ": " + v.message;
}

namespace {

void check_panel(const Pattern& p, const Panel& panel, std::vector<Violation>& out) {
    auto fail = [&](std::string rule, std::string msg) {
        out.push_back({std::move(rule), panel.id, -1, std::move(msg)});
    };
    std::set<Point> positions;
    std::set<int> ids;
    for (const Cell& c : panel.cells) {
        if (!positions.insert(c.pos).second) fail("grid", "two cells share a position");
        if (!ids.insert(c.id).second) fail("grid", "duplicate cell id " + std::to_string(c.id));
    }
    if (panel.cells.empty()) {
        fail("grid", "panel has no cells");
        return;
    }
    std::vector<Point> cells(positions.begin(), positions.end());
    if (!is_connected(cells)) fail("grid", "cells are not connected");
    auto loops = trace_boundary(cells);
    if (loops.size() != 1) fail("grid", "panel has a hole");
    if (!loops.empty() && loops.front() != panel.outline) fail("grid", "outline does not follow the cells");

    std::set<std::pair<int, Side>> exposed, seen;
    for (const Cell& c : panel.cells) {
        for (Side s : kSides) {
            if (!positions.count(c.pos + side_offset(s))) exposed.insert({c.id, s});
        }
    }
    for (const Segment& s : panel.segments) {
        if (!seen.insert({s.cell_id, s.side}).second) {
            fail("grid", "two segments on one cell side (segment " + std::to_string(s.id) + ")");
        }
    }
    if (seen != exposed) fail("grid", "segments do not match the exposed cell sides");

    std::set<int> consumed;
    for (const Dart& d : p.darts) consumed.insert(d.consumed_segments.begin(), d.consumed_segments.end());
    for (const Segment& s : panel.segments) {
        const Cell* c = panel.cell_by_id(s.cell_id);
        if (!c) continue;
        bool folded = false;
        if (c->kind == CellKind::Pleat) {
            for (Side f : folded_sides(c->pleat_dir)) folded |= f == s.side;
        }
        bool should_be_inactive = folded || consumed.count(s.id) > 0;
        if (s.active == should_be_inactive) {
            fail("fold", "segment " + std::to_string(s.id) + (s.active ? " should be folded away" : " is inactive without a feature"));
        }
        if (s.seam_id >= 0) {
            const Seam* seam = nullptr;
            for (const Seam& x : p.seams) {
                if (x.id == s.seam_id) seam = &x;
            }
            bool listed = seam && (std::count(seam->side_a.begin(), seam->side_a.end(), s.id) +
                                   std::count(seam->side_b.begin(), seam->side_b.end(), s.id)) == 1;
            if (!listed) fail("seam", "segment " + std::to_string(s.id) + " is not listed by its seam");
        }
    }
    for (const Cell& c : panel.cells) {
        if (c.kind != CellKind::DartHole) continue;
        bool found = std::any_of(p.darts.begin(), p.darts.end(), [&](const Dart& d) { return d.id == c.dart_id; });
        if (!found) fail("dart", "cell " + std::to_string(c.id) + " refers to a missing dart");
    }
}

void check_seam(const Pattern& p, const Seam& seam, std::vector<Violation>& out) {
    auto fail = [&](std::string rule, std::string msg) {
        out.push_back({std::move(rule), -1, seam.id, std::move(msg)});
    };
    for (auto [pid, side] : {std::pair{seam.panel_a, &seam.side_a}, std::pair{seam.panel_b, &seam.side_b}}) {
        for (int id : *side) {
            const Panel* owner = p.panel_of_segment(id);
            if (!owner || owner->id != pid) {
                fail("seam", "segment " + std::to_string(id) + " is not on the seam's panel");
                return;
            }
            if (owner->segment_by_id(id)->seam_id != seam.id) {
                fail("seam", "segment " + std::to_string(id) + " points at another seam");
            }
        }
    }
    auto a = active_ids(p, seam.side_a);
    auto b = active_ids(p, seam.side_b);
    if (!ratio_ok(a.size(), b.size())) {
        fail("ratio", "active lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()) +
                          " differ by more than a factor of two");
    }
    for (const std::string& m : matching_violations(seam.matching, a, b)) fail("matching", m);
}

void check_dart(const Pattern& p, const Dart& d, std::vector<Violation>& out) {
    for (const DartModule& m : d.modules) {
        for (const DartHalf* h : {&m.first, &m.second}) {
            const Panel& panel = p.panel(h->panel);
            for (int cid : h->cells) {
                const Cell* c = panel.cell_by_id(cid);
                if (!c || c->kind != CellKind::DartHole || c->dart_id != d.id) {
                    out.push_back({"dart", h->panel, -1, "dart " + std::to_string(d.id) + " lost cell " + std::to_string(cid)});
                }
            }
        }
    }
}

}  // namespace

std::vector<Violation> pattern_violations(const Pattern& p) {
    std::vector<Violation> out;
    for (const Panel& panel : p.panels) check_panel(p, panel, out);
    for (const Seam& seam : p.seams) check_seam(p, seam, out);
    for (const Dart& d : p.darts) check_dart(p, d, out);
    return out;
}

}  // namespace garmod
