#include "garmod/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "garmod/error.hpp"

namespace garmod {

std::string_view to_string(Phase phase) {
    switch (phase) {
    case Phase::Draw: return "draw";
    case Phase::Stitch: return "stitch";
    case Phase::Features: return "features";
    }
    return "?";
}

std::string_view to_string(FaceOrientation o) {
    return o == FaceOrientation::OutsideUp ? "outside_up" : "inside_up";
}

std::string_view to_string(CellKind kind) {
    switch (kind) {
    case CellKind::Foundation: return "foundation";
    case CellKind::Pleat: return "pleat";
    case CellKind::DartHole: return "dart_hole";
    }
    return "?";
}

std::string_view to_string(SegmentState state) {
    switch (state) {
    case SegmentState::Free: return "free";
    case SegmentState::Seamed: return "seamed";
    case SegmentState::Inactive: return "inactive";
    }
    return "?";
}

std::string_view to_string(DartOrientation o) {
    return o == DartOrientation::Vertical ? "vertical" : "horizontal";
}

Phase phase_from_string(std::string_view s) {
    for (Phase p : {Phase::Draw, Phase::Stitch, Phase::Features}) {
        if (to_string(p) == s) return p;
    }
    throw Error(ErrorCode::ParseError, "unknown phase '" + std::string(s) + "'");
}

FaceOrientation orientation_from_string(std::string_view s) {
    if (s == "outside_up") return FaceOrientation::OutsideUp;
    if (s == "inside_up") return FaceOrientation::InsideUp;
    throw Error(ErrorCode::ParseError, "unknown orientation '" + std::string(s) + "'");
}

CellKind cell_kind_from_string(std::string_view s) {
    for (CellKind k : {CellKind::Foundation, CellKind::Pleat, CellKind::DartHole}) {
        if (to_string(k) == s) return k;
    }
    throw Error(ErrorCode::ParseError, "unknown cell kind '" + std::string(s) + "'");
}

DartOrientation dart_orientation_from_string(std::string_view s) {
    if (s == "vertical") return DartOrientation::Vertical;
    if (s == "horizontal") return DartOrientation::Horizontal;
    throw Error(ErrorCode::ParseError, "unknown dart orientation '" + std::string(s) + "'");
}

std::string_view to_string(FeatureKind kind) {
    switch (kind) {
    case FeatureKind::Gather: return "gather";
    case FeatureKind::ConvertPleat: return "convert_pleat";
    case FeatureKind::InsertPleat: return "insert_pleat";
    case FeatureKind::Dart: return "dart";
    case FeatureKind::InsertStrip: return "insert_strip";
    case FeatureKind::DeleteStrip: return "delete_strip";
    case FeatureKind::ResolveDelete: return "resolve_delete";
    case FeatureKind::ResolveExpand: return "resolve_expand";
    }
    return "?";
}

FeatureKind feature_kind_from_string(std::string_view s) {
    for (FeatureKind k : {FeatureKind::Gather, FeatureKind::ConvertPleat, FeatureKind::InsertPleat,
                          FeatureKind::Dart, FeatureKind::InsertStrip, FeatureKind::DeleteStrip,
                          FeatureKind::ResolveDelete, FeatureKind::ResolveExpand}) {
        if (to_string(k) == s) return k;
    }
    throw Error(ErrorCode::ParseError, "unknown feature kind '" + std::string(s) + "'");
}

int feature_level(FeatureKind kind) {
    switch (kind) {
    case FeatureKind::Gather: return 1;
    case FeatureKind::ConvertPleat:
    case FeatureKind::InsertPleat:
    case FeatureKind::InsertStrip:
    case FeatureKind::DeleteStrip:
    case FeatureKind::ResolveDelete:
    case FeatureKind::ResolveExpand: return 2;
    case FeatureKind::Dart: return 3;
    }
    return 0;
}

// ---- Panel ----

const Cell* Panel::cell_at(Point p) const {
    auto it = by_pos_.find(p);
    return it == by_pos_.end() ? nullptr : &cells[it->second];
}

const Cell* Panel::cell_by_id(int cid) const {
    auto it = cell_by_id_.find(cid);
    return it == cell_by_id_.end() ? nullptr : &cells[it->second];
}

Cell* Panel::cell_by_id(int cid) {
    auto it = cell_by_id_.find(cid);
    return it == cell_by_id_.end() ? nullptr : &cells[it->second];
}

const Segment* Panel::segment_on(int cell_id, Side side) const {
    auto it = seg_by_cell_side_.find({cell_id, static_cast<int>(side)});
    return it == seg_by_cell_side_.end() ? nullptr : &segments[it->second];
}

const Segment* Panel::segment_by_id(int sid) const {
    auto it = seg_by_id_.find(sid);
    return it == seg_by_id_.end() ? nullptr : &segments[it->second];
}

Segment* Panel::segment_by_id(int sid) {
    auto it = seg_by_id_.find(sid);
    return it == seg_by_id_.end() ? nullptr : &segments[it->second];
}

const Cell* Panel::neighbor(const Cell& cell, Side side) const {
    return cell_at(cell.pos + side_offset(side));
}

std::vector<Point> Panel::cell_positions() const {
    std::vector<Point> out;
    out.reserve(cells.size());
    for (const Cell& c : cells) out.push_back(c.pos);
    return out;
}

void Panel::reindex() {
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.pos < b.pos; });
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) { return a.id < b.id; });
    by_pos_.clear();
    cell_by_id_.clear();
    seg_by_id_.clear();
    seg_by_cell_side_.clear();
    for (size_t i = 0; i < cells.size(); ++i) {
        by_pos_[cells[i].pos] = i;
        cell_by_id_[cells[i].id] = i;
    }
    for (size_t i = 0; i < segments.size(); ++i) {
        seg_by_id_[segments[i].id] = i;
        seg_by_cell_side_[{segments[i].cell_id, static_cast<int>(segments[i].side)}] = i;
    }
}

// ---- Pattern ----

Panel& Pattern::panel(int pid) {
    for (Panel& p : panels) {
        if (p.id == pid) return p;
    }
    throw Error(ErrorCode::UnknownPanel, "no panel " + std::to_string(pid));
}

const Panel& Pattern::panel(int pid) const {
    for (const Panel& p : panels) {
        if (p.id == pid) return p;
    }
    throw Error(ErrorCode::UnknownPanel, "no panel " + std::to_string(pid));
}

Seam& Pattern::seam(int sid) {
    for (Seam& s : seams) {
        if (s.id == sid) return s;
    }
    throw Error(ErrorCode::UnknownSeam, "no seam " + std::to_string(sid));
}

const Seam& Pattern::seam(int sid) const {
    for (const Seam& s : seams) {
        if (s.id == sid) return s;
    }
    throw Error(ErrorCode::UnknownSeam, "no seam " + std::to_string(sid));
}

const Dart& Pattern::dart(int did) const {
    for (const Dart& d : darts) {
        if (d.id == did) return d;
    }
    throw Error(ErrorCode::InvalidArgument, "no dart " + std::to_string(did));
}

const Panel* Pattern::panel_of_segment(int sid) const {
    for (const Panel& p : panels) {
        if (p.segment_by_id(sid)) return &p;
    }
    return nullptr;
}

Panel* Pattern::panel_of_segment(int sid) {
    for (Panel& p : panels) {
        if (p.segment_by_id(sid)) return &p;
    }
    return nullptr;
}

const Segment& Pattern::segment(int sid) const {
    const Panel* p = panel_of_segment(sid);
    if (!p) throw Error(ErrorCode::UnknownSegment, "no segment " + std::to_string(sid));
    return *p->segment_by_id(sid);
}

Segment& Pattern::segment(int sid) {
    Panel* p = panel_of_segment(sid);
    if (!p) throw Error(ErrorCode::UnknownSegment, "no segment " + std::to_string(sid));
    return *p->segment_by_id(sid);
}

bool Pattern::has_feature_level(int level) const {
    for (const FeatureRecord& f : features) {
        bool counted = f.kind == FeatureKind::Gather || f.kind == FeatureKind::ConvertPleat ||
                       f.kind == FeatureKind::InsertPleat || f.kind == FeatureKind::Dart;
        if (counted && feature_level(f.kind) == level) return true;
    }
    return false;
}

Pattern new_pattern(const PatternConfig& config) {
    validate_config(config);
    Pattern p;
    p.config = config;
    return p;
}

// ---- Drawing phase ----

namespace {

void require_phase(const Pattern& p, Phase phase, const char* what) {
    if (p.phase != phase) {
        throw Error(ErrorCode::PhaseViolation, std::string(what) + " requires phase " +
                                                   std::string(to_string(phase)) + ", pattern is in " +
                                                   std::string(to_string(p.phase)));
    }
}

int sgn(int v) { return (v > 0) - (v < 0); }

}  // namespace

int add_panel(Pattern& p, const std::vector<Point>& outline, std::string name) {
    require_phase(p, Phase::Draw, "add_panel");
    std::vector<Point> loop = normalize_outline(outline);
    int x0 = loop[0].x, x1 = x0, y0 = loop[0].y, y1 = y0;
    for (const Point& v : loop) {
        x0 = std::min(x0, v.x);
        x1 = std::max(x1, v.x);
        y0 = std::min(y0, v.y);
        y1 = std::max(y1, v.y);
    }
    if (x1 - x0 > p.config.max_panel_extent || y1 - y0 > p.config.max_panel_extent) {
        throw Error(ErrorCode::PanelTooLarge,
                    "panel exceeds " + std::to_string(p.config.max_panel_extent) + " cells per axis");
    }
    Panel panel;
    panel.id = p.next_panel_id++;
    panel.name = name.empty() ? "panel-" + std::to_string(panel.id) : std::move(name);
    panel.outline = std::move(loop);
    p.panels.push_back(std::move(panel));
    ++p.revision;
    return p.panels.back().id;
}

int add_panel_cm(Pattern& p, const std::vector<std::pair<double, double>>& outline_cm,
                 std::string name) {
    std::vector<Point> pts;
    for (const auto& [x, y] : outline_cm) {
        double gx = x / p.config.base_unit;
        double gy = y / p.config.base_unit;
        if (std::fabs(gx - std::round(gx)) > 1e-9 || std::fabs(gy - std::round(gy)) > 1e-9) {
            throw Error(ErrorCode::OffGrid, "vertex is not on the base-unit grid");
        }
        pts.push_back({static_cast<int>(std::lround(gx)), static_cast<int>(std::lround(gy))});
    }
    return add_panel(p, pts, std::move(name));
}

void rename_panel(Pattern& p, int pid, std::string name) {
    require_phase(p, Phase::Draw, "rename_panel");
    p.panel(pid).name = std::move(name);
    ++p.revision;
}

void flip_panel(Pattern& p, int pid) {
    require_phase(p, Phase::Draw, "flip_panel");
    Panel& panel = p.panel(pid);
    panel.orientation = panel.orientation == FaceOrientation::OutsideUp ? FaceOrientation::InsideUp
                                                                        : FaceOrientation::OutsideUp;
    ++p.revision;
}

void translate_panel(Pattern& p, int pid, Point offset) {
    require_phase(p, Phase::Draw, "translate_panel");
    for (Point& v : p.panel(pid).outline) v = v + offset;
    ++p.revision;
}

void begin_stitching(Pattern& p) {
    require_phase(p, Phase::Draw, "begin_stitching");
    p.phase = Phase::Stitch;
    ++p.revision;
}

// ---- Stitching phase ----

std::vector<Edge> panel_edges(const Panel& panel) {
    std::vector<Point> splits;
    const auto& loop = panel.outline;
    for (size_t i = 0; i < loop.size(); ++i) {
        Point a = loop[i], b = loop[(i + 1) % loop.size()];
        splits.push_back(a);
        std::vector<Point> on;
        for (const Point& bp : panel.break_points) {
            bool inside = (a.x == b.x && bp.x == a.x && std::min(a.y, b.y) < bp.y &&
                           bp.y < std::max(a.y, b.y)) ||
                          (a.y == b.y && bp.y == a.y && std::min(a.x, b.x) < bp.x &&
                           bp.x < std::max(a.x, b.x));
            if (inside) on.push_back(bp);
        }
        std::sort(on.begin(), on.end(), [&](const Point& u, const Point& v) {
            return std::abs(u.x - a.x) + std::abs(u.y - a.y) < std::abs(v.x - a.x) + std::abs(v.y - a.y);
        });
        splits.insert(splits.end(), on.begin(), on.end());
    }
    std::vector<Edge> edges;
    for (size_t i = 0; i < splits.size(); ++i) {
        Edge e;
        e.index = static_cast<int>(i);
        e.from = splits[i];
        e.to = splits[(i + 1) % splits.size()];
        e.length = std::abs(e.to.x - e.from.x) + std::abs(e.to.y - e.from.y);
        edges.push_back(e);
    }
    return edges;
}

namespace {

bool point_on_edge(Point q, const Edge& e) {
    if (e.from.x == e.to.x) {
        return q.x == e.from.x && std::min(e.from.y, e.to.y) <= q.y && q.y <= std::max(e.from.y, e.to.y);
    }
    return q.y == e.from.y && std::min(e.from.x, e.to.x) <= q.x && q.x <= std::max(e.from.x, e.to.x);
}

bool edge_is_seamed(const Pattern& p, int pid, const Edge& e) {
    for (const Seam& s : p.seams) {
        if ((s.panel_a == pid && s.a_from == e.from && s.a_to == e.to) ||
            (s.panel_b == pid && s.b_from == e.from && s.b_to == e.to)) {
            return true;
        }
    }
    return false;
}

const Edge& edge_at(const std::vector<Edge>& edges, EdgeRef ref) {
    if (ref.index < 0 || ref.index >= static_cast<int>(edges.size())) {
        throw Error(ErrorCode::UnknownEdge, "panel " + std::to_string(ref.panel) + " has no edge " +
                                                std::to_string(ref.index));
    }
    return edges[static_cast<size_t>(ref.index)];
}

}  // namespace

void insert_break_point(Pattern& p, int pid, Point position) {
    require_phase(p, Phase::Stitch, "insert_break_point");
    Panel& panel = p.panel(pid);
    auto edges = panel_edges(panel);
    for (const Edge& e : edges) {
        if (e.from == position) {
            throw Error(ErrorCode::DuplicateBreak, "a corner or break point already exists there");
        }
    }
    for (const Edge& e : edges) {
        if (!point_on_edge(position, e)) continue;
        if (edge_is_seamed(p, pid, e)) {
            throw Error(ErrorCode::AlreadySeamed, "cannot split an edge that is already stitched");
        }
        panel.break_points.push_back(position);
        std::sort(panel.break_points.begin(), panel.break_points.end());
        ++p.revision;
        return;
    }
    throw Error(ErrorCode::NotOnGrid, "break point does not lie on the panel outline");
}

int stitch(Pattern& p, EdgeRef a, EdgeRef b) {
    require_phase(p, Phase::Stitch, "stitch");
    const Panel& pa = p.panel(a.panel);
    const Panel& pb = p.panel(b.panel);
    auto ea_list = panel_edges(pa);
    auto eb_list = panel_edges(pb);
    const Edge& ea = edge_at(ea_list, a);
    const Edge& eb = edge_at(eb_list, b);
    if (a.panel == b.panel && a.index == b.index) {
        throw Error(ErrorCode::SelfSeam, "an edge cannot be stitched to itself");
    }
    if (edge_is_seamed(p, a.panel, ea) || edge_is_seamed(p, b.panel, eb)) {
        throw Error(ErrorCode::AlreadySeamed, "edge already belongs to a seam");
    }
    if (ea.length != eb.length) {
        throw Error(ErrorCode::LengthMismatch, "flat lengths " + std::to_string(ea.length) + " and " +
                                                   std::to_string(eb.length) + " differ");
    }
    Seam s;
    s.id = p.next_seam_id++;
    s.panel_a = a.panel;
    s.panel_b = b.panel;
    s.a_from = ea.from;
    s.a_to = ea.to;
    s.b_from = eb.from;
    s.b_to = eb.to;
    p.seams.push_back(s);
    ++p.revision;
    return s.id;
}

int edge_between(Pattern& p, int pid, Point from, Point to) {
    for (Point q : {from, to}) {
        bool is_vertex = false;
        for (const Edge& e : panel_edges(p.panel(pid))) is_vertex |= e.from == q;
        if (!is_vertex) insert_break_point(p, pid, q);
    }
    for (const Edge& e : panel_edges(p.panel(pid))) {
        if (e.from == from && e.to == to) return e.index;
    }
    throw Error(ErrorCode::UnknownEdge, "no counter-clockwise edge from (" + std::to_string(from.x) + "," +
                                            std::to_string(from.y) + ") to (" + std::to_string(to.x) + "," +
                                            std::to_string(to.y) + ")");
}

int stitch_span(Pattern& p, int panel_a, Point a_from, Point a_to, int panel_b, Point b_from, Point b_to) {
    int ea = edge_between(p, panel_a, a_from, a_to);
    int eb = edge_between(p, panel_b, b_from, b_to);
    ea = edge_between(p, panel_a, a_from, a_to);
    return stitch(p, {panel_a, ea}, {panel_b, eb});
}

std::pair<Point, Side> unit_step_owner(Point from, Point dir) {
    if (dir == Point{1, 0}) return {from, Side::Bottom};
    if (dir == Point{0, 1}) return {{from.x - 1, from.y}, Side::Right};
    if (dir == Point{-1, 0}) return {{from.x - 1, from.y - 1}, Side::Top};
    return {{from.x, from.y - 1}, Side::Left};
}

namespace {

std::vector<int> edge_segments(const Panel& panel, Point from, Point to) {
    Point dir{sgn(to.x - from.x), sgn(to.y - from.y)};
    std::vector<int> out;
    for (Point q = from; q != to; q = q + dir) {
        auto [cell_pos, side] = unit_step_owner(q, dir);
        const Cell* c = panel.cell_at(cell_pos);
        const Segment* seg = c ? panel.segment_on(c->id, side) : nullptr;
        if (!seg) throw Error(ErrorCode::UnstitchedDanglingState, "edge does not follow the panel boundary");
        out.push_back(seg->id);
    }
    return out;
}

}  // namespace

void enter_features_phase(Pattern& p) {
    require_phase(p, Phase::Stitch, "enter_features_phase");
    Pattern next = p;
    for (Panel& panel : next.panels) {
        auto cells = rasterize(panel.outline);
        if (cells.empty() || !is_connected(cells)) {
            throw Error(ErrorCode::UnstitchedDanglingState,
                        "panel " + panel.name + " does not rasterize to one connected region");
        }
        panel.drawn_outline = panel.outline;
        std::set<Point> present(cells.begin(), cells.end());
        for (const Point& c : cells) {
            Cell cell;
            cell.id = next.next_cell_id++;
            cell.pos = c;
            panel.cells.push_back(cell);
        }
        for (const Cell& c : panel.cells) {
            for (Side s : kSides) {
                if (present.count(c.pos + side_offset(s))) continue;
                Segment seg;
                seg.id = next.next_segment_id++;
                seg.cell_id = c.id;
                seg.side = s;
                panel.segments.push_back(seg);
            }
        }
        panel.reindex();
    }
    for (Seam& s : next.seams) {
        Panel& pa = next.panel(s.panel_a);
        Panel& pb = next.panel(s.panel_b);
        s.side_a = edge_segments(pa, s.a_from, s.a_to);
        s.side_b = edge_segments(pb, s.b_from, s.b_to);
        std::reverse(s.side_b.begin(), s.side_b.end());
        s.matching = init_matching(s.side_a, s.side_b);
        for (int id : s.side_a) {
            Segment* seg = pa.segment_by_id(id);
            if (seg->seam_id >= 0) throw Error(ErrorCode::AlreadySeamed, "segment in two seams");
            seg->seam_id = s.id;
        }
        for (int id : s.side_b) {
            Segment* seg = pb.segment_by_id(id);
            if (seg->seam_id >= 0) throw Error(ErrorCode::AlreadySeamed, "segment in two seams");
            seg->seam_id = s.id;
        }
    }
    next.phase = Phase::Features;
    ++next.revision;
    p = std::move(next);
}

// ---- Grid queries ----

std::vector<std::vector<int>> boundary_loops(const Panel& panel) {
    struct Step {
        Point to;
        int seg;
    };
    std::multimap<Point, Step> out;
    for (const Segment& s : panel.segments) {
        const Cell* c = panel.cell_by_id(s.cell_id);
        auto ends = side_endpoints(c->pos, s.side);
        out.emplace(ends[0], Step{ends[1], s.id});
    }
    std::vector<std::pair<Point, std::vector<int>>> loops;
    while (!out.empty()) {
        auto it = out.begin();
        Point start = it->first;
        Point prev = start;
        Point cur = it->second.to;
        std::vector<std::pair<Point, int>> steps{{start, it->second.seg}};
        out.erase(it);
        while (cur != start) {
            Point dir{sgn(cur.x - prev.x), sgn(cur.y - prev.y)};
            Point left{-dir.y, dir.x};
            Point right{dir.y, -dir.x};
            auto range = out.equal_range(cur);
            auto pick = range.second;
            for (Point want : {left, dir, right}) {
                for (auto r = range.first; r != range.second; ++r) {
                    Point d{sgn(r->second.to.x - cur.x), sgn(r->second.to.y - cur.y)};
                    if (d == want) {
                        pick = r;
                        break;
                    }
                }
                if (pick != range.second) break;
            }
            if (pick == range.second) break;
            steps.push_back({cur, pick->second.seg});
            prev = cur;
            cur = pick->second.to;
            out.erase(pick);
        }
        auto lowest = std::min_element(steps.begin(), steps.end(), [](const auto& a, const auto& b) {
            return a.first.y != b.first.y ? a.first.y < b.first.y : a.first.x < b.first.x;
        });
        std::rotate(steps.begin(), lowest, steps.end());
        std::vector<int> ids;
        for (const auto& st : steps) ids.push_back(st.second);
        loops.push_back({steps.front().first, ids});
    }
    std::sort(loops.begin(), loops.end(), [](const auto& a, const auto& b) {
        return a.first.y != b.first.y ? a.first.y < b.first.y : a.first.x < b.first.x;
    });
    std::vector<std::vector<int>> result;
    for (auto& l : loops) result.push_back(std::move(l.second));
    return result;
}

std::vector<int> active_ids(const Pattern& p, const std::vector<int>& ids) {
    std::vector<int> out;
    for (int id : ids) {
        if (p.segment(id).active) out.push_back(id);
    }
    return out;
}

namespace {

std::vector<int> order_along_boundary(const Panel& panel, const std::vector<int>& ids) {
    if (ids.size() <= 1) return ids;
    std::set<int> want(ids.begin(), ids.end());
    for (const auto& loop : boundary_loops(panel)) {
        std::vector<size_t> hits;
        for (size_t i = 0; i < loop.size(); ++i) {
            if (want.count(loop[i])) hits.push_back(i);
        }
        if (hits.empty()) continue;
        if (hits.size() != ids.size()) {
            throw Error(ErrorCode::DisconnectionHazard, "seam side split across boundary loops");
        }
        // Start after the largest cyclic gap so a contiguous run wrapping the loop start stays whole.
        size_t n = loop.size();
        size_t best = 0, best_gap = 0;
        for (size_t k = 0; k < hits.size(); ++k) {
            size_t prev = hits[(k + hits.size() - 1) % hits.size()];
            size_t gap = (hits[k] + n - prev) % n;
            if (hits.size() == 1) gap = n;
            if (gap > best_gap) {
                best_gap = gap;
                best = k;
            }
        }
        std::vector<int> out;
        for (size_t k = 0; k < hits.size(); ++k) out.push_back(loop[hits[(best + k) % hits.size()]]);
        return out;
    }
    throw Error(ErrorCode::UnknownSegment, "seam side not found on panel boundary");
}

}  // namespace

void reorder_seam(Pattern& p, Seam& seam) {
    seam.side_a = order_along_boundary(p.panel(seam.panel_a), seam.side_a);
    seam.side_b = order_along_boundary(p.panel(seam.panel_b), seam.side_b);
    std::reverse(seam.side_b.begin(), seam.side_b.end());
}

}  // namespace garmod
