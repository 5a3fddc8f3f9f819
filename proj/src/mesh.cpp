#include "garmod/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "garmod/edit_engine.hpp"
#include "garmod/error.hpp"

namespace garmod {

std::string_view to_string(ThreadTag tag) {
    switch (tag) {
    case ThreadTag::Seam: return "seam";
    case ThreadTag::GatherFold: return "gather-fold";
    case ThreadTag::PleatFold: return "pleat-fold";
    case ThreadTag::DartClose: return "dart-close";
    }
    return "seam";
}

namespace {

// Leg geometry of one dart cell. The leg replaces the side facing the other half; its two
// corners move inward by the wedge half-width at the cell's narrow-side and far edges.
struct DartCellFrame {
    Side leg = Side::Right;
    Side narrow = Side::Top;
    double off_near = 0.0;
    double off_far = 0.0;
    int dart = -1, module = -1, half = 0, index = 0;
};

using FrameMap = std::map<std::pair<int, int>, DartCellFrame>;  // (panel, cell id)

Side next_ccw(Side s) {
    switch (s) {
    case Side::Bottom: return Side::Right;
    case Side::Right: return Side::Top;
    case Side::Top: return Side::Left;
    case Side::Left: return Side::Bottom;
    }
    return s;
}

Point shared_corner(Point cell, Side a, Side b) {
    auto ea = side_endpoints(cell, a);
    auto eb = side_endpoints(cell, b);
    for (Point p : ea) {
        if (p == eb[0] || p == eb[1]) return p;
    }
    throw Error(ErrorCode::InvalidArgument, "sides do not share a corner");
}

bool consumed(const Dart& d, int seg) {
    return std::find(d.consumed_segments.begin(), d.consumed_segments.end(), seg) != d.consumed_segments.end();
}

Side leg_side(const Pattern& p, const Dart& d, const DartHalf& half, const DartHalf& other) {
    const Panel& panel = p.panel(half.panel);
    const Cell* c = panel.cell_by_id(half.cells.front());
    if (half.panel == other.panel) {
        Point diff = p.panel(other.panel).cell_by_id(other.cells.front())->pos - c->pos;
        for (Side s : kSides) {
            if (side_offset(s) == diff) return s;
        }
    } else {
        for (Side s : kSides) {
            const Segment* seg = panel.segment_on(c->id, s);
            if (seg && seg->seam_id >= 0 && consumed(d, seg->id)) return s;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "dart halves are not adjacent");
}

Point seam_start(const Pattern& p, const Segment& seg, Point cell) {
    const Seam& seam = p.seam(seg.seam_id);
    auto ends = side_endpoints(cell, seg.side);
    bool on_a = std::find(seam.side_a.begin(), seam.side_a.end(), seg.id) != seam.side_a.end();
    return on_a ? ends[0] : ends[1];
}

FrameMap dart_frames(const Pattern& p) {
    FrameMap out;
    for (const Dart& d : p.darts) {
        for (size_t mi = 0; mi < d.modules.size(); ++mi) {
            const DartModule& m = d.modules[mi];
            const DartHalf* halves[2] = {&m.first, &m.second};
            Side legs[2], narrows[2];
            for (int h = 0; h < 2; ++h) legs[h] = leg_side(p, d, *halves[h], *halves[1 - h]);
            int own = halves[0]->panel == d.panel ? 0 : 1;
            narrows[own] = m.narrow_side;
            int far = 1 - own;
            if (halves[far]->panel == d.panel) {
                narrows[far] = m.narrow_side;
            } else {
                // Carry the narrow corner across the seam: equal positions along the seam face.
                const Panel& op = p.panel(halves[own]->panel);
                const Panel& fp = p.panel(halves[far]->panel);
                const Cell* oc = op.cell_by_id(halves[own]->cells.front());
                const Cell* fc = fp.cell_by_id(halves[far]->cells.front());
                const Segment* os = op.segment_on(oc->id, legs[own]);
                const Segment* fs = fp.segment_on(fc->id, legs[far]);
                Point corner = shared_corner(oc->pos, legs[own], narrows[own]);
                bool at_start = corner == seam_start(p, *os, oc->pos);
                auto fe = side_endpoints(fc->pos, fs->side);
                Point fstart = seam_start(p, *fs, fc->pos);
                Point image = at_start ? fstart : (fstart == fe[0] ? fe[1] : fe[0]);
                narrows[far] = Side::Bottom;
                for (Side s : kSides) {
                    if (s == legs[far] || s == opposite(legs[far])) continue;
                    auto e = side_endpoints(fc->pos, s);
                    if (e[0] == image || e[1] == image) narrows[far] = s;
                }
            }
            int n = static_cast<int>(m.first.cells.size());
            for (int h = 0; h < 2; ++h) {
                for (int k = 0; k < n; ++k) {
                    DartCellFrame f;
                    f.leg = legs[h];
                    f.narrow = narrows[h];
                    f.off_near = d.width / 2 * (1.0 - static_cast<double>(k) / n);
                    f.off_far = d.width / 2 * (1.0 - static_cast<double>(k + 1) / n);
                    f.dart = d.id;
                    f.module = static_cast<int>(mi);
                    f.half = h;
                    f.index = k;
                    out[{halves[h]->panel, halves[h]->cells[static_cast<size_t>(k)]}] = f;
                }
            }
        }
    }
    return out;
}

bool meshed(const Cell* c) { return c && c->kind != CellKind::Pleat; }

// Corners BL, BR, TR, TL of a meshed cell in cm.
std::array<Vec2, 4> cell_quad(const Cell& c, double unit, const DartCellFrame* frame) {
    std::array<Point, 4> grid = {c.pos, c.pos + Point{1, 0}, c.pos + Point{1, 1}, c.pos + Point{0, 1}};
    std::array<Vec2, 4> q;
    for (int i = 0; i < 4; ++i) q[i] = {grid[i].x * unit, grid[i].y * unit};
    if (!frame) return q;
    Point near = shared_corner(c.pos, frame->leg, frame->narrow);
    Point in = side_offset(opposite(frame->leg));
    for (Point corner : side_endpoints(c.pos, frame->leg)) {
        double off = corner == near ? frame->off_near : frame->off_far;
        for (int i = 0; i < 4; ++i) {
            if (grid[i] == corner) q[i] = {q[i].x + in.x * off, q[i].y + in.y * off};
        }
    }
    return q;
}

double orient(Vec2 a, Vec2 b, Vec2 c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double adx = a.x - d.x, ady = a.y - d.y;
    double bdx = b.x - d.x, bdy = b.y - d.y;
    double cdx = c.x - d.x, cdy = c.y - d.y;
    double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

// Lawson flips until every interior edge is locally Delaunay. The quad's circumradius scale
// sets the tolerance so cocircular lattice quads are left alone.
void make_delaunay(const std::vector<Vec2>& pts, std::vector<std::array<int, 3>>& tris, double scale) {
    const double eps = 1e-9 * scale * scale * scale * scale;
    for (int pass = 0; pass < 1000; ++pass) {
        std::unordered_map<uint64_t, std::vector<int>> edges;
        for (size_t t = 0; t < tris.size(); ++t) {
            for (int e = 0; e < 3; ++e) edges[edge_key(tris[t][e], tris[t][(e + 1) % 3])].push_back(static_cast<int>(t));
        }
        std::vector<uint64_t> keys;
        keys.reserve(edges.size());
        for (const auto& [k, v] : edges) {
            if (v.size() == 2) keys.push_back(k);
        }
        std::sort(keys.begin(), keys.end());
        std::vector<bool> touched(tris.size(), false);
        bool flipped = false;
        for (uint64_t k : keys) {
            const auto& ts = edges[k];
            int t1 = ts[0], t2 = ts[1];
            if (touched[static_cast<size_t>(t1)] || touched[static_cast<size_t>(t2)]) continue;
            auto& A = tris[static_cast<size_t>(t1)];
            auto& B = tris[static_cast<size_t>(t2)];
            int e1 = 0;
            while (edge_key(A[e1], A[(e1 + 1) % 3]) != k) ++e1;
            int p = A[e1], q = A[(e1 + 1) % 3], r = A[(e1 + 2) % 3];
            int s = -1;
            for (int v : B) {
                if (v != p && v != q) s = v;
            }
            const Vec2 &P = pts[static_cast<size_t>(p)], &Q = pts[static_cast<size_t>(q)];
            const Vec2 &R = pts[static_cast<size_t>(r)], &S = pts[static_cast<size_t>(s)];
            if (incircle(P, Q, R, S) <= eps) continue;
            if (orient(P, S, R) <= 0 || orient(S, Q, R) <= 0) continue;
            A = {p, s, r};
            B = {s, q, r};
            touched[static_cast<size_t>(t1)] = touched[static_cast<size_t>(t2)] = true;
            flipped = true;
        }
        if (!flipped) return;
    }
}

std::string num(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

int subdivisions_for(double base_unit, double spacing_cm) {
    if (!(spacing_cm > 0.0) || !std::isfinite(spacing_cm)) {
        throw Error(ErrorCode::InvalidArgument, "mesh spacing must be positive");
    }
    double half = base_unit / (2.0 * spacing_cm);
    int n = static_cast<int>(std::ceil(half - 1e-9));
    return 2 * std::max(1, n);
}

Alignment alignment_from_json(const nlohmann::json& j, const Pattern& pattern) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "alignment must be an object of panel offsets");
    Alignment out;
    for (const auto& [key, value] : j.items()) {
        int id = -1;
        for (const Panel& panel : pattern.panels) {
            if (panel.name == key || std::to_string(panel.id) == key) id = panel.id;
        }
        if (id < 0) throw Error(ErrorCode::UnknownPanel, "alignment names unknown panel '" + key + "'");
        if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
            throw Error(ErrorCode::ParseError, "alignment offset for '" + key + "' must be [x, y]");
        }
        out[id] = {value[0].get<double>(), value[1].get<double>()};
    }
    return out;
}

Alignment drawn_alignment(const Pattern& pattern) {
    Alignment out;
    for (const Panel& panel : pattern.panels) out[panel.id] = {};
    return out;
}

PanelMesh triangulate(const Pattern& pattern, int panel_id, double spacing_cm, Vec2 offset) {
    const double unit = pattern.config.base_unit;
    const int n = subdivisions_for(unit, spacing_cm);
    const Panel& panel = pattern.panel(panel_id);
    FrameMap frames = dart_frames(pattern);
    PanelMesh mesh;
    mesh.panel = panel.id;
    mesh.name = panel.name;
    mesh.subdivisions = n;

    std::map<std::pair<long long, long long>, int> ids;
    auto vertex = [&](Vec2 v) {
        std::pair<long long, long long> key{std::llround(v.x * 1e6), std::llround(v.y * 1e6)};
        auto [it, fresh] = ids.emplace(key, static_cast<int>(mesh.local.size()));
        if (fresh) mesh.local.push_back(v);
        return it->second;
    };
    bool any_dart = false;
    for (const Cell& c : panel.cells) {
        if (!meshed(&c)) continue;
        auto fit = frames.find({panel.id, c.id});
        const DartCellFrame* frame = fit == frames.end() ? nullptr : &fit->second;
        any_dart = any_dart || frame;
        auto q = cell_quad(c, unit, frame);
        std::vector<int> grid(static_cast<size_t>((n + 1) * (n + 1)));
        auto at = [&](int i, int j) -> int& { return grid[static_cast<size_t>(j * (n + 1) + i)]; };
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                double u = static_cast<double>(i) / n, v = static_cast<double>(j) / n;
                Vec2 pnt{(1 - u) * (1 - v) * q[0].x + u * (1 - v) * q[1].x + u * v * q[2].x + (1 - u) * v * q[3].x,
                         (1 - u) * (1 - v) * q[0].y + u * (1 - v) * q[1].y + u * v * q[2].y + (1 - u) * v * q[3].y};
                at(i, j) = vertex(pnt);
            }
        }
        auto add = [&](int a, int b, int c2) {
            if (a == b || b == c2 || a == c2) return;
            const auto& L = mesh.local;
            if (orient(L[static_cast<size_t>(a)], L[static_cast<size_t>(b)], L[static_cast<size_t>(c2)]) <= 1e-12) return;
            mesh.triangles.push_back({a, b, c2});
        };
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                add(at(i, j), at(i + 1, j), at(i + 1, j + 1));
                add(at(i, j), at(i + 1, j + 1), at(i, j + 1));
            }
        }
        std::vector<int> bottom, right, top, left;
        for (int i = 0; i <= n; ++i) {
            bottom.push_back(at(i, 0));
            right.push_back(at(n, i));
            top.push_back(at(n - i, n));
            left.push_back(at(0, n - i));
        }
        mesh.side_vertices[{c.id, static_cast<int>(Side::Bottom)}] = bottom;
        mesh.side_vertices[{c.id, static_cast<int>(Side::Right)}] = right;
        mesh.side_vertices[{c.id, static_cast<int>(Side::Top)}] = top;
        mesh.side_vertices[{c.id, static_cast<int>(Side::Left)}] = left;
    }
    if (mesh.triangles.empty()) {
        throw Error(ErrorCode::DegeneratePanel, "panel " + panel.name + " has no fabric to mesh");
    }
    if (any_dart) make_delaunay(mesh.local, mesh.triangles, unit / n);
    double depth = panel.orientation == FaceOrientation::OutsideUp ? kFrontDepth : -kFrontDepth;
    for (const Vec2& v : mesh.local) {
        mesh.vertices.push_back({(offset.x + v.x) / 100.0, (offset.y + v.y) / 100.0, depth});
    }
    return mesh;
}

namespace {

class ThreadBuilder {
public:
    explicit ThreadBuilder(std::vector<Thread>& out) : out_(out) {}

    void add(int ma, int va, int mb, int vb, ThreadTag tag) {
        if (ma == mb && va == vb) return;
        std::pair<int, int> x{ma, va}, y{mb, vb};
        if (y < x) std::swap(x, y);
        if (!seen_.insert({x, y}).second) return;
        out_.push_back({ma, va, mb, vb, tag});
    }

    // Pairs two vertex runs of equal or integer-multiple resolution, position by position.
    void pair(int ma, const std::vector<int>& a, int mb, const std::vector<int>& b, ThreadTag tag) {
        size_t na = a.size() - 1, nb = b.size() - 1;
        if (na == 0 || nb == 0) throw Error(ErrorCode::ResolutionMismatch, "empty vertex run");
        if (na <= nb && nb % na == 0) {
            size_t m = nb / na;
            for (size_t i = 0; i <= na; ++i) add(ma, a[i], mb, b[i * m], tag);
        } else if (na % nb == 0) {
            size_t m = na / nb;
            for (size_t i = 0; i <= nb; ++i) add(ma, a[i * m], mb, b[i], tag);
        } else {
            throw Error(ErrorCode::ResolutionMismatch, "vertex runs of " + std::to_string(na) + " and " +
                                                           std::to_string(nb) + " steps cannot be matched");
        }
    }

    // Folds a run onto itself about its midpoint.
    void self_match(int m, const std::vector<int>& run, ThreadTag tag) {
        size_t last = run.size() - 1;
        for (size_t i = 0; i < last - i; ++i) add(m, run[i], m, run[last - i], tag);
    }

private:
    std::vector<Thread>& out_;
    std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> seen_;
};

std::vector<int> slice(const std::vector<int>& v, size_t from, size_t to) {
    return {v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(to) + 1};
}

std::vector<int> reversed(std::vector<int> v) {
    std::reverse(v.begin(), v.end());
    return v;
}

}  // namespace

std::vector<Thread> generate_threads(const Pattern& pattern, const std::vector<PanelMesh>& meshes) {
    std::vector<Thread> out;
    if (meshes.empty()) return out;
    for (const PanelMesh& m : meshes) {
        if (m.subdivisions != meshes.front().subdivisions) {
            throw Error(ErrorCode::ResolutionMismatch, "meshes were built with different boundary spacing");
        }
    }
    std::map<int, int> mesh_of;
    for (size_t i = 0; i < meshes.size(); ++i) mesh_of[meshes[i].panel] = static_cast<int>(i);
    auto mesh_index = [&](int panel) {
        auto it = mesh_of.find(panel);
        if (it == mesh_of.end()) throw Error(ErrorCode::ResolutionMismatch, "no mesh for panel " + std::to_string(panel));
        return it->second;
    };
    auto side_run = [&](int panel, int cell, Side side) -> const std::vector<int>& {
        const PanelMesh& m = meshes[static_cast<size_t>(mesh_index(panel))];
        auto it = m.side_vertices.find({cell, static_cast<int>(side)});
        if (it == m.side_vertices.end()) throw Error(ErrorCode::ResolutionMismatch, "cell side was not meshed");
        return it->second;
    };
    FrameMap frames = dart_frames(pattern);
    ThreadBuilder tb(out);

    // Vertex run of a boundary segment in its panel's counter-clockwise order. A seamed narrow
    // end whose partner half was consumed stands for the whole assembled narrow end.
    auto segment_run = [&](int seg_id) {
        const Panel& panel = *pattern.panel_of_segment(seg_id);
        const Segment& seg = *panel.segment_by_id(seg_id);
        const Cell* owner = panel.cell_by_id(seg.cell_id);
        // A folded pleat has no fabric of its own; its seamed side lies on the nearest fabric
        // edge across the pleat run.
        while (owner && owner->kind == CellKind::Pleat) owner = panel.neighbor(*owner, opposite(seg.side));
        if (!owner) return std::vector<int>{};
        std::vector<int> run = side_run(panel.id, owner->id, seg.side);
        if (owner->id != seg.cell_id) return run;
        auto fit = frames.find({panel.id, seg.cell_id});
        if (fit == frames.end() || fit->second.narrow != seg.side || fit->second.index != 0) return run;
        const DartCellFrame& f = fit->second;
        const DartModule& mod = pattern.dart(f.dart).modules[static_cast<size_t>(f.module)];
        const DartHalf& other = f.half == 0 ? mod.second : mod.first;
        if (other.panel != panel.id) return run;
        auto oit = frames.find({other.panel, other.cells.front()});
        const Segment* os = panel.segment_on(other.cells.front(), oit->second.narrow);
        if (!os || os->active) return run;
        std::vector<int> rest = side_run(panel.id, other.cells.front(), oit->second.narrow);
        if (next_ccw(f.narrow) == f.leg) {
            run.insert(run.end(), rest.begin() + 1, rest.end());
            return run;
        }
        rest.insert(rest.end(), run.begin() + 1, run.end());
        return rest;
    };

    for (const Seam& seam : pattern.seams) {
        int ma = mesh_index(seam.panel_a), mb = mesh_index(seam.panel_b);
        std::map<int, size_t> ordinal;
        for (size_t i = 0; i < seam.side_a.size(); ++i) ordinal[seam.side_a[i]] = i;
        for (size_t i = 0; i < seam.side_b.size(); ++i) ordinal[seam.side_b[i]] = i;
        std::set<int> on_a(seam.side_a.begin(), seam.side_a.end());
        // Runs in seam direction: side A follows its panel, side B runs against its panel.
        auto run_of = [&](int seg) { return on_a.count(seg) ? segment_run(seg) : reversed(segment_run(seg)); };
        auto mesh_for = [&](int seg) { return on_a.count(seg) ? ma : mb; };
        std::set<int> gathered_done;
        for (auto [a, b] : seam.matching.pairs) {
            int ca = seam.matching.match_count(a), cb = seam.matching.match_count(b);
            if (ca == 1 && cb == 1) {
                std::vector<int> ra = run_of(a), rb = run_of(b);
                if (!ra.empty() && !rb.empty()) tb.pair(ma, ra, mb, rb, ThreadTag::Seam);
                continue;
            }
            int shorter = ca == 2 ? a : b;
            if (!gathered_done.insert(shorter).second) continue;
            auto longs = seam.matching.partners(shorter);
            std::sort(longs.begin(), longs.end(), [&](int x, int y) { return ordinal[x] < ordinal[y]; });
            std::vector<int> s = run_of(shorter), l1 = run_of(longs[0]), l2 = run_of(longs[1]);
            if (s.empty() || l1.empty() || l2.empty()) continue;
            size_t n = s.size() - 1;
            size_t n1 = l1.size() - 1, n2 = l2.size() - 1;
            if (n % 2 || n1 % 2 || n2 % 2) {
                throw Error(ErrorCode::ResolutionMismatch, "gathered units need an even resolution");
            }
            size_t h = n / 2;
            int ms = mesh_for(shorter), ml = mesh_for(longs[0]);
            // Flat half-units meet the first and third half-units of the longer pair; the second
            // and fourth fold onto themselves.
            tb.pair(ms, slice(s, 0, h), ml, slice(l1, 0, n1 / 2), ThreadTag::Seam);
            tb.pair(ms, slice(s, h, n), ml, slice(l2, 0, n2 / 2), ThreadTag::Seam);
            tb.self_match(ml, slice(l1, n1 / 2, n1), ThreadTag::GatherFold);
            tb.self_match(ml, slice(l2, n2 / 2, n2), ThreadTag::GatherFold);
        }
    }

    for (const Panel& panel : pattern.panels) {
        int m = mesh_index(panel.id);
        for (const Cell& c : panel.cells) {
            if (c.kind != CellKind::Pleat) continue;
            bool horizontal = is_horizontal(c.pleat_dir);
            Side back = horizontal ? Side::Left : Side::Bottom;
            Side ahead = horizontal ? Side::Right : Side::Top;
            auto same_run = [&](const Cell* o) {
                return o && o->kind == CellKind::Pleat && is_horizontal(o->pleat_dir) == horizontal;
            };
            // The edges on either side of a run of pleats are drawn together.
            if (!same_run(panel.neighbor(c, back))) {
                const Cell* end = &c;
                while (same_run(panel.neighbor(*end, ahead))) end = panel.neighbor(*end, ahead);
                const Cell* lo = panel.neighbor(c, back);
                const Cell* hi = panel.neighbor(*end, ahead);
                if (meshed(lo) && meshed(hi)) {
                    // Both runs go left to right (or bottom to top).
                    std::vector<int> a = side_run(panel.id, lo->id, ahead);
                    std::vector<int> b = reversed(side_run(panel.id, hi->id, back));
                    if (!horizontal) a = reversed(a), b = reversed(b);
                    tb.pair(m, a, m, b, ThreadTag::PleatFold);
                }
            }
            for (Side s : folded_sides(c.pleat_dir)) {
                const Cell* nb = panel.neighbor(c, s);
                if (meshed(nb)) tb.self_match(m, side_run(panel.id, nb->id, opposite(s)), ThreadTag::PleatFold);
            }
        }
    }

    for (const Dart& d : pattern.darts) {
        for (const DartModule& mod : d.modules) {
            for (size_t k = 0; k < mod.first.cells.size(); ++k) {
                std::vector<int> legs[2];
                int ms[2];
                const DartHalf* halves[2] = {&mod.first, &mod.second};
                for (int h = 0; h < 2; ++h) {
                    int cell = halves[h]->cells[k];
                    const DartCellFrame& f = frames.at({halves[h]->panel, cell});
                    legs[h] = side_run(halves[h]->panel, cell, f.leg);
                    // Narrow corner first.
                    if (next_ccw(f.narrow) != f.leg) legs[h] = reversed(legs[h]);
                    ms[h] = mesh_index(halves[h]->panel);
                }
                tb.pair(ms[0], legs[0], ms[1], legs[1], ThreadTag::DartClose);
            }
        }
    }
    return out;
}

MeshBundle build_mesh_bundle(const Pattern& pattern, const Alignment& alignment, double spacing_cm) {
    if (pattern.panels.empty()) throw Error(ErrorCode::InvalidArgument, "pattern has no panels");
    MeshBundle bundle;
    bundle.spacing_cm = spacing_cm;
    bundle.revision = pattern.revision;
    for (const Panel& panel : pattern.panels) {
        auto it = alignment.find(panel.id);
        if (it == alignment.end()) {
            throw Error(ErrorCode::MissingAlignment, "no alignment offset for panel " + panel.name);
        }
        bundle.meshes.push_back(triangulate(pattern, panel.id, spacing_cm, it->second));
    }
    bundle.threads = generate_threads(pattern, bundle.meshes);
    return bundle;
}

std::string to_obj(const PanelMesh& mesh) {
    std::ostringstream os;
    os << "# panel " << mesh.panel << " " << mesh.name << "\n";
    os << "o " << (mesh.name.empty() ? "panel" + std::to_string(mesh.panel) : mesh.name) << "\n";
    for (const auto& v : mesh.vertices) os << "v " << num(v[0], 9) << " " << num(v[1], 9) << " " << num(v[2], 9) << "\n";
    for (const auto& t : mesh.triangles) os << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
    return os.str();
}

namespace {

std::string mesh_file_name(const PanelMesh& mesh, size_t index) {
    std::string name;
    for (char ch : mesh.name) name += std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' ? ch : '_';
    if (name.empty()) name = "panel";
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%02zu_", index);
    return prefix + name + ".obj";
}

}  // namespace

std::string sidecar_text(const MeshBundle& bundle) {
    std::ostringstream os;
    os << "# sewing threads; vertex ids are 0-based indices into each mesh file's v records\n";
    os << "revision " << bundle.revision << "\n";
    os << "spacing_cm " << num(bundle.spacing_cm, 6) << "\n";
    os << "fabric areal_density_kg_m2 " << num(bundle.fabric.areal_density, 6) << "\n";
    os << "fabric stiffness " << num(bundle.fabric.stiffness, 6) << "\n";
    os << "fabric substeps " << bundle.fabric.substeps << "\n";
    os << "fabric frames " << bundle.fabric.frames << "\n";
    for (size_t i = 0; i < bundle.meshes.size(); ++i) {
        const PanelMesh& m = bundle.meshes[i];
        double depth = m.vertices.empty() ? 0.0 : m.vertices.front()[2];
        os << "mesh " << i << " " << mesh_file_name(m, i) << " panel " << m.panel << " depth " << num(depth, 6) << "\n";
    }
    for (const Thread& t : bundle.threads) {
        os << "thread " << t.mesh_a << " " << t.vid_a << " " << t.mesh_b << " " << t.vid_b << " " << to_string(t.tag)
           << "\n";
    }
    return os.str();
}

std::vector<std::pair<std::string, std::string>> bundle_files(const MeshBundle& bundle) {
    if (bundle.meshes.empty()) throw Error(ErrorCode::InvalidArgument, "mesh bundle is empty");
    std::vector<std::pair<std::string, std::string>> out;
    for (size_t i = 0; i < bundle.meshes.size(); ++i) out.emplace_back(mesh_file_name(bundle.meshes[i], i), to_obj(bundle.meshes[i]));
    out.emplace_back("threads.txt", sidecar_text(bundle));
    return out;
}

std::vector<std::string> export_bundle(const MeshBundle& bundle, const std::filesystem::path& dir) {
    auto files = bundle_files(bundle);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::string> names;
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream f(dir / name, std::ios::binary);
        f << text;
        if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + (dir / name).string());
        names.push_back(name);
    };
    for (const auto& [name, text] : files) write(name, text);
    return names;
}

std::vector<std::string> mesh_violations(const Pattern& pattern, const MeshBundle& bundle) {
    std::vector<std::string> out;
    FrameMap frames = dart_frames(pattern);
    const double unit = pattern.config.base_unit;
    std::vector<std::set<int>> on_boundary(bundle.meshes.size());
    for (size_t mi = 0; mi < bundle.meshes.size(); ++mi) {
        const PanelMesh& m = bundle.meshes[mi];
        const std::string tag = "mesh " + std::to_string(mi) + ": ";
        std::map<uint64_t, int> edge_use;
        for (const auto& t : m.triangles) {
            const Vec2 &a = m.local[static_cast<size_t>(t[0])], &b = m.local[static_cast<size_t>(t[1])],
                       &c = m.local[static_cast<size_t>(t[2])];
            if (orient(a, b, c) <= 0) out.push_back(tag + "triangle is not counter-clockwise");
            for (int e = 0; e < 3; ++e) {
                int p = t[e], q = t[(e + 1) % 3];
                ++edge_use[edge_key(p, q)];
                if (dist(m.local[static_cast<size_t>(p)], m.local[static_cast<size_t>(q)]) > 2 * bundle.spacing_cm + 1e-9) {
                    out.push_back(tag + "triangle edge longer than twice the spacing");
                }
            }
        }
        double mesh_len = 0;
        for (auto [k, uses] : edge_use) {
            int p = static_cast<int>(k >> 32), q = static_cast<int>(k & 0xffffffffu);
            if (uses == 1) {
                mesh_len += dist(m.local[static_cast<size_t>(p)], m.local[static_cast<size_t>(q)]);
                on_boundary[mi].insert(p);
                on_boundary[mi].insert(q);
            } else if (uses != 2) {
                out.push_back(tag + "edge shared by more than two triangles");
            }
        }
        // Expected boundary: every meshed cell side that faces no fabric, legs included.
        const Panel& panel = pattern.panel(m.panel);
        double expected = 0;
        for (const Cell& c : panel.cells) {
            if (!meshed(&c)) continue;
            auto fit = frames.find({panel.id, c.id});
            const DartCellFrame* frame = fit == frames.end() ? nullptr : &fit->second;
            auto q = cell_quad(c, unit, frame);
            for (int s = 0; s < 4; ++s) {
                Side side = kSides[static_cast<size_t>(s)];
                const Cell* nb = panel.neighbor(c, side);
                bool open = !meshed(nb) || (frame && side == frame->leg);
                if (open) expected += dist(q[static_cast<size_t>(s)], q[static_cast<size_t>((s + 1) % 4)]);
            }
        }
        if (std::fabs(mesh_len - expected) > 1e-6 * std::max(1.0, expected)) {
            out.push_back(tag + "boundary length " + num(mesh_len, 6) + " differs from " + num(expected, 6));
        }
    }
    for (const Thread& t : bundle.threads) {
        for (auto [mi, v] : {std::pair{t.mesh_a, t.vid_a}, std::pair{t.mesh_b, t.vid_b}}) {
            if (mi < 0 || mi >= static_cast<int>(bundle.meshes.size()) || !on_boundary[static_cast<size_t>(mi)].count(v)) {
                out.push_back("thread endpoint " + std::to_string(mi) + ":" + std::to_string(v) + " is not on a boundary");
            }
        }
    }
    return out;
}

}  // namespace garmod
