#include "garmod/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace garmod {

using nlohmann::json;

namespace {

json point_json(Point p) { return json::array({p.x, p.y}); }

Point point_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::ParseError, "expected [x, y]");
    return {j[0].get<int>(), j[1].get<int>()};
}

json points_json(const std::vector<Point>& pts) {
    json out = json::array();
    for (Point p : pts) out.push_back(point_json(p));
    return out;
}

std::vector<Point> points_from(const json& j) {
    std::vector<Point> out;
    for (const json& e : j) out.push_back(point_from(e));
    return out;
}

std::string seam_side_name(SeamSideId s) { return s == SeamSideId::A ? "a" : "b"; }

SeamSideId seam_side_from(const std::string& s) {
    if (s == "a") return SeamSideId::A;
    if (s == "b") return SeamSideId::B;
    throw Error(ErrorCode::ParseError, "seam side must be a or b");
}

std::string strip_side_name(StripSide s) { return s == StripSide::After ? "after" : "before"; }

StripSide strip_side_from(const std::string& s) {
    if (s == "after") return StripSide::After;
    if (s == "before") return StripSide::Before;
    throw Error(ErrorCode::ParseError, "strip side must be before or after");
}

int base_revision(const Pattern& p) { return p.features.empty() ? p.revision : p.features.front().revision - 1; }

// Drawing and stitching state described by the document, before any features.
struct Base {
    PatternConfig config;
    Phase phase = Phase::Draw;
    int revision = 0;
    json panels, seams;
};

json panels_json(const Pattern& p) {
    json out = json::array();
    for (const Panel& panel : p.panels) {
        const auto& outline = p.phase == Phase::Features ? panel.drawn_outline : panel.outline;
        out.push_back({{"id", panel.id},
                       {"name", panel.name},
                       {"orientation", to_string(panel.orientation)},
                       {"outline", points_json(outline)},
                       {"break_points", points_json(panel.break_points)}});
    }
    return out;
}

json seams_json(const Pattern& p) {
    json out = json::array();
    for (const Seam& s : p.seams) {
        out.push_back({{"id", s.id},
                       {"panel_a", s.panel_a},
                       {"a_from", point_json(s.a_from)},
                       {"a_to", point_json(s.a_to)},
                       {"panel_b", s.panel_b},
                       {"b_from", point_json(s.b_from)},
                       {"b_to", point_json(s.b_to)}});
    }
    return out;
}

Pattern build_base(const Base& b) {
    Pattern p = new_pattern(b.config);
    for (const json& j : b.panels) {
        int id = add_panel(p, points_from(j.at("outline")), j.at("name").get<std::string>());
        if (id != j.at("id").get<int>()) throw Error(ErrorCode::ParseError, "panel ids must be consecutive from 0");
        p.panel(id).orientation = orientation_from_string(j.at("orientation").get<std::string>());
    }
    if (b.phase == Phase::Draw) {
        p.revision = b.revision;
        return p;
    }
    begin_stitching(p);
    for (const json& j : b.panels) {
        int id = j.at("id").get<int>();
        for (Point bp : points_from(j.at("break_points"))) insert_break_point(p, id, bp);
    }
    for (const json& j : b.seams) {
        int a = j.at("panel_a").get<int>(), pb = j.at("panel_b").get<int>();
        int id = -1;
        try {
            int ea = edge_between(p, a, point_from(j.at("a_from")), point_from(j.at("a_to")));
            int eb = edge_between(p, pb, point_from(j.at("b_from")), point_from(j.at("b_to")));
            id = stitch(p, {a, ea}, {pb, eb});
        } catch (const Error& e) {
            throw Error(e.code(), "seam " + std::to_string(j.value("id", -1)) + ": " + e.detail());
        }
        if (id != j.at("id").get<int>()) throw Error(ErrorCode::ParseError, "seam ids must be consecutive from 0");
    }
    if (b.phase == Phase::Features) enter_features_phase(p);
    p.revision = b.revision;
    return p;
}

void replay(Pattern& p, const std::vector<FeatureRecord>& features) {
    for (const FeatureRecord& f : features) {
        p.revision = f.revision - 1;
        EditResult r = apply_feature(p, f);
        if (!r.accepted()) {
            throw Error(ErrorCode::ReplayMismatch, "logged " + std::string(to_string(f.kind)) + " at revision " +
                                                       std::to_string(f.revision) + " was rejected: " + r.message);
        }
    }
}

Base base_of(const Pattern& p) {
    Base b;
    b.config = p.config;
    b.phase = p.phase;
    b.revision = base_revision(p);
    b.panels = panels_json(p);
    b.seams = seams_json(p);
    return b;
}

void mix(uint64_t& h, int64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= static_cast<uint64_t>(v >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
    }
}

}  // namespace

json config_json(const PatternConfig& c) {
    return {{"base_unit", c.base_unit},
            {"seam_allowance", c.seam_allowance},
            {"connector_density", c.connector_density},
            {"max_panel_extent", c.max_panel_extent}};
}

PatternConfig config_from_json(const json& j) {
    PatternConfig c;
    c.base_unit = j.value("base_unit", c.base_unit);
    c.seam_allowance = j.value("seam_allowance", c.seam_allowance);
    c.connector_density = j.value("connector_density", c.connector_density);
    c.max_panel_extent = j.value("max_panel_extent", c.max_panel_extent);
    validate_config(c);
    return c;
}

json feature_json(const FeatureRecord& f) {
    json j = {{"kind", to_string(f.kind)}, {"revision", f.revision}};
    switch (f.kind) {
    case FeatureKind::Gather:
        j["seam"] = f.seam;
        j["side"] = seam_side_name(f.seam_side);
        break;
    case FeatureKind::ConvertPleat:
    case FeatureKind::InsertPleat:
        j["panel"] = f.panel;
        j["cell"] = point_json(f.cell);
        j["direction"] = to_string(f.direction);
        break;
    case FeatureKind::Dart:
        j["panel"] = f.panel;
        j["anchor"] = point_json(f.cell);
        j["orientation"] = to_string(f.dart_orientation);
        j["width"] = f.width;
        j["height"] = f.height;
        break;
    case FeatureKind::InsertStrip:
        j["strip_side"] = strip_side_name(f.strip_side);
        [[fallthrough]];
    case FeatureKind::DeleteStrip:
        j["panel"] = f.panel;
        j["cell"] = point_json(f.cell);
        j["axis"] = to_string(f.axis);
        break;
    case FeatureKind::ResolveDelete:
    case FeatureKind::ResolveExpand:
        j["segment"] = f.segment;
        break;
    }
    return j;
}

FeatureRecord feature_from_json(const json& j) {
    try {
        FeatureRecord f;
        f.kind = feature_kind_from_string(j.at("kind").get<std::string>());
        f.revision = j.value("revision", 0);
        switch (f.kind) {
        case FeatureKind::Gather:
            f.seam = j.at("seam").get<int>();
            f.seam_side = seam_side_from(j.at("side").get<std::string>());
            break;
        case FeatureKind::ConvertPleat:
        case FeatureKind::InsertPleat:
            f.panel = j.at("panel").get<int>();
            f.cell = point_from(j.at("cell"));
            f.direction = direction_from_string(j.at("direction").get<std::string>());
            break;
        case FeatureKind::Dart:
            f.panel = j.at("panel").get<int>();
            f.cell = point_from(j.at("anchor"));
            f.dart_orientation = dart_orientation_from_string(j.at("orientation").get<std::string>());
            f.width = j.at("width").get<double>();
            f.height = j.at("height").get<double>();
            break;
        case FeatureKind::InsertStrip:
            f.strip_side = strip_side_from(j.value("strip_side", std::string("after")));
            [[fallthrough]];
        case FeatureKind::DeleteStrip:
            f.panel = j.at("panel").get<int>();
            f.cell = point_from(j.at("cell"));
            f.axis = axis_from_string(j.at("axis").get<std::string>());
            break;
        case FeatureKind::ResolveDelete:
        case FeatureKind::ResolveExpand:
            f.segment = j.at("segment").get<int>();
            break;
        }
        return f;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad feature record: ") + e.what());
    }
}

uint64_t grid_digest(const Pattern& p) {
    uint64_t h = 1469598103934665603ull;
    mix(h, p.revision);
    mix(h, static_cast<int>(p.phase));
    for (const Panel& panel : p.panels) {
        mix(h, panel.id);
        mix(h, static_cast<int>(panel.orientation));
        for (Point v : panel.outline) {
            mix(h, v.x);
            mix(h, v.y);
        }
        for (const Cell& c : panel.cells) {
            for (int v : {c.id, c.pos.x, c.pos.y, static_cast<int>(c.kind), static_cast<int>(c.pleat_dir), c.dart_id}) mix(h, v);
        }
        for (const Segment& s : panel.segments) {
            for (int v : {s.id, s.cell_id, static_cast<int>(s.side), s.seam_id, static_cast<int>(s.active)}) mix(h, v);
        }
    }
    for (const Seam& s : p.seams) {
        mix(h, s.id);
        for (int v : s.side_a) mix(h, v);
        mix(h, -1);
        for (int v : s.side_b) mix(h, v);
        for (auto [a, b] : s.matching.pairs) {
            mix(h, a);
            mix(h, b);
        }
    }
    for (const Dart& d : p.darts) {
        for (int v : {d.id, d.panel, d.anchor.x, d.anchor.y, static_cast<int>(d.orientation)}) mix(h, v);
        mix(h, static_cast<int64_t>(d.width * 1e6));
        mix(h, static_cast<int64_t>(d.height * 1e6));
        for (const DartModule& m : d.modules) {
            for (const DartHalf* half : {&m.first, &m.second}) {
                mix(h, half->panel);
                for (int c : half->cells) mix(h, c);
            }
            mix(h, static_cast<int>(m.narrow_side));
        }
        for (int s : d.consumed_segments) mix(h, s);
    }
    return h;
}

std::string hex_digest(uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

std::string to_json(const Pattern& p) {
    json features = json::array();
    for (const FeatureRecord& f : p.features) features.push_back(feature_json(f));
    json doc = {{"format_version", kPatternFormatVersion},
                {"config", config_json(p.config)},
                {"phase", to_string(p.phase)},
                {"revision", p.revision},
                {"base_revision", base_revision(p)},
                {"panels", panels_json(p)},
                {"seams", seams_json(p)},
                {"features", features},
                {"grid_digest", hex_digest(grid_digest(p))}};
    return doc.dump(2) + "\n";
}

Pattern pattern_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("pattern file is not JSON: ") + e.what());
    }
    Base b;
    std::vector<FeatureRecord> features;
    std::string digest;
    int revision = 0;
    try {
        int version = doc.at("format_version").get<int>();
        if (version != kPatternFormatVersion) {
            throw Error(ErrorCode::ParseError, "unsupported format_version " + std::to_string(version));
        }
        b.config = config_from_json(doc.at("config"));
        b.phase = phase_from_string(doc.at("phase").get<std::string>());
        b.revision = doc.at("base_revision").get<int>();
        b.panels = doc.at("panels");
        b.seams = doc.at("seams");
        for (const json& f : doc.at("features")) features.push_back(feature_from_json(f));
        revision = doc.at("revision").get<int>();
        digest = doc.at("grid_digest").get<std::string>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed pattern file: ") + e.what());
    }
    Pattern p;
    try {
        p = build_base(b);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed panel or seam: ") + e.what());
    }
    replay(p, features);
    if (p.revision != revision) {
        throw Error(ErrorCode::ReplayMismatch, "replay ended at revision " + std::to_string(p.revision) +
                                                   ", file says " + std::to_string(revision));
    }
    if (hex_digest(grid_digest(p)) != digest) {
        throw Error(ErrorCode::ReplayMismatch, "replayed grid does not match the stored digest");
    }
    return p;
}

void save_pattern(const Pattern& p, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
    out << to_json(p);
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path);
}

Pattern load_pattern(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return pattern_from_json(ss.str());
}

Pattern replay_prefix(const Pattern& p, size_t count) {
    if (count > p.features.size()) throw Error(ErrorCode::InvalidArgument, "feature log is shorter than requested");
    Pattern out = build_base(base_of(p));
    replay(out, {p.features.begin(), p.features.begin() + static_cast<long>(count)});
    return out;
}

Pattern undo(const Pattern& p) {
    if (p.features.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to undo");
    return replay_prefix(p, p.features.size() - 1);
}

json grid_json(const Pattern& p) {
    json panels = json::array();
    for (const Panel& panel : p.panels) {
        json cells = json::array();
        for (const Cell& c : panel.cells) {
            json cj = {{"id", c.id}, {"pos", point_json(c.pos)}, {"kind", to_string(c.kind)}};
            if (c.kind == CellKind::Pleat) cj["direction"] = to_string(c.pleat_dir);
            if (c.kind == CellKind::DartHole) cj["dart"] = c.dart_id;
            cells.push_back(cj);
        }
        json segs = json::array();
        for (const Segment& s : panel.segments) {
            segs.push_back({{"id", s.id}, {"cell", s.cell_id}, {"side", to_string(s.side)},
                            {"state", to_string(s.state())}, {"seam", s.seam_id}});
        }
        panels.push_back({{"id", panel.id}, {"name", panel.name}, {"orientation", to_string(panel.orientation)},
                          {"outline", points_json(panel.outline)}, {"break_points", points_json(panel.break_points)},
                          {"cells", cells}, {"segments", segs}});
    }
    json seams = json::array();
    for (const Seam& s : p.seams) {
        json pairs = json::array();
        for (auto [a, b] : s.matching.pairs) pairs.push_back({a, b});
        seams.push_back({{"id", s.id}, {"panel_a", s.panel_a}, {"panel_b", s.panel_b}, {"side_a", s.side_a},
                         {"side_b", s.side_b}, {"matching", pairs}});
    }
    json darts = json::array();
    for (const Dart& d : p.darts) {
        json modules = json::array();
        for (const DartModule& m : d.modules) {
            modules.push_back({{"first", {{"panel", m.first.panel}, {"cells", m.first.cells}}},
                               {"second", {{"panel", m.second.panel}, {"cells", m.second.cells}}},
                               {"narrow_side", to_string(m.narrow_side)}});
        }
        darts.push_back({{"id", d.id}, {"panel", d.panel}, {"anchor", point_json(d.anchor)},
                         {"orientation", to_string(d.orientation)}, {"width", d.width}, {"height", d.height},
                         {"case", d.case_label}, {"modules", modules}, {"consumed_segments", d.consumed_segments}});
    }
    return {{"revision", p.revision}, {"phase", to_string(p.phase)}, {"config", config_json(p.config)},
            {"panels", panels}, {"seams", seams}, {"darts", darts}};
}

json edit_result_json(const EditResult& r) {
    json j = {{"status", to_string(r.status)}};
    if (!r.accepted()) {
        j["reason"] = to_string(r.reason);
        j["message"] = r.message;
        return j;
    }
    j["case"] = r.case_label;
    j["revision"] = r.diff.revision_after;
    j["affected_seams"] = r.affected_seams;
    json diffs = json::array();
    for (const MatchingDiff& d : r.matching_diffs) {
        json removed = json::array(), added = json::array();
        for (auto [a, b] : d.removed) removed.push_back({a, b});
        for (auto [a, b] : d.added) added.push_back({a, b});
        diffs.push_back({{"seam", d.seam}, {"removed", removed}, {"added", added}});
    }
    j["matching_diffs"] = diffs;
    json panels = json::array();
    for (const PanelDiff& pd : r.diff.panels) {
        json cells = json::array();
        for (const Cell& c : pd.cells_upserted) {
            json cj = {{"id", c.id}, {"pos", point_json(c.pos)}, {"kind", to_string(c.kind)}};
            if (c.kind == CellKind::Pleat) cj["direction"] = to_string(c.pleat_dir);
            if (c.kind == CellKind::DartHole) cj["dart"] = c.dart_id;
            cells.push_back(cj);
        }
        json segs = json::array();
        for (const Segment& s : pd.segments_upserted) {
            segs.push_back({{"id", s.id}, {"cell", s.cell_id}, {"side", to_string(s.side)},
                            {"state", to_string(s.state())}, {"seam", s.seam_id}});
        }
        panels.push_back({{"panel", pd.panel}, {"outline", points_json(pd.outline)}, {"cells_upserted", cells},
                          {"cells_removed", pd.cells_removed}, {"segments_upserted", segs},
                          {"segments_removed", pd.segments_removed}});
    }
    j["grid_diff"] = panels;
    return j;
}

json supply_json(const ModuleSupply& s) {
    json counts = json::object();
    for (const auto& [side, n] : s.counts) counts[std::to_string(side)] = n ? json(*n) : json(nullptr);
    return {{"format_version", kPatternFormatVersion}, {"supply", counts}};
}

ModuleSupply supply_from_json(const json& j) {
    ModuleSupply s;
    try {
        if (j.contains("sizes")) {
            for (const json& side : j.at("sizes")) s.counts[side.get<int>()] = std::nullopt;
        } else {
            if (j.value("format_version", kPatternFormatVersion) != kPatternFormatVersion) {
                throw Error(ErrorCode::ParseError, "unsupported supply format version");
            }
            for (const auto& [side, n] : j.at("supply").items()) {
                s.counts[std::stoi(side)] = n.is_null() ? std::nullopt : std::optional<int>(n.get<int>());
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed supply: ") + e.what());
    } catch (const std::logic_error& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed supply side: ") + e.what());
    }
    validate_supply(s);
    return s;
}

json assembly_json(const Assembly& a, const Pattern& p) {
    json placements = json::array();
    for (const Placement& pl : a.placements) {
        json e = {{"panel", pl.panel}, {"size", pl.size}, {"origin", point_json(pl.origin)}, {"role", to_string(pl.role)}};
        if (pl.role == ModuleRole::Pleat) e["direction"] = to_string(pl.pleat_dir);
        if (pl.role == ModuleRole::DartPair) {
            e["dart"] = pl.dart_id;
            e["module"] = pl.module_index;
        }
        placements.push_back(e);
    }
    json usage = json::object();
    for (auto [side, n] : a.usage()) usage[std::to_string(side)] = n;
    const SolveStats& st = a.stats;
    return {{"format_version", kPatternFormatVersion},
            {"revision", a.revision},
            {"pattern_digest", hex_digest(grid_digest(p))},
            {"objective", a.objective},
            {"module_count", a.placements.size()},
            {"usage", usage},
            {"placements", placements},
            {"stats",
             {{"cells", st.cells},
              {"variables", st.variables},
              {"components", st.components},
              {"runtime_ms", st.runtime_ms},
              {"lp_bound", st.lp_bound},
              {"lower_bound", st.lower_bound},
              {"nodes", st.nodes},
              {"optimal", st.optimal}}}};
}

Assembly assembly_from_json(const json& j) {
    Assembly a;
    try {
        if (j.at("format_version").get<int>() != kPatternFormatVersion) {
            throw Error(ErrorCode::ParseError, "unsupported assembly format version");
        }
        a.revision = j.at("revision").get<int>();
        a.objective = j.at("objective").get<int>();
        for (const json& e : j.at("placements")) {
            Placement pl;
            pl.panel = e.at("panel").get<int>();
            pl.size = e.at("size").get<int>();
            pl.origin = point_from(e.at("origin"));
            pl.role = module_role_from_string(e.at("role").get<std::string>());
            if (pl.role == ModuleRole::Pleat) pl.pleat_dir = direction_from_string(e.at("direction").get<std::string>());
            if (pl.role == ModuleRole::DartPair) {
                pl.dart_id = e.at("dart").get<int>();
                pl.module_index = e.at("module").get<int>();
            }
            a.placements.push_back(pl);
        }
        const json& st = j.at("stats");
        a.stats.cells = st.at("cells").get<size_t>();
        a.stats.variables = st.at("variables").get<size_t>();
        a.stats.components = st.at("components").get<size_t>();
        a.stats.runtime_ms = st.at("runtime_ms").get<double>();
        a.stats.lp_bound = st.at("lp_bound").get<double>();
        a.stats.lower_bound = st.at("lower_bound").get<int>();
        a.stats.nodes = st.at("nodes").get<long>();
        a.stats.optimal = st.at("optimal").get<bool>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("malformed assembly: ") + e.what());
    }
    return a;
}

}  // namespace garmod
