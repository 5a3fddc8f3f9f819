#include "garmod/edit_api.hpp"

#include <optional>

#include "garmod/edit_engine.hpp"
#include "garmod/serialize.hpp"

namespace garmod {

namespace {

using nlohmann::json;

Point point_of(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::ParseError, "point must be [x, y]");
    return {j[0].get<int>(), j[1].get<int>()};
}

std::vector<Point> points_of(const json& j) {
    std::vector<Point> out;
    for (const json& e : j) out.push_back(point_of(e));
    return out;
}

EdgeRef edge_of(const json& j) { return {j.at("panel").get<int>(), j.at("index").get<int>()}; }

const std::vector<std::string> kStructural = {
    "add_panel", "add_panel_cm", "rename_panel", "flip_panel", "translate_panel", "begin_stitching",
    "insert_break_point", "stitch", "stitch_span", "enter_features", "undo",
};

// Returns a result document for the structural edit, or nothing when the kind is a feature.
std::optional<json> apply_structural(Pattern& p, const std::string& kind, const json& e) {
    json extra = json::object();
    if (kind == "add_panel") {
        extra["panel"] = add_panel(p, points_of(e.at("outline")), e.value("name", std::string()));
    } else if (kind == "add_panel_cm") {
        std::vector<std::pair<double, double>> outline;
        for (const json& v : e.at("outline")) outline.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
        extra["panel"] = add_panel_cm(p, outline, e.value("name", std::string()));
    } else if (kind == "rename_panel") {
        rename_panel(p, e.at("panel").get<int>(), e.at("name").get<std::string>());
    } else if (kind == "flip_panel") {
        flip_panel(p, e.at("panel").get<int>());
    } else if (kind == "translate_panel") {
        translate_panel(p, e.at("panel").get<int>(), point_of(e.at("offset")));
    } else if (kind == "begin_stitching") {
        begin_stitching(p);
    } else if (kind == "insert_break_point") {
        insert_break_point(p, e.at("panel").get<int>(), point_of(e.at("point")));
    } else if (kind == "stitch") {
        extra["seam"] = stitch(p, edge_of(e.at("a")), edge_of(e.at("b")));
    } else if (kind == "stitch_span") {
        extra["seam"] = stitch_span(p, e.at("panel_a").get<int>(), point_of(e.at("a_from")), point_of(e.at("a_to")),
                                    e.at("panel_b").get<int>(), point_of(e.at("b_from")), point_of(e.at("b_to")));
    } else if (kind == "enter_features") {
        enter_features_phase(p);
    } else if (kind == "undo") {
        p = undo(p);
    } else {
        return std::nullopt;
    }
    json body = {{"status", "accepted"}, {"revision", p.revision}, {"grid", grid_json(p)}};
    body.update(extra);
    return body;
}

}  // namespace

std::vector<std::string> edit_kinds() {
    std::vector<std::string> out = kStructural;
    for (FeatureKind k : {FeatureKind::Gather, FeatureKind::ConvertPleat, FeatureKind::InsertPleat, FeatureKind::Dart,
                          FeatureKind::InsertStrip, FeatureKind::DeleteStrip, FeatureKind::ResolveDelete,
                          FeatureKind::ResolveExpand}) {
        out.emplace_back(to_string(k));
    }
    return out;
}

EditOutcome apply_edit(Pattern& p, const json& edit) {
    if (!edit.is_object() || !edit.contains("kind") || !edit["kind"].is_string()) {
        throw Error(ErrorCode::ParseError, "edit must be an object with a string kind");
    }
    const std::string kind = edit["kind"].get<std::string>();
    EditOutcome out;
    Pattern work = p;
    try {
        if (auto body = apply_structural(work, kind, edit)) {
            out.body = std::move(*body);
            p = std::move(work);
            return out;
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, "bad " + kind + " edit: " + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        out.accepted = false;
        out.reason = e.code();
        out.message = e.detail();
        out.body = {{"status", "rejected"}, {"reason", to_string(e.code())}, {"message", e.detail()}};
        return out;
    }
    FeatureRecord feature = feature_from_json(edit);
    EditResult r;
    try {
        r = apply_feature(p, feature);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        r.status = EditStatus::Rejected;
        r.reason = e.code();
        r.message = e.detail();
    }
    out.accepted = r.accepted();
    out.reason = r.reason;
    out.message = r.message;
    out.body = edit_result_json(r);
    return out;
}

}  // namespace garmod
