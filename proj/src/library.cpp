#include "garmod/library.hpp"

#include "garmod/edit_api.hpp"
#include "garmod/edit_engine.hpp"
#include "garmod/error.hpp"
#include "garmod/serialize.hpp"

namespace garmod {

namespace {

std::vector<Point> rect(int x, int y, int w, int h) { return {{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}}; }

std::vector<Point> shifted(std::vector<Point> loop, int dx) {
    for (Point& p : loop) p.x += dx;
    return loop;
}

// T-shaped bodice: body 6 wide and 5 high with sleeves 2 wide and 2 high on each side.
Pattern tee(const PatternConfig& c) {
    Pattern p = new_pattern(c);
    std::vector<Point> shape = {{2, 0}, {8, 0}, {8, 5}, {10, 5}, {10, 7}, {0, 7}, {0, 5}, {2, 5}};
    int front = add_panel(p, shape, "front");
    int back = add_panel(p, shifted(shape, 12), "back");
    begin_stitching(p);
    stitch_span(p, front, {8, 0}, {8, 5}, back, {14, 5}, {14, 0});
    stitch_span(p, front, {8, 5}, {10, 5}, back, {12, 5}, {14, 5});
    stitch_span(p, front, {2, 5}, {2, 0}, back, {20, 0}, {20, 5});
    stitch_span(p, front, {0, 5}, {2, 5}, back, {20, 5}, {22, 5});
    // Shoulders; the neck opening between them stays free.
    stitch_span(p, front, {10, 7}, {7, 7}, back, {15, 7}, {12, 7});
    stitch_span(p, front, {3, 7}, {0, 7}, back, {22, 7}, {19, 7});
    enter_features_phase(p);
    return p;
}

Pattern skirt(const PatternConfig& c) {
    Pattern p = new_pattern(c);
    int front = add_panel(p, rect(0, 0, 6, 5), "front");
    int back = add_panel(p, rect(7, 0, 6, 5), "back");
    begin_stitching(p);
    stitch_span(p, front, {6, 0}, {6, 5}, back, {7, 5}, {7, 0});
    stitch_span(p, back, {13, 0}, {13, 5}, front, {0, 5}, {0, 0});
    enter_features_phase(p);
    return p;
}

// Front and back each span both legs below a seat; legs 3 wide, 6 long, crotch 1 wide.
Pattern trousers(const PatternConfig& c) {
    Pattern p = new_pattern(c);
    std::vector<Point> shape = {{0, 0}, {3, 0}, {3, 6}, {4, 6}, {4, 0}, {7, 0}, {7, 9}, {0, 9}};
    int front = add_panel(p, shape, "front");
    int back = add_panel(p, shifted(shape, 9), "back");
    begin_stitching(p);
    stitch_span(p, front, {0, 9}, {0, 0}, back, {16, 0}, {16, 9});
    stitch_span(p, front, {7, 0}, {7, 9}, back, {9, 9}, {9, 0});
    stitch_span(p, front, {3, 0}, {3, 6}, back, {13, 6}, {13, 0});
    stitch_span(p, front, {4, 6}, {4, 0}, back, {12, 0}, {12, 6});
    stitch_span(p, front, {3, 6}, {4, 6}, back, {12, 6}, {13, 6});
    enter_features_phase(p);
    return p;
}

// Upper layer 6 x 4 per side, lower layer 6 x 3 per side.
Pattern compound(const PatternConfig& c) {
    Pattern p = new_pattern(c);
    int ft = add_panel(p, rect(0, 8, 6, 4), "front_top");
    int bt = add_panel(p, rect(7, 8, 6, 4), "back_top");
    int fb = add_panel(p, rect(0, 0, 6, 3), "front_bottom");
    int bb = add_panel(p, rect(14, 0, 6, 3), "back_bottom");
    begin_stitching(p);
    stitch_span(p, ft, {0, 8}, {6, 8}, fb, {6, 3}, {0, 3});
    stitch_span(p, bt, {7, 8}, {13, 8}, bb, {20, 3}, {14, 3});
    stitch_span(p, ft, {6, 8}, {6, 12}, bt, {7, 12}, {7, 8});
    stitch_span(p, bt, {13, 8}, {13, 12}, ft, {0, 12}, {0, 8});
    stitch_span(p, fb, {6, 0}, {6, 3}, bb, {14, 3}, {14, 0});
    stitch_span(p, bb, {20, 0}, {20, 3}, fb, {0, 3}, {0, 0});
    enter_features_phase(p);
    return p;
}

}  // namespace

std::vector<TemplateInfo> template_list() {
    return {
        {"compound-skirt", "two-layer skirt: 6x4 upper and 6x3 lower panels, front and back"},
        {"skirt", "straight skirt: 6x5 front and back panels"},
        {"tee", "T-shaped bodice front and back with short sleeves and a neck opening"},
        {"trousers", "two-leg front and back panels joined at side seams, inseams and crotch"},
    };
}

Pattern make_template(const std::string& name, const PatternConfig& config) {
    validate_config(config);
    if (name == "tee") return tee(config);
    if (name == "skirt") return skirt(config);
    if (name == "trousers") return trousers(config);
    if (name == "compound-skirt") return compound(config);
    throw Error(ErrorCode::NotFound, "no template named '" + name + "'");
}

nlohmann::json compound_skirt_script() {
    using namespace compound_skirt;
    using nlohmann::json;
    json script = json::array();
    script.push_back({{"kind", "gather"}, {"seam", kSeamFront}, {"side", "b"}});
    script.push_back({{"kind", "gather"}, {"seam", kSeamBack}, {"side", "b"}});
    for (int x : {0, 2, 4}) {
        script.push_back({{"kind", "convert_pleat"}, {"panel", kFrontTop}, {"cell", {x, 11}}, {"direction", "right"}});
    }
    for (int x : {7, 9, 11}) {
        script.push_back({{"kind", "convert_pleat"}, {"panel", kBackTop}, {"cell", {x, 11}}, {"direction", "right"}});
    }
    // Diamonds centred on each upper side seam.
    script.push_back({{"kind", "dart"}, {"panel", kFrontTop}, {"anchor", {6, 10}}, {"orientation", "vertical"},
                      {"width", 8.0}, {"height", 8.0}});
    script.push_back({{"kind", "dart"}, {"panel", kBackTop}, {"anchor", {13, 10}}, {"orientation", "vertical"},
                      {"width", 8.0}, {"height", 8.0}});
    return script;
}

ScriptOutcome apply_script(Pattern& p, const nlohmann::json& script) {
    if (!script.is_array()) throw Error(ErrorCode::ParseError, "edit script must be an array of edits");
    ScriptOutcome out;
    for (size_t i = 0; i < script.size(); ++i) {
        EditOutcome r = apply_edit(p, script[i]);
        if (!r.accepted) {
            out.failed_at = static_cast<int>(i);
            out.reason = std::string(to_string(r.reason));
            out.message = r.message;
            return out;
        }
    }
    return out;
}

}  // namespace garmod
