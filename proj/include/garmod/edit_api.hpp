#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "garmod/error.hpp"
#include "garmod/pattern.hpp"

namespace garmod {

// One edit document per engine operation, shared by edit scripts and the HTTP service:
//   add_panel {outline: [[x, y], ...], name}      add_panel_cm {outline in cm, name}
//   rename_panel {panel, name}                    flip_panel {panel}
//   translate_panel {panel, offset: [dx, dy]}     begin_stitching {}
//   insert_break_point {panel, point: [x, y]}     stitch {a: {panel, index}, b: {panel, index}}
//   stitch_span {panel_a, a_from, a_to, panel_b, b_from, b_to}
//   enter_features {}                             undo {}
// plus every feature in the serialized feature format (gather, convert_pleat, dart, ...).
struct EditOutcome {
    bool accepted = true;
    ErrorCode reason = ErrorCode::InvalidArgument;  // meaningful when rejected
    std::string message;
    // Feature edits: the edit result with its grid diff. Other edits: status, revision and
    // the full grid.
    nlohmann::json body;
};

// A rejected edit leaves the pattern unchanged. Throws ParseError for malformed documents.
EditOutcome apply_edit(Pattern& p, const nlohmann::json& edit);
std::vector<std::string> edit_kinds();

}  // namespace garmod
