#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "garmod/pattern.hpp"

namespace garmod {

struct TemplateInfo {
    std::string name;
    std::string description;
};

std::vector<TemplateInfo> template_list();
// Drawn and stitched seed pattern, ready for feature edits. Throws NotFound.
Pattern make_template(const std::string& name, const PatternConfig& config = {});

// Two-layer skirt: upper yoke panels over lower panels, all side seams closed. Panel and seam
// ids are fixed so edit scripts can refer to them.
namespace compound_skirt {
inline constexpr int kFrontTop = 0, kBackTop = 1, kFrontBottom = 2, kBackBottom = 3;
inline constexpr int kSeamFront = 0, kSeamBack = 1;  // upper to lower layer
inline constexpr int kSideA = 2, kSideB = 3;         // upper side seams
}  // namespace compound_skirt

// Feature script for the compound skirt: gather both layer seams on the lower side, turn every
// other waistline unit into a right-folding pleat, then one diamond dart across each upper side
// seam. An array of feature documents in the serialized feature format.
nlohmann::json compound_skirt_script();

// Applies a script of edit documents (see edit_api.hpp) in order. Stops at the first rejection and returns its
// index, or -1 when every edit was accepted.
struct ScriptOutcome {
    int failed_at = -1;
    std::string reason;
    std::string message;
};
ScriptOutcome apply_script(Pattern& p, const nlohmann::json& script);

}  // namespace garmod
