#pragma once

#include <string>
#include <vector>

#include "garmod/pattern.hpp"

namespace garmod {

struct Violation {
    std::string rule;  // "grid", "ratio", "matching", "seam", "fold", "dart"
    int panel = -1;
    int seam = -1;
    std::string message;
};

// Every invariant a pattern in the features phase must satisfy; empty when valid.
// Grid: unique positions, one connected hole-free component, segments exactly on exposed
// sides, outline traced from the cells. Ratio and matching: per seam on active segments.
// Fold: a segment is inactive exactly when a pleat folds it away or a dart consumes it.
std::vector<Violation> pattern_violations(const Pattern& p);

std::string to_string(const Violation& v);

}  // namespace garmod
