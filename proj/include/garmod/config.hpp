#pragma once

#include <vector>

namespace garmod {

struct PatternConfig {
    double base_unit = 8.0;       // cm
    double seam_allowance = 1.0;  // cm
    int connector_density = 1;
    int max_panel_extent = 64;    // cells per axis

    double connector_spacing() const { return base_unit / (2.0 * connector_density); }
    int connectors_per_unit() const { return 2 * connector_density; }
    bool operator==(const PatternConfig&) const = default;
};

// Throws InvalidConfig.
void validate_config(const PatternConfig& config);

// Positions (cm from the edge start) of the fasteners along an edge of length mΔ.
std::vector<double> connector_positions(double length_cm, const PatternConfig& config);

}  // namespace garmod
