#include "garmod/config.hpp"

#include <cmath>
#include <string>

#include "garmod/error.hpp"

namespace garmod {

void validate_config(const PatternConfig& config) {
    if (!(config.base_unit > 0.0) || !std::isfinite(config.base_unit)) {
        throw Error(ErrorCode::InvalidConfig, "base unit must be positive");
    }
    if (!(config.seam_allowance >= 0.0) || !(config.seam_allowance < config.base_unit / 2.0)) {
        throw Error(ErrorCode::InvalidConfig,
                    "seam allowance must satisfy 0 <= allowance < base unit / 2");
    }
    if (config.connector_density < 1) {
        throw Error(ErrorCode::InvalidConfig, "connector density must be >= 1");
    }
    if (config.max_panel_extent < 1) {
        throw Error(ErrorCode::InvalidConfig, "panel extent cap must be >= 1");
    }
}

std::vector<double> connector_positions(double length_cm, const PatternConfig& config) {
    double units = length_cm / config.base_unit;
    long m = std::lround(units);
    if (m < 1 || std::fabs(units - static_cast<double>(m)) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument,
                    "edge length must be a positive multiple of the base unit");
    }
    double spacing = config.connector_spacing();
    long count = 2L * config.connector_density * m;
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) {
        out.push_back(spacing / 2.0 + spacing * static_cast<double>(i));
    }
    return out;
}

}  // namespace garmod
