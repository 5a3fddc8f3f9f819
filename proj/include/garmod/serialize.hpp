#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "garmod/decomposer.hpp"
#include "garmod/edit_engine.hpp"
#include "garmod/pattern.hpp"

namespace garmod {

inline constexpr int kPatternFormatVersion = 1;

// Pattern document: config, phase, drawn panels and seams, and the feature log. Keys are
// sorted, so equal patterns serialize to identical bytes.
std::string to_json(const Pattern& p);
// Rebuilds the drawing and stitching state, then replays the feature log. Throws ParseError
// for malformed documents and ReplayMismatch when the replayed grid differs from the stored
// digest.
Pattern pattern_from_json(std::string_view text);

void save_pattern(const Pattern& p, const std::string& path);
Pattern load_pattern(const std::string& path);

// FNV-1a digest of the full grid state (cells, segments, seams, matchings, darts).
uint64_t grid_digest(const Pattern& p);
std::string hex_digest(uint64_t digest);

// State after the first `count` feature-log entries. Throws InvalidArgument past the log end.
Pattern replay_prefix(const Pattern& p, size_t count);
// Drops the last feature-log entry. Throws InvalidArgument when the log is empty.
Pattern undo(const Pattern& p);

// JSON views shared by the CLI and the HTTP service.
nlohmann::json config_json(const PatternConfig& c);
PatternConfig config_from_json(const nlohmann::json& j);
nlohmann::json feature_json(const FeatureRecord& f);
FeatureRecord feature_from_json(const nlohmann::json& j);
// Complete grid state for clients that render the pattern.
nlohmann::json grid_json(const Pattern& p);
nlohmann::json edit_result_json(const EditResult& r);

// Supply files: {"format_version": 1, "supply": {"<side>": count or null}}; null is unbounded.
// A bare {"sizes": [...]} is read as unbounded sizes. Throws ParseError, InvalidArgument.
nlohmann::json supply_json(const ModuleSupply& s);
ModuleSupply supply_from_json(const nlohmann::json& j);

// Assembly files carry the digest of the pattern they were solved for.
nlohmann::json assembly_json(const Assembly& a, const Pattern& p);
Assembly assembly_from_json(const nlohmann::json& j);

}  // namespace garmod
