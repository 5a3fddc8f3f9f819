#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "garmod/decomposer.hpp"
#include "garmod/pattern.hpp"

namespace garmod {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Vec2&) const = default;
};

enum class PieceKind { Square, DartPair };
std::string_view to_string(PieceKind kind);

struct Tick {
    Vec2 from, to;  // from the cut edge inward to the stitching line
};

// One piece of fabric in local cm coordinates, origin at the lower-left corner of the cut
// outline (seam allowance included).
struct CutPiece {
    PieceKind kind = PieceKind::Square;
    std::string label;
    int placement = -1;  // index into the assembly's placements
    double width = 0.0, height = 0.0;  // with allowance
    double net_area = 0.0;             // cm², without allowance
    std::vector<std::vector<Vec2>> cut_paths;  // closed outline first; open internal cuts after
    std::vector<Tick> marks;
    std::vector<int> marks_per_edge;  // bottom, right, top, left of the stitching rectangle
};

// Square side ℓΔ + 2δ. A dart module becomes one rectangle of width 2Δ − w/2 and height h
// (plus allowance) holding both trapezoids, split by a slanted internal cut.
std::vector<CutPiece> cut_pieces(const Pattern& pattern, const Assembly& assembly);

struct PlacedPiece {
    size_t piece = 0;
    int sheet = 0;
    double x = 0.0, y = 0.0;  // lower-left corner on the sheet
    bool rotated = false;     // quarter turn
    double width = 0.0, height = 0.0;  // as placed
};

struct CutLayout {
    double sheet_width = 0.0;
    double sheet_length = 0.0;  // 0 = one sheet of unbounded length
    std::vector<CutPiece> pieces;
    std::vector<PlacedPiece> placed;
    std::vector<double> sheet_heights;  // used length per sheet
    double utilization = 0.0;           // piece area / used sheet area
    int revision = -1;                  // pattern revision stamped into the SVG when set
};

// Next-fit decreasing-height shelf packing. Pieces turn a quarter only when they would not
// fit the sheet width otherwise. Throws PieceTooWide.
CutLayout pack_layout(std::vector<CutPiece> pieces, double sheet_width, double sheet_length = 0.0);
// Overlaps and out-of-bounds placements; empty when valid.
std::vector<std::string> layout_violations(const CutLayout& layout);

// SVG with `cut` (red) and `mark` (black) classes; 1 user unit = 1 mm.
std::string render_svg(const CutLayout& layout, int sheet);

struct InstructionStep {
    std::string kind;  // manifest, join, pleat, dart
    std::string text;
    nlohmann::json detail;
};

// Module manifest per panel, then seam joins, pleat folds and dart closures.
std::vector<InstructionStep> assembly_instructions(const Pattern& pattern, const Assembly& assembly);
nlohmann::json instructions_json(const std::vector<InstructionStep>& steps);
std::string instructions_markdown(const std::vector<InstructionStep>& steps);
// Directive for folding a pleat module, e.g. "connect left pins to right sockets (L+ -> R-)".
std::string pleat_directive(Direction dir);

}  // namespace garmod
