#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "garmod/config.hpp"
#include "garmod/geometry.hpp"
#include "garmod/seam_graph.hpp"

namespace garmod {

enum class Phase { Draw, Stitch, Features };
enum class FaceOrientation { OutsideUp, InsideUp };
enum class CellKind { Foundation, Pleat, DartHole };
enum class SegmentState { Free, Seamed, Inactive };
enum class DartOrientation { Vertical, Horizontal };

std::string_view to_string(Phase phase);
std::string_view to_string(FaceOrientation o);
std::string_view to_string(CellKind kind);
std::string_view to_string(SegmentState state);
std::string_view to_string(DartOrientation o);
Phase phase_from_string(std::string_view s);
FaceOrientation orientation_from_string(std::string_view s);
CellKind cell_kind_from_string(std::string_view s);
DartOrientation dart_orientation_from_string(std::string_view s);

struct Cell {
    int id = -1;
    Point pos;
    CellKind kind = CellKind::Foundation;
    Direction pleat_dir = Direction::Right;  // meaningful for Pleat cells
    int dart_id = -1;                        // meaningful for DartHole cells

    bool operator==(const Cell&) const = default;
};

// One Δ-length piece of a panel boundary, attached to the cell side it lies on.
struct Segment {
    int id = -1;
    int cell_id = -1;
    Side side = Side::Bottom;
    int seam_id = -1;  // kept while inactive so the seam side stays contiguous
    bool active = true;

    SegmentState state() const {
        if (!active) return SegmentState::Inactive;
        return seam_id >= 0 ? SegmentState::Seamed : SegmentState::Free;
    }
    bool operator==(const Segment&) const = default;
};

struct Panel {
    int id = -1;
    std::string name;
    std::vector<Point> outline;  // normalized counter-clockwise loop
    std::vector<Point> drawn_outline;  // outline when features began; strips change `outline`
    FaceOrientation orientation = FaceOrientation::OutsideUp;
    std::vector<Point> break_points;  // sorted
    std::vector<Cell> cells;          // sorted by position after every edit
    std::vector<Segment> segments;    // sorted by id

    const Cell* cell_at(Point p) const;
    const Cell* cell_by_id(int id) const;
    Cell* cell_by_id(int id);
    const Segment* segment_on(int cell_id, Side side) const;
    const Segment* segment_by_id(int id) const;
    Segment* segment_by_id(int id);
    // Neighbor link of a cell (derived from positions, so always symmetric).
    const Cell* neighbor(const Cell& cell, Side side) const;
    std::vector<Point> cell_positions() const;
    void reindex();

    bool operator==(const Panel& o) const {
        return id == o.id && name == o.name && outline == o.outline && drawn_outline == o.drawn_outline &&
               orientation == o.orientation && break_points == o.break_points &&
               cells == o.cells && segments == o.segments;
    }

private:
    std::map<Point, size_t> by_pos_;
    std::unordered_map<int, size_t> cell_by_id_;
    std::unordered_map<int, size_t> seg_by_id_;
    std::map<std::pair<int, int>, size_t> seg_by_cell_side_;
};

// Straight piece of an outline between consecutive corners or break points.
struct Edge {
    int index = -1;
    Point from, to;  // counter-clockwise order
    int length = 0;  // in base units
};

struct EdgeRef {
    int panel = -1;
    int index = -1;
};

struct Seam {
    int id = -1;
    int panel_a = -1, panel_b = -1;
    Point a_from, a_to, b_from, b_to;  // drawing-phase edges, counter-clockwise per panel
    // Segment ids; side A follows panel A's counter-clockwise walk, side B runs against
    // panel B's walk so that equal ordinals face each other.
    std::vector<int> side_a, side_b;
    SeamMatching matching;

    bool operator==(const Seam&) const = default;
};

struct DartHalf {
    int panel = -1;
    std::vector<int> cells;  // narrow end first
    bool operator==(const DartHalf&) const = default;
};

// One assembled dart module: two mirrored trapezoids occupying 2 x n cells.
struct DartModule {
    DartHalf first, second;  // first is the half at lower x (vertical) or lower y (horizontal)
    Side narrow_side = Side::Top;  // side of the footprint where the narrow end sits
    bool operator==(const DartModule&) const = default;
};

struct Dart {
    int id = -1;
    int panel = -1;
    Point anchor;
    DartOrientation orientation = DartOrientation::Vertical;
    double width = 0.0;   // cm
    double height = 0.0;  // cm
    std::string case_label;
    std::vector<DartModule> modules;
    std::vector<int> consumed_segments;
    bool operator==(const Dart&) const = default;
};

enum class FeatureKind {
    Gather,
    ConvertPleat,
    InsertPleat,
    Dart,
    InsertStrip,
    DeleteStrip,
    ResolveDelete,
    ResolveExpand,
};
std::string_view to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(std::string_view s);

enum class StripSide { Before, After };

struct FeatureRecord {
    FeatureKind kind = FeatureKind::Gather;
    int revision = 0;
    int seam = -1;
    SeamSideId seam_side = SeamSideId::A;
    int panel = -1;
    Point cell;  // cell position or dart anchor
    Direction direction = Direction::Right;
    Axis axis = Axis::Column;
    StripSide strip_side = StripSide::After;
    DartOrientation dart_orientation = DartOrientation::Vertical;
    double width = 0.0;
    double height = 0.0;
    int segment = -1;

    bool operator==(const FeatureRecord&) const = default;
};

struct Pattern {
    PatternConfig config;
    Phase phase = Phase::Draw;
    int revision = 0;
    std::vector<Panel> panels;
    std::vector<Seam> seams;
    std::vector<Dart> darts;
    std::vector<FeatureRecord> features;
    int next_panel_id = 0;
    int next_seam_id = 0;
    int next_cell_id = 0;
    int next_segment_id = 0;
    int next_dart_id = 0;

    Panel& panel(int id);
    const Panel& panel(int id) const;
    Seam& seam(int id);
    const Seam& seam(int id) const;
    const Dart& dart(int id) const;
    // Panel owning a segment id; nullptr when unknown.
    const Panel* panel_of_segment(int segment_id) const;
    Panel* panel_of_segment(int segment_id);
    const Segment& segment(int segment_id) const;
    Segment& segment(int segment_id);
    bool has_feature_level(int level) const;
    bool operator==(const Pattern&) const = default;
};

Pattern new_pattern(const PatternConfig& config);

// Drawing phase.
int add_panel(Pattern& p, const std::vector<Point>& outline, std::string name = {});
// Outline given in cm; every vertex must be a multiple of the base unit.
int add_panel_cm(Pattern& p, const std::vector<std::pair<double, double>>& outline_cm,
                 std::string name = {});
void rename_panel(Pattern& p, int panel, std::string name);
void flip_panel(Pattern& p, int panel);
void translate_panel(Pattern& p, int panel, Point offset);
void begin_stitching(Pattern& p);

// Stitching phase.
std::vector<Edge> panel_edges(const Panel& panel);
void insert_break_point(Pattern& p, int panel, Point position);
int stitch(Pattern& p, EdgeRef a, EdgeRef b);
// Index of the edge running counter-clockwise from `from` to `to`, inserting break points at
// either end when they are not corners yet. Throws UnknownEdge when no such edge exists.
int edge_between(Pattern& p, int panel, Point from, Point to);
// Stitches two spans given by their counter-clockwise endpoints on each panel.
int stitch_span(Pattern& p, int panel_a, Point a_from, Point a_to, int panel_b, Point b_from, Point b_to);
void enter_features_phase(Pattern& p);

// Grid queries used across modules.
// Ordered segment ids of a boundary loop walk starting at the loop's lowest-leftmost vertex.
std::vector<std::vector<int>> boundary_loops(const Panel& panel);
std::vector<int> active_ids(const Pattern& p, const std::vector<int>& ids);
// Re-sorts both seam sides geometrically along their panels' boundaries.
void reorder_seam(Pattern& p, Seam& seam);
// Cell and side owning the unit boundary step that starts at `from` and walks one unit in
// `dir` with the panel interior on the left.
std::pair<Point, Side> unit_step_owner(Point from, Point dir);

int feature_level(FeatureKind kind);

}  // namespace garmod
