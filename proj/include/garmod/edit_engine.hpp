#pragma once

#include <string>
#include <utility>
#include <vector>

#include "garmod/error.hpp"
#include "garmod/pattern.hpp"

namespace garmod {

enum class EditStatus { Accepted, Rejected };
std::string_view to_string(EditStatus status);

struct PanelDiff {
    int panel = -1;
    std::vector<Point> outline;
    std::vector<Cell> cells_upserted;  // added, shifted or changed kind
    std::vector<int> cells_removed;
    std::vector<Segment> segments_upserted;
    std::vector<int> segments_removed;
    bool operator==(const PanelDiff&) const = default;
};

struct MatchingDiff {
    int seam = -1;
    std::vector<std::pair<int, int>> removed, added;
    bool operator==(const MatchingDiff&) const = default;
};

// Everything needed to move a client copy from the pre-edit to the post-edit state.
struct GridDiff {
    int revision_before = 0;
    int revision_after = 0;
    std::vector<PanelDiff> panels;
    std::vector<Seam> seams;           // full post-edit state of changed seams
    std::vector<Dart> darts_upserted;
    std::vector<FeatureRecord> features_added;
    int next_cell_id = 0;
    int next_segment_id = 0;
    int next_dart_id = 0;
    bool operator==(const GridDiff&) const = default;
};

struct EditResult {
    EditStatus status = EditStatus::Accepted;
    ErrorCode reason = ErrorCode::InvalidArgument;  // meaningful when rejected
    std::string message;
    std::string case_label;  // feature casework label, e.g. "3A" for a gather
    std::vector<int> affected_seams;
    std::vector<MatchingDiff> matching_diffs;
    GridDiff diff;

    bool accepted() const { return status == EditStatus::Accepted; }
};

GridDiff diff_patterns(const Pattern& before, const Pattern& after);
// Throws InvalidArgument when the diff does not start from this revision.
void apply_diff(Pattern& p, const GridDiff& diff);

// A strip is the maximal run of cells through `cell` along the axis (Column = vertical run).
struct StripLocator {
    int panel = -1;
    Point cell;
    Axis axis = Axis::Column;
};

// Every edit is atomic: a rejected edit leaves the pattern unchanged.
EditResult insert_strip(Pattern& p, const StripLocator& strip, StripSide side = StripSide::After);
EditResult delete_strip(Pattern& p, const StripLocator& strip);
// Doubles the given side of a seam by duplicating every strip perpendicular to it.
EditResult gather_edge(Pattern& p, int seam, SeamSideId side);
EditResult convert_to_pleat(Pattern& p, int panel, Point cell, Direction dir);
EditResult insert_pleat(Pattern& p, int panel, Point cell, Direction dir);
// Follow-ups for a gather created by a pleat: delete the strip through a segment on the
// longer side of a gathered pair, or expand the strip through the doubly matched segment.
EditResult resolve_by_delete(Pattern& p, int segment);
EditResult resolve_by_expand(Pattern& p, int segment);
// `anchor` is the grid point at the middle of the dart's base; width and height in cm.
EditResult add_dart(Pattern& p, int panel, Point anchor, DartOrientation orientation,
                    double width_cm, double height_cm);

// Re-applies a logged feature; used by replay.
EditResult apply_feature(Pattern& p, const FeatureRecord& feature);

// Segment sides folded away by a pleat with this direction.
std::vector<Side> folded_sides(Direction dir);

}  // namespace garmod
