#include <gtest/gtest.h>

#include <random>

#include "support/appendix_cases.hpp"
#include "support/fuzz.hpp"

using namespace garmod;
using namespace garmod::cases;

namespace {

Pattern single(int w, int h) {
    Pattern p = new_pattern({});
    add_panel(p, rect(0, 0, w, h));
    begin_stitching(p);
    enter_features_phase(p);
    return p;
}

// Pattern with ids and positions renumbered away, for comparisons up to translation.
std::vector<std::vector<Point>> shapes(const Pattern& p) {
    std::vector<std::vector<Point>> out;
    for (const Panel& panel : p.panels) {
        auto cells = panel.cell_positions();
        Point o = cells.front();
        for (Point& c : cells) c = c - o;
        out.push_back(cells);
    }
    return out;
}

}  // namespace

TEST(AppendixCases, AllOutcomesMatch) {
    for (const AppendixCase& c : appendix_cases()) {
        Outcome o = c.run();
        EXPECT_EQ(check_case(c, o), "") << c.name;
    }
}

TEST(Strips, InsertGrowsPanelAndShiftsNothingElse) {
    Pattern p = single(3, 2);
    EditResult r = insert_strip(p, {0, {1, 0}, Axis::Column});
    ASSERT_TRUE(r.accepted()) << r.message;
    EXPECT_EQ(p.panel(0).cells.size(), 8u);
    EXPECT_EQ(p.panel(0).outline, rect(0, 0, 4, 2));
    EXPECT_TRUE(pattern_violations(p).empty());
    EXPECT_EQ(p.revision, 4);
    EXPECT_TRUE(r.matching_diffs.empty());
}

TEST(Strips, InsertThenDeleteRestoresPattern) {
    Pattern p = single(4, 3);
    Pattern original = p;
    ASSERT_TRUE(insert_strip(p, {0, {1, 1}, Axis::Row}, StripSide::After).accepted());
    ASSERT_TRUE(delete_strip(p, {0, {1, 2}, Axis::Row}).accepted());
    EXPECT_EQ(p.panel(0).cells, original.panel(0).cells);
    EXPECT_EQ(p.panel(0).segments, original.panel(0).segments);
    EXPECT_EQ(p.panel(0).outline, original.panel(0).outline);
}

TEST(Strips, InsertBeforeThenDeleteRestoresShape) {
    Pattern p = single(4, 3);
    Pattern original = p;
    ASSERT_TRUE(insert_strip(p, {0, {2, 0}, Axis::Column}, StripSide::Before).accepted());
    ASSERT_TRUE(delete_strip(p, {0, {1, 0}, Axis::Column}).accepted());
    EXPECT_EQ(shapes(p), shapes(original));
}

TEST(Strips, InverseOnRandomPatterns) {
    std::mt19937 rng(11);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Pattern p = fuzz::random_pattern(rng);
        const Panel& panel = p.panels.front();
        Point at = panel.cells[rng() % panel.cells.size()].pos;
        Axis axis = rng() % 2 ? Axis::Column : Axis::Row;
        Pattern before = p;
        if (!insert_strip(p, {panel.id, at, axis}, StripSide::After).accepted()) continue;
        Point dup = at + (axis == Axis::Column ? Point{1, 0} : Point{0, 1});
        EditResult r = delete_strip(p, {before.panels.front().id, dup, axis});
        ASSERT_TRUE(r.accepted()) << r.message;
        for (size_t i = 0; i < p.panels.size(); ++i) {
            EXPECT_EQ(p.panels[i].cells, before.panels[i].cells);
            EXPECT_EQ(p.panels[i].segments, before.panels[i].segments);
        }
        for (size_t i = 0; i < p.seams.size(); ++i) EXPECT_EQ(p.seams[i].matching, before.seams[i].matching);
        ++checked;
    }
    EXPECT_GT(checked, 100);
}

TEST(Strips, DeleteRefusesFeaturesAndWholePanels) {
    Pattern p = single(3, 3);
    ASSERT_TRUE(convert_to_pleat(p, 0, {1, 1}, Direction::Right).accepted());
    EditResult r = delete_strip(p, {0, {1, 0}, Axis::Column});
    EXPECT_EQ(r.reason, ErrorCode::FeatureInWay);
    Pattern one = single(1, 3);
    EXPECT_EQ(delete_strip(one, {0, {0, 1}, Axis::Column}).reason, ErrorCode::DisconnectionHazard);
    EXPECT_EQ(delete_strip(one, {0, {5, 5}, Axis::Column}).reason, ErrorCode::UnknownCell);
}

TEST(Strips, DeleteThatBreaksRatioIsRejected) {
    Stack s = stacked(4, 2, 4, 2);
    enter_features_phase(s.p);
    ASSERT_TRUE(gather_edge(s.p, s.seam, SeamSideId::A).accepted());
    Pattern before = s.p;
    // A has 8 top segments against B's 4; removing a B column leaves 8 against 3.
    EditResult r = delete_strip(s.p, {s.b, {0, 3}, Axis::Column});
    EXPECT_EQ(r.reason, ErrorCode::RatioViolation);
    EXPECT_EQ(s.p, before);
}

TEST(Strips, InsertAgainstFullyGatheredSideIsRejected) {
    Stack s = stacked(2, 2, 2, 2);
    enter_features_phase(s.p);
    ASSERT_TRUE(gather_edge(s.p, s.seam, SeamSideId::A).accepted());
    Pattern before = s.p;
    EditResult r = insert_strip(s.p, {s.a, {0, 0}, Axis::Column});
    EXPECT_EQ(r.reason, ErrorCode::RatioViolation);
    EXPECT_EQ(s.p, before);
}

TEST(Strips, InsertNextToSeamGathersIt) {
    Stack s = stacked(3, 2, 3, 2);
    enter_features_phase(s.p);
    EditResult r = insert_strip(s.p, {s.a, {1, 0}, Axis::Column});
    ASSERT_TRUE(r.accepted());
    ASSERT_EQ(r.matching_diffs.size(), 1u);
    EXPECT_EQ(r.matching_diffs[0].added.size(), 1u);
    EXPECT_EQ(seam_shape(s.p, s.seam), (SeamShape{s.seam, 4, 3, 0, 1}));
}

TEST(Gathers, Rejections) {
    Pattern p = single(2, 2);
    EXPECT_EQ(gather_edge(p, 0, SeamSideId::A).reason, ErrorCode::UnknownSeam);
    Stack s = stacked(2, 2, 2, 2);
    enter_features_phase(s.p);
    ASSERT_TRUE(gather_edge(s.p, s.seam, SeamSideId::A).accepted());
    EXPECT_EQ(gather_edge(s.p, s.seam, SeamSideId::B).reason, ErrorCode::AlreadyGathered);
}

TEST(Gathers, DiffReplaysOntoClientCopy) {
    Sandwich s = sandwich();
    Pattern client = s.p;
    EditResult r = gather_edge(s.p, s.top, SeamSideId::A);
    ASSERT_TRUE(r.accepted());
    apply_diff(client, r.diff);
    EXPECT_EQ(client, s.p);
    EXPECT_THROW(apply_diff(client, r.diff), Error);
}

TEST(Order, LaterFeaturesBlockEarlierOnes) {
    Sandwich s = sandwich();
    ASSERT_TRUE(convert_to_pleat(s.p, s.a, {0, 3}, Direction::Up).accepted());
    Pattern before = s.p;
    EditResult r = gather_edge(s.p, s.top, SeamSideId::A);
    EXPECT_EQ(r.reason, ErrorCode::OrderViolation);
    EXPECT_EQ(s.p, before);

    Pattern q = single(4, 6);
    ASSERT_TRUE(add_dart(q, 0, {2, 3}, DartOrientation::Vertical, 8.0, 16.0).accepted());
    EXPECT_EQ(convert_to_pleat(q, 0, {0, 0}, Direction::Right).reason, ErrorCode::OrderViolation);
    EXPECT_EQ(insert_pleat(q, 0, {0, 0}, Direction::Right).reason, ErrorCode::OrderViolation);
    // Strip edits rank with pleats: allowed after gathers and pleats, not after darts.
    EXPECT_EQ(insert_strip(q, {0, {0, 0}, Axis::Row}).reason, ErrorCode::OrderViolation);
    ASSERT_TRUE(insert_strip(s.p, {s.a, {0, 3}, Axis::Row}).accepted());
}

TEST(Order, FeaturesNeedFeaturesPhase) {
    Pattern p = new_pattern({});
    add_panel(p, rect(0, 0, 3, 3));
    EXPECT_EQ(convert_to_pleat(p, 0, {1, 1}, Direction::Right).reason, ErrorCode::PhaseViolation);
}

TEST(Pleats, ConvertRejections) {
    Pattern p = single(3, 3);
    ASSERT_TRUE(convert_to_pleat(p, 0, {1, 1}, Direction::Right).accepted());
    EXPECT_EQ(convert_to_pleat(p, 0, {1, 1}, Direction::Left).reason, ErrorCode::AlreadyPleat);
    // Folding off a free edge has nothing to fold onto.
    EXPECT_EQ(convert_to_pleat(p, 0, {2, 0}, Direction::Right).reason, ErrorCode::InfeasibleFold);
    EXPECT_EQ(convert_to_pleat(p, 0, {9, 9}, Direction::Right).reason, ErrorCode::UnknownCell);
}

TEST(Pleats, FlushFoldAgainstFullyGatheredSideIsInfeasible) {
    // B's bottom is already doubled against A, so A cannot lose a top unit.
    Stack s = stacked(2, 2, 2, 2);
    enter_features_phase(s.p);
    ASSERT_TRUE(gather_edge(s.p, s.seam, SeamSideId::B).accepted());
    Pattern before = s.p;
    EditResult r = convert_to_pleat(s.p, s.a, {0, 1}, Direction::Right);
    EXPECT_EQ(r.reason, ErrorCode::InfeasibleFold);
    EXPECT_EQ(s.p, before);
}

TEST(Pleats, FoldedWidthShrinksByOneUnit) {
    Pattern p = single(4, 2);
    ASSERT_TRUE(convert_to_pleat(p, 0, {1, 0}, Direction::Right).accepted());
    const Panel& panel = p.panel(0);
    size_t active_bottom = 0;
    for (const Segment& s : panel.segments) active_bottom += s.side == Side::Bottom && s.active;
    EXPECT_EQ(active_bottom, 3u);
}

TEST(Pleats, KnifeBoxAndInvertedBoxArrangements) {
    struct Arrangement {
        Direction first, second, third;
    };
    for (Arrangement a : {Arrangement{Direction::Right, Direction::Right, Direction::Right},
                          Arrangement{Direction::Right, Direction::Left, Direction::Right},
                          Arrangement{Direction::Left, Direction::Right, Direction::Left}}) {
        Pattern p = single(5, 2);
        ASSERT_TRUE(convert_to_pleat(p, 0, {1, 0}, a.first).accepted());
        ASSERT_TRUE(convert_to_pleat(p, 0, {2, 0}, a.second).accepted());
        ASSERT_TRUE(convert_to_pleat(p, 0, {3, 0}, a.third).accepted());
        EXPECT_TRUE(pattern_violations(p).empty());
        EXPECT_EQ(p.panel(0).cell_at({2, 0})->pleat_dir, a.second);
    }
}

TEST(Pleats, InsertedPleatTakesTheNewCell) {
    Pattern p = single(3, 2);
    EditResult r = insert_pleat(p, 0, {1, 0}, Direction::Right);
    ASSERT_TRUE(r.accepted());
    const Panel& panel = p.panel(0);
    EXPECT_EQ(panel.cell_at({2, 0})->kind, CellKind::Pleat);
    EXPECT_EQ(panel.cell_at({1, 0})->kind, CellKind::Foundation);
    EXPECT_EQ(panel.cells.size(), 8u);
}

TEST(Resolve, RequiresAGather) {
    Stack s = fold_on_seam();
    int seg = segment_at(s.p, s.a, {0, 3}, Side::Bottom);
    EXPECT_EQ(resolve_by_expand(s.p, seg).reason, ErrorCode::NotGathered);
    EXPECT_EQ(resolve_by_delete(s.p, seg).reason, ErrorCode::NotGathered);
    EXPECT_EQ(resolve_by_delete(s.p, 999).reason, ErrorCode::UnknownSegment);
}

TEST(Darts, SizeLimits) {
    Pattern p = single(4, 6);
    EXPECT_EQ(add_dart(p, 0, {2, 3}, DartOrientation::Vertical, 17.0, 16.0).reason, ErrorCode::InvalidArgument);
    EXPECT_EQ(add_dart(p, 0, {2, 3}, DartOrientation::Vertical, 8.0, 12.0).reason, ErrorCode::InvalidArgument);
    EXPECT_EQ(add_dart(p, 0, {2, 3}, DartOrientation::Vertical, 0.0, 8.0).reason, ErrorCode::InvalidArgument);
}

TEST(Darts, InteriorDiamondMarksCells) {
    Pattern p = single(4, 6);
    EditResult r = add_dart(p, 0, {2, 3}, DartOrientation::Vertical, 8.0, 16.0);
    ASSERT_TRUE(r.accepted());
    const Dart& d = p.dart(0);
    ASSERT_EQ(d.modules.size(), 2u);
    EXPECT_EQ(d.modules[0].narrow_side, Side::Top);
    EXPECT_EQ(d.modules[1].narrow_side, Side::Bottom);
    int holes = 0;
    for (const Cell& c : p.panel(0).cells) holes += c.kind == CellKind::DartHole;
    EXPECT_EQ(holes, 8);
    EXPECT_TRUE(d.consumed_segments.empty());
}

TEST(Darts, HorizontalDiamond) {
    Pattern p = single(6, 4);
    ASSERT_TRUE(add_dart(p, 0, {3, 2}, DartOrientation::Horizontal, 8.0, 16.0).accepted());
    const Dart& d = p.dart(0);
    EXPECT_EQ(d.modules[0].narrow_side, Side::Right);
    EXPECT_EQ(p.panel(0).cell_at({1, 1})->kind, CellKind::DartHole);
    EXPECT_EQ(p.panel(0).cell_at({4, 2})->kind, CellKind::DartHole);
    EXPECT_EQ(p.panel(0).cell_at({0, 1})->kind, CellKind::Foundation);
}

TEST(Darts, FractionalWidthOnSeamIsNotUniversal) {
    Pattern p = new_pattern({});
    int b = add_panel(p, rect(0, 0, 4, 2));
    int a = add_panel(p, rect(0, 3, 4, 4));
    begin_stitching(p);
    stitch_span(p, a, {0, 3}, {4, 3}, b, {4, 2}, {0, 2});
    enter_features_phase(p);
    EXPECT_EQ(add_dart(p, a, {2, 3}, DartOrientation::Vertical, 4.0, 16.0).reason, ErrorCode::NonUniversalOnSeam);
    // Free edges accept any width up to two units.
    Pattern q = single(4, 4);
    EXPECT_TRUE(add_dart(q, 0, {2, 0}, DartOrientation::Vertical, 4.0, 16.0).accepted());
}

TEST(Darts, GatheredSeamRefusesDart) {
    Stack s = stacked(4, 2, 4, 4);
    enter_features_phase(s.p);
    ASSERT_TRUE(gather_edge(s.p, s.seam, SeamSideId::A).accepted());
    // B's bottom edge is the short side of a gathered seam.
    EXPECT_EQ(add_dart(s.p, s.b, {2, 3}, DartOrientation::Vertical, 8.0, 16.0).reason, ErrorCode::GatheredSeam);
}

TEST(Darts, NarrowEndAcrossFreeAndSeamedIsAConflict) {
    Pattern p = new_pattern({});
    int b = add_panel(p, rect(0, 0, 2, 2));
    int a = add_panel(p, rect(0, 3, 4, 4));
    begin_stitching(p);
    stitch_span(p, a, {0, 3}, {2, 3}, b, {2, 2}, {0, 2});
    enter_features_phase(p);
    EXPECT_EQ(add_dart(p, a, {2, 3}, DartOrientation::Vertical, 8.0, 16.0).reason, ErrorCode::DartSeamConflict);
}

TEST(Darts, FullWidthOnFreeEdgeConsumesBothUnits) {
    Pattern p = single(4, 4);
    ASSERT_TRUE(add_dart(p, 0, {2, 0}, DartOrientation::Vertical, 16.0, 16.0).accepted());
    EXPECT_EQ(p.dart(0).consumed_segments.size(), 2u);
    EXPECT_TRUE(pattern_violations(p).empty());
}

TEST(Darts, CornerWithoutSeamHasNoPartner) {
    Pattern p = single(4, 4);
    EXPECT_EQ(add_dart(p, 0, {0, 0}, DartOrientation::Vertical, 8.0, 16.0).reason, ErrorCode::InsufficientSpace);
    EXPECT_EQ(add_dart(p, 0, {9, 9}, DartOrientation::Vertical, 8.0, 16.0).reason, ErrorCode::InsufficientSpace);
}

TEST(Replay, FeatureLogRebuildsPattern) {
    Sandwich s = sandwich();
    Pattern start = s.p;
    ASSERT_TRUE(gather_edge(s.p, s.top, SeamSideId::A).accepted());
    ASSERT_TRUE(insert_pleat(s.p, s.a, {1, 4}, Direction::Up).accepted());
    ASSERT_TRUE(add_dart(s.p, s.b, {1, 8}, DartOrientation::Vertical, 8.0, 8.0).accepted());
    Pattern replayed = start;
    for (const FeatureRecord& f : s.p.features) ASSERT_TRUE(apply_feature(replayed, f).accepted());
    EXPECT_EQ(replayed, s.p);
}

TEST(Fuzz, InvariantsHoldAndRejectionsAreAtomic) {
    std::mt19937 rng(2024);
    int accepted = 0, rejected = 0;
    for (int seq = 0; seq < 300; ++seq) {
        Pattern p = fuzz::random_pattern(rng);
        for (int step = 0; step < 8; ++step) {
            FeatureRecord f = fuzz::random_edit(p, rng);
            Pattern before = p;
            EditResult r = apply_feature(p, f);
            if (r.accepted()) {
                ++accepted;
                auto v = pattern_violations(p);
                ASSERT_TRUE(v.empty()) << "seq " << seq << " step " << step << " " << to_string(f.kind) << ": "
                                       << to_string(v.front());
                Pattern replay = before;
                apply_diff(replay, r.diff);
                ASSERT_EQ(replay, p);
            } else {
                ++rejected;
                ASSERT_EQ(p, before);
            }
        }
    }
    EXPECT_GT(accepted, 500);
    EXPECT_GT(rejected, 100);
}
