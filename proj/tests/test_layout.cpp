#include <gtest/gtest.h>

#include <random>

#include "garmod/edit_engine.hpp"
#include "garmod/error.hpp"
#include "garmod/layout.hpp"
#include "support/appendix_cases.hpp"
#include "support/fuzz.hpp"

namespace garmod {
namespace {

using cases::rect;

Pattern single(int w, int h, PatternConfig config = {}) {
    Pattern p = new_pattern(config);
    add_panel(p, rect(0, 0, w, h), "P");
    begin_stitching(p);
    enter_features_phase(p);
    return p;
}

Pattern with_dart(PatternConfig config = {}) {
    Pattern p = single(4, 4, config);
    EditResult r = add_dart(p, 0, {2, 0}, DartOrientation::Vertical, 8, 16);
    EXPECT_TRUE(r.accepted()) << r.message;
    return p;
}

double total_area(const std::vector<CutPiece>& pieces) {
    double a = 0;
    for (const CutPiece& c : pieces) a += c.net_area;
    return a;
}

// Independent expectation: every grid cell that is not a dart hole is Δ², each dart module is
// a rectangle (2Δ - w/2) x h.
double expected_area(const Pattern& p) {
    double unit = p.config.base_unit, a = 0;
    for (const Panel& panel : p.panels) {
        for (const Cell& c : panel.cells) a += c.kind == CellKind::DartHole ? 0.0 : unit * unit;
    }
    for (const Dart& d : p.darts) a += static_cast<double>(d.modules.size()) * (2 * unit - d.width / 2) * d.height;
    return a;
}

TEST(Layout, DartPairIsRectangle) {
    PatternConfig c;
    c.seam_allowance = 0.0;
    Pattern p = with_dart(c);
    auto pieces = cut_pieces(p, solve_cover(p, ModuleSupply::unbounded({1, 2, 3})));
    int pairs = 0;
    for (const CutPiece& piece : pieces) {
        if (piece.kind != PieceKind::DartPair) continue;
        ++pairs;
        EXPECT_DOUBLE_EQ(piece.width, 12.0);
        EXPECT_DOUBLE_EQ(piece.height, 16.0);
        EXPECT_DOUBLE_EQ(piece.net_area, 192.0);
        ASSERT_EQ(piece.cut_paths.size(), 2u);
        EXPECT_EQ(piece.cut_paths[1].front(), (Vec2{8, 0}));
        EXPECT_EQ(piece.cut_paths[1].back(), (Vec2{4, 16}));
        // Wide base 2k, narrow base of width Δ/2 carries one mark, sides 2k per unit.
        EXPECT_EQ(piece.marks_per_edge, (std::vector<int>{3, 4, 3, 4}));
    }
    EXPECT_EQ(pairs, 1);
}

TEST(Layout, AllowanceAddsToEveryDimension) {
    Pattern p = with_dart();
    auto pieces = cut_pieces(p, solve_cover(p, ModuleSupply::unbounded({1, 2, 3})));
    for (const CutPiece& piece : pieces) {
        if (piece.kind == PieceKind::DartPair) {
            EXPECT_DOUBLE_EQ(piece.width, 14.0);
            EXPECT_DOUBLE_EQ(piece.height, 18.0);
        } else {
            EXPECT_DOUBLE_EQ(piece.width, piece.height);
            EXPECT_NEAR(std::fmod(piece.width - 2.0, 8.0), 0.0, 1e-12);
        }
    }
}

TEST(Layout, MarksPerEdgeScaleWithLength) {
    for (int density : {1, 2, 3}) {
        PatternConfig c;
        c.connector_density = density;
        Pattern p = single(5, 3, c);
        Assembly a = solve_cover(p, ModuleSupply::unbounded({1, 2, 3}));
        auto pieces = cut_pieces(p, a);
        for (const CutPiece& piece : pieces) {
            const Placement& pl = a.placements[static_cast<size_t>(piece.placement)];
            int expected = 2 * density * pl.size;
            for (int m : piece.marks_per_edge) EXPECT_EQ(m, expected);
            EXPECT_EQ(piece.marks.size(), static_cast<size_t>(4 * expected));
        }
    }
}

TEST(Layout, MarksSitOnStitchingLine) {
    Pattern p = single(2, 2);
    auto pieces = cut_pieces(p, solve_cover(p, ModuleSupply::unbounded({2})));
    ASSERT_EQ(pieces.size(), 1u);
    const CutPiece& sq = pieces[0];
    // Bottom edge ticks: x = δ + spacing/2 + j·spacing, from the cut edge to the stitching line.
    std::vector<double> xs;
    for (const Tick& t : sq.marks) {
        if (t.from.y == 0.0) {
            EXPECT_DOUBLE_EQ(t.to.y, 1.0);
            xs.push_back(t.from.x);
        }
    }
    EXPECT_EQ(xs, (std::vector<double>{3, 7, 11, 15}));
}

TEST(Layout, SquaresFillSheet) {
    PatternConfig c;
    c.base_unit = 10.0;
    c.seam_allowance = 0.0;
    Pattern p = single(4, 4, c);
    ModuleSupply ones;
    ones.counts[1] = std::nullopt;
    Assembly a = solve_cover(p, ones);
    ASSERT_EQ(a.placements.size(), 16u);
    CutLayout layout = pack_layout(cut_pieces(p, a), 40.0);
    EXPECT_DOUBLE_EQ(layout.utilization, 1.0);
    EXPECT_EQ(layout.sheet_heights, (std::vector<double>{40.0}));
    EXPECT_TRUE(layout_violations(layout).empty());
}

TEST(Layout, PieceTooWide) {
    Pattern p = single(3, 3);
    auto pieces = cut_pieces(p, solve_cover(p, ModuleSupply::unbounded({3})));
    try {
        pack_layout(pieces, 20.0);
        FAIL() << "expected PieceTooWide";
    } catch (const Error& e) {
        EXPECT_TRUE(e.code() == ErrorCode::PieceTooWide);
    }
    EXPECT_NO_THROW(pack_layout(pieces, 26.0));
}

TEST(Layout, RotatesWhenOnlyTheOtherWayFits) {
    PatternConfig c;
    c.seam_allowance = 0.0;
    Pattern p = with_dart(c);
    auto pieces = cut_pieces(p, solve_cover(p, ModuleSupply::unbounded({1})));
    CutLayout layout = pack_layout(pieces, 16.0);
    bool rotated = false;
    for (const PlacedPiece& pp : layout.placed) {
        if (layout.pieces[pp.piece].kind == PieceKind::DartPair) {
            EXPECT_FALSE(pp.rotated);
        }
        rotated = rotated || pp.rotated;
    }
    EXPECT_FALSE(rotated);
    EXPECT_THROW(pack_layout(pieces, 11.0), Error);
}

TEST(Layout, SheetLengthStartsNewSheets) {
    Pattern p = single(6, 6);
    auto pieces = cut_pieces(p, solve_cover(p, ModuleSupply::unbounded({1})));
    CutLayout layout = pack_layout(pieces, 40.0, 30.0);
    // 10 cm pieces: 4 per shelf, 3 shelves per sheet, 36 pieces.
    EXPECT_EQ(layout.sheet_heights.size(), 3u);
    EXPECT_TRUE(layout_violations(layout).empty());
}

TEST(Layout, RandomPatternsConserveAreaWithoutOverlap) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        Pattern p = fuzz::random_pattern(rng);
        for (int step = 0; step < 6; ++step) apply_feature(p, fuzz::random_edit(p, rng));
        Assembly a = solve_cover(p, ModuleSupply::unbounded({1, 2, 3}));
        auto pieces = cut_pieces(p, a);
        EXPECT_NEAR(total_area(pieces), expected_area(p), 1e-6);
        CutLayout layout = pack_layout(pieces, 60.0);
        EXPECT_TRUE(layout_violations(layout).empty());
        EXPECT_LE(layout.utilization, 1.0 + 1e-12);
    }
}

TEST(Layout, SvgIsStable) {
    Pattern p = with_dart();
    Assembly a = solve_cover(p, ModuleSupply::unbounded({1, 2, 3}));
    std::string one = render_svg(pack_layout(cut_pieces(p, a), 50.0), 0);
    std::string two = render_svg(pack_layout(cut_pieces(p, a), 50.0), 0);
    EXPECT_EQ(one, two);
    EXPECT_NE(one.find("class=\"cut\""), std::string::npos);
    EXPECT_NE(one.find("data-kind=\"dart_pair\""), std::string::npos);
    EXPECT_NE(one.find("viewBox=\"0 0 500 "), std::string::npos);
}

TEST(Layout, EmptyLayoutRenders) {
    CutLayout layout = pack_layout({}, 50.0);
    std::string svg = render_svg(layout, 0);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_EQ(svg.find("<g "), std::string::npos);
    EXPECT_DOUBLE_EQ(layout.utilization, 0.0);
}

TEST(Instructions, FlatSeamListsUnitPairs) {
    auto s = cases::side_by_side(2, 2, 4);
    Assembly a = solve_cover(s.p, ModuleSupply::unbounded({1, 2}));
    auto steps = assembly_instructions(s.p, a);
    int joins = 0;
    for (const InstructionStep& st : steps) {
        if (st.kind != "join") continue;
        ++joins;
        EXPECT_EQ(st.detail["flat_pairs"], 4);
        EXPECT_EQ(st.detail["gathered_units"], 0);
        EXPECT_EQ(st.detail["pairs"].size(), 4u);
    }
    EXPECT_EQ(joins, 1);
    EXPECT_EQ(steps.front().kind, "manifest");
}

TEST(Instructions, GatherAndPleatDirectives) {
    auto s = cases::side_by_side(2, 2, 4);
    ASSERT_TRUE(gather_edge(s.p, s.seam, SeamSideId::A).accepted());
    ASSERT_TRUE(convert_to_pleat(s.p, s.r, {3, 1}, Direction::Right).accepted());
    auto steps = assembly_instructions(s.p, solve_cover(s.p, ModuleSupply::unbounded({1, 2})));
    bool gathered = false, pleat = false;
    for (const InstructionStep& st : steps) {
        if (st.kind == "join") gathered = st.detail["gathered_units"].get<int>() > 0;
        if (st.kind == "pleat") {
            pleat = true;
            EXPECT_NE(st.text.find("L+ -> R-"), std::string::npos);
        }
    }
    EXPECT_TRUE(gathered);
    EXPECT_TRUE(pleat);
    std::string md = instructions_markdown(steps);
    EXPECT_NE(md.find("## Pleats"), std::string::npos);
    EXPECT_EQ(instructions_json(steps).size(), steps.size());
}

TEST(Instructions, PleatDirectivePerDirection) {
    EXPECT_EQ(pleat_directive(Direction::Right), "connect left pins to right sockets (L+ -> R-)");
    EXPECT_EQ(pleat_directive(Direction::Down), "connect top pins to bottom sockets (T+ -> B-)");
}

}  // namespace
}  // namespace garmod
