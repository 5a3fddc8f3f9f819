#include <gtest/gtest.h>

#include <random>

#include "garmod/serialize.hpp"
#include "support/appendix_cases.hpp"
#include "support/fuzz.hpp"

using namespace garmod;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Serialize, DrawAndStitchPhasesRoundTrip) {
    Pattern p = new_pattern({});
    int a = add_panel(p, cases::rect(0, 0, 3, 2), "front");
    flip_panel(p, a);
    std::string draw = to_json(p);
    EXPECT_EQ(to_json(pattern_from_json(draw)), draw);
    int b = add_panel(p, cases::rect(0, 3, 3, 2), "back");
    begin_stitching(p);
    stitch_span(p, a, {3, 2}, {1, 2}, b, {1, 3}, {3, 3});
    std::string stitch = to_json(p);
    Pattern loaded = pattern_from_json(stitch);
    EXPECT_EQ(loaded, p);
    EXPECT_EQ(to_json(loaded), stitch);
}

TEST(Serialize, RandomEditedPatternsRoundTripByteIdentically) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 150; ++trial) {
        Pattern p = fuzz::random_pattern(rng);
        for (int step = 0; step < 8; ++step) apply_feature(p, fuzz::random_edit(p, rng));
        std::string text = to_json(p);
        Pattern loaded = pattern_from_json(text);
        ASSERT_EQ(loaded, p) << "trial " << trial;
        ASSERT_EQ(to_json(loaded), text);
    }
}

TEST(Serialize, TamperedDigestIsAReplayMismatch) {
    cases::Sandwich s = cases::sandwich();
    ASSERT_TRUE(gather_edge(s.p, s.top, SeamSideId::A).accepted());
    nlohmann::json doc = nlohmann::json::parse(to_json(s.p));
    doc["grid_digest"] = "0000000000000000";
    EXPECT_EQ(code_of([&] { pattern_from_json(doc.dump()); }), ErrorCode::ReplayMismatch);
    doc = nlohmann::json::parse(to_json(s.p));
    doc["features"][0]["seam"] = 7;
    EXPECT_EQ(code_of([&] { pattern_from_json(doc.dump()); }), ErrorCode::ReplayMismatch);
}

TEST(Serialize, MalformedDocuments) {
    EXPECT_EQ(code_of([] { pattern_from_json("{"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { pattern_from_json("{}"); }), ErrorCode::ParseError);
    nlohmann::json doc = nlohmann::json::parse(to_json(new_pattern({})));
    doc["format_version"] = 99;
    EXPECT_EQ(code_of([&] { pattern_from_json(doc.dump()); }), ErrorCode::ParseError);
    doc["format_version"] = kPatternFormatVersion;
    doc["config"]["seam_allowance"] = 5.0;
    EXPECT_EQ(code_of([&] { pattern_from_json(doc.dump()); }), ErrorCode::InvalidConfig);
}

TEST(Serialize, UndoReplaysThePrefix) {
    cases::Sandwich s = cases::sandwich();
    Pattern start = s.p;
    ASSERT_TRUE(gather_edge(s.p, s.top, SeamSideId::A).accepted());
    Pattern after_gather = s.p;
    ASSERT_TRUE(convert_to_pleat(s.p, s.a, {1, 4}, Direction::Right).accepted());
    EXPECT_EQ(undo(s.p), after_gather);
    EXPECT_EQ(undo(undo(s.p)), start);
    EXPECT_EQ(code_of([&] { undo(start); }), ErrorCode::InvalidArgument);
}

TEST(Serialize, FileRoundTrip) {
    cases::Sandwich s = cases::sandwich();
    std::string path = ::testing::TempDir() + "/garmod_pattern.json";
    save_pattern(s.p, path);
    EXPECT_EQ(load_pattern(path), s.p);
    EXPECT_EQ(code_of([] { load_pattern("/nonexistent/dir/p.json"); }), ErrorCode::IoFailure);
}
