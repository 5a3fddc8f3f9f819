#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "garmod/library.hpp"
#include "garmod/pipeline.hpp"
#include "garmod/serialize.hpp"

namespace garmod {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
    int status = -1;
    std::string out;
};

// Runs the CLI with stderr folded into the captured output.
CliRun cli(const std::string& args) {
    CliRun r;
    std::string cmd = std::string(GARMOD_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("garmod_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string at(const std::string& name) const { return (dir / name).string(); }

    fs::path dir;
};

TEST_F(CliTest, CompoundSkirtWalkthrough) {
    ASSERT_EQ(cli("template compound-skirt -o " + at("skirt.json")).status, 0);
    CliRun applied = cli("apply " + at("skirt.json") + " --builtin compound-skirt -o " + at("done.json"));
    ASSERT_EQ(applied.status, 0) << applied.out;
    Pattern expect = make_template("compound-skirt");
    ASSERT_EQ(apply_script(expect, compound_skirt_script()).failed_at, -1);
    EXPECT_EQ(slurp(at("done.json")), to_json(expect));

    EXPECT_EQ(cli("validate " + at("done.json")).status, 0);
    CliRun dec = cli("decompose " + at("done.json") + " -o " + at("asm.json"));
    ASSERT_EQ(dec.status, 0) << dec.out;
    json assembly = json::parse(slurp(at("asm.json")));
    EXPECT_EQ(assembly.at("format_version"), 1);
    EXPECT_EQ(assembly.at("revision"), expect.revision);

    CliRun svg = cli("export-svg " + at("done.json") + " --sheet-width 60 -o " + at("sheets"));
    ASSERT_EQ(svg.status, 0) << svg.out;
    SheetExport e = export_sheets(expect, default_supply(), 60.0);
    EXPECT_EQ(slurp(dir / "sheets" / "sheet_01.svg"), e.svgs[0]);
    EXPECT_TRUE(fs::exists(dir / "sheets" / "instructions.md"));

    CliRun mesh = cli("export-mesh " + at("done.json") + " --drawn --spacing 2 -o " + at("mesh"));
    ASSERT_EQ(mesh.status, 0) << mesh.out;
    EXPECT_TRUE(fs::exists(dir / "mesh" / "threads.txt"));
    EXPECT_TRUE(fs::exists(dir / "mesh" / "00_front_top.obj"));
}

TEST_F(CliTest, ValidateReportsC2SeamId) {
    json doc = json::parse(to_json(make_template("skirt")));
    // Shorten one side of seam 1 so the two sides no longer match.
    for (json& s : doc.at("seams")) {
        if (s.at("id") == 1) s.at("a_from") = json::array({13, 1});
    }
    std::ofstream(at("bad.json")) << doc.dump(2);
    CliRun r = cli("validate " + at("bad.json"));
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.out.find("seam 1"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("LengthMismatch"), std::string::npos) << r.out;
    CliRun j = cli("validate --json " + at("bad.json"));
    EXPECT_EQ(j.status, 2);
    EXPECT_EQ(json::parse(j.out).at("valid"), false);
}

TEST_F(CliTest, ExitCodesPerCategory) {
    ASSERT_EQ(cli("template skirt -o " + at("skirt.json")).status, 0);
    EXPECT_EQ(cli("decompose " + at("skirt.json") + " --sizes 5").status, 3);
    std::ofstream(at("supply.json")) << R"({"format_version": 1, "supply": {"2": null, "3": null}})";
    Pattern board = new_pattern({});
    add_panel(board, {{0, 0}, {25, 0}, {25, 25}, {0, 25}}, "board");
    begin_stitching(board);
    enter_features_phase(board);
    save_pattern(board, at("board.json"));
    EXPECT_EQ(cli("decompose " + at("board.json") + " --supply " + at("supply.json") + " --budget 0.000001").status, 4);
    EXPECT_EQ(cli("export-mesh " + at("skirt.json") + " -o " + at("m")).status, 2);
    EXPECT_EQ(cli("template cape -o " + at("x.json")).status, 1);
    std::ofstream(at("script.json")) << R"([{"kind": "gather", "seam": 0, "side": "a"},
                                            {"kind": "gather", "seam": 0, "side": "a"}])";
    CliRun rejected = cli("apply " + at("skirt.json") + " --script " + at("script.json") + " -o " + at("out.json"));
    EXPECT_EQ(rejected.status, 2);
    EXPECT_NE(rejected.out.find("edit 1 rejected"), std::string::npos) << rejected.out;
}

TEST_F(CliTest, DecomposeTrousersListsModuleCounts) {
    ASSERT_EQ(cli("template trousers -o " + at("t.json")).status, 0);
    CliRun r = cli("decompose " + at("t.json") + " --sizes 1,2,3,4");
    ASSERT_EQ(r.status, 0) << r.out;
    Assembly a = solve_cover(make_template("trousers"), ModuleSupply::unbounded({1, 2, 3, 4}));
    EXPECT_NE(r.out.find("modules " + std::to_string(a.objective) + "\n"), std::string::npos) << r.out;
    EXPECT_TRUE(assembly_violations(make_template("trousers"), a, ModuleSupply::unbounded({1, 2, 3, 4})).empty());
}

TEST_F(CliTest, BenchVariablesGrowWithBoardArea) {
    CliRun r = cli("bench --sizes 4..8..2 --removal 0 --seeds 1 -o " + at("bench"));
    ASSERT_EQ(r.status, 0) << r.out;
    json rows = json::parse(slurp(dir / "bench" / "bench.json"));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_LT(rows[0].at("variables").get<int>(), rows[1].at("variables").get<int>());
    EXPECT_LT(rows[1].at("variables").get<int>(), rows[2].at("variables").get<int>());
    EXPECT_TRUE(fs::exists(dir / "bench" / "bench.svg"));
}

}  // namespace
}  // namespace garmod
