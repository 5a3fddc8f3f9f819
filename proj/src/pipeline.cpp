#include "garmod/pipeline.hpp"

#include <cstdio>
#include <fstream>

#include "garmod/error.hpp"

namespace garmod {

ModuleSupply default_supply() { return ModuleSupply::unbounded({1, 2, 3, 4}); }

SheetExport export_sheets(const Pattern& pattern, const ModuleSupply& supply, double sheet_width,
                          double sheet_length, const SolveOptions& options) {
    SheetExport e;
    e.assembly = solve_cover(pattern, supply, options);
    e.layout = pack_layout(cut_pieces(pattern, e.assembly), sheet_width, sheet_length);
    e.layout.revision = pattern.revision;
    size_t sheets = std::max<size_t>(1, e.layout.sheet_heights.size());
    for (size_t s = 0; s < sheets; ++s) e.svgs.push_back(render_svg(e.layout, static_cast<int>(s)));
    e.steps = assembly_instructions(pattern, e.assembly);
    return e;
}

std::string sheet_file_name(int sheet) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sheet_%02d.svg", sheet + 1);
    return buf;
}

std::vector<std::string> write_sheets(const SheetExport& e, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
    std::vector<std::string> names;
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream f(dir / name, std::ios::binary);
        f << text;
        if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + (dir / name).string());
        names.push_back(name);
    };
    for (size_t s = 0; s < e.svgs.size(); ++s) write(sheet_file_name(static_cast<int>(s)), e.svgs[s]);
    write("instructions.md", instructions_markdown(e.steps));
    write("instructions.json", instructions_json(e.steps).dump(2) + "\n");
    return names;
}

}  // namespace garmod
