#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "garmod/decomposer.hpp"
#include "garmod/layout.hpp"
#include "garmod/mesh.hpp"
#include "garmod/pattern.hpp"

namespace garmod {

// Export steps shared by the CLI and the HTTP service, so both emit identical bytes.

// Foundation sides 1-4, unbounded.
ModuleSupply default_supply();

struct SheetExport {
    Assembly assembly;
    CutLayout layout;
    std::vector<std::string> svgs;  // one per sheet
    std::vector<InstructionStep> steps;
};

// Decompose, cut, pack and render. Throws Infeasible, TimeBudgetExceeded, PieceTooWide.
SheetExport export_sheets(const Pattern& pattern, const ModuleSupply& supply, double sheet_width,
                          double sheet_length = 0.0, const SolveOptions& options = {});
// "sheet_01.svg", 1-based.
std::string sheet_file_name(int sheet);
// Writes every sheet plus instructions.md and instructions.json; returns the file names.
std::vector<std::string> write_sheets(const SheetExport& e, const std::filesystem::path& dir);

}  // namespace garmod
