#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "garmod/bench.hpp"
#include "garmod/error.hpp"
#include "garmod/library.hpp"
#include "garmod/mesh.hpp"
#include "garmod/pipeline.hpp"
#include "garmod/serialize.hpp"
#include "garmod/service.hpp"
#include "garmod/validate.hpp"

namespace {

using namespace garmod;
using nlohmann::json;

// 2 = validation, 3 = infeasible, 4 = timeout, 1 = anything else.
int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::Infeasible: return 3;
    case ErrorCode::TimeBudgetExceeded: return 4;
    case ErrorCode::IoFailure:
    case ErrorCode::NotFound:
        return 1;
    default: return 2;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoFailure, "cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw Error(ErrorCode::IoFailure, "cannot write " + path);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// "10..25", "10..25..5" or "4,5,8".
std::vector<int> int_list(const std::string& s) {
    std::vector<int> out;
    try {
        size_t dots = s.find("..");
        if (dots != std::string::npos) {
            std::vector<std::string> parts;
            for (size_t from = 0;;) {
                size_t at = s.find("..", from);
                parts.push_back(s.substr(from, at - from));
                if (at == std::string::npos) break;
                from = at + 2;
            }
            int lo = std::stoi(parts.at(0)), hi = std::stoi(parts.at(1));
            int step = parts.size() > 2 ? std::stoi(parts[2]) : 1;
            if (step <= 0 || hi < lo) throw std::invalid_argument(s);
            for (int v = lo; v <= hi; v += step) out.push_back(v);
        } else {
            for (const std::string& item : split(s, ',')) out.push_back(std::stoi(item));
        }
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "expected a list like 1,2,4 or a range like 10..25, got '" + s + "'");
    }
    return out;
}

std::vector<double> double_list(const std::string& s) {
    std::vector<double> out;
    try {
        for (const std::string& item : split(s, ',')) out.push_back(std::stod(item));
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "expected a comma-separated list of numbers, got '" + s + "'");
    }
    return out;
}

struct SupplyFlags {
    std::string file;
    std::string sizes;
    double budget = 60.0;

    void add(CLI::App* cmd) {
        cmd->add_option("--supply", file, "supply file");
        cmd->add_option("--sizes", sizes, "unbounded foundation sides, e.g. 1,2,3,4");
        cmd->add_option("--budget", budget, "solver time budget in seconds");
    }
    ModuleSupply supply() const {
        if (!file.empty()) return supply_from_json(read_json(file));
        if (!sizes.empty()) {
            ModuleSupply s = ModuleSupply::unbounded(int_list(sizes));
            validate_supply(s);
            return s;
        }
        return default_supply();
    }
    SolveOptions options() const {
        SolveOptions o;
        o.time_budget_s = budget;
        return o;
    }
};

int cmd_validate(const std::string& path, bool as_json) {
    std::vector<json> diagnostics;
    try {
        Pattern p = pattern_from_json(read_file(path));
        for (const Violation& v : pattern_violations(p)) {
            diagnostics.push_back({{"rule", v.rule}, {"panel", v.panel}, {"seam", v.seam}, {"message", v.message},
                                   {"text", to_string(v)}});
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::IoFailure) throw;
        diagnostics.push_back({{"rule", "load"}, {"code", to_string(e.code())}, {"message", e.detail()},
                               {"text", std::string(e.what())}});
    }
    if (as_json) {
        json out = {{"valid", diagnostics.empty()}, {"violations", diagnostics}};
        std::cout << out.dump(2) << "\n";
    } else if (diagnostics.empty()) {
        std::cout << path << ": valid\n";
    } else {
        for (const json& d : diagnostics) std::cout << path << ": " << d["text"].get<std::string>() << "\n";
    }
    return diagnostics.empty() ? 0 : 2;
}

int cmd_decompose(const std::string& path, const SupplyFlags& flags, const std::string& out) {
    Pattern p = load_pattern(path);
    ModuleSupply supply = flags.supply();
    Assembly a = solve_cover(p, supply, flags.options());
    auto problems = assembly_violations(p, a, supply);
    json doc = assembly_json(a, p);
    if (!out.empty()) write_file(out, doc.dump(2) + "\n");
    std::printf("modules %d\n", a.objective);
    for (const auto& [side, n] : a.usage()) std::printf("  %dx%d  %d\n", side, side, n);
    std::printf("cells %zu  variables %zu  components %zu\n", a.stats.cells, a.stats.variables, a.stats.components);
    std::printf("lower_bound %d  optimal %s  runtime_ms %.1f\n", a.stats.lower_bound, a.stats.optimal ? "yes" : "no",
                a.stats.runtime_ms);
    if (!a.stats.optimal) std::fprintf(stderr, "warning: time budget ran out; the cover is not proven minimal\n");
    for (const std::string& v : problems) std::fprintf(stderr, "invalid assembly: %s\n", v.c_str());
    return problems.empty() ? 0 : 2;
}

int cmd_export_svg(const std::string& path, const SupplyFlags& flags, double width, double length,
                   const std::string& dir) {
    Pattern p = load_pattern(path);
    SheetExport e = export_sheets(p, flags.supply(), width, length, flags.options());
    for (const std::string& name : write_sheets(e, dir)) std::printf("%s\n", (std::filesystem::path(dir) / name).c_str());
    std::printf("pieces %zu  sheets %zu  utilization %.4f\n", e.layout.pieces.size(), e.svgs.size(),
                e.layout.utilization);
    return 0;
}

int cmd_export_mesh(const std::string& path, const std::string& alignment, bool drawn, double spacing,
                    const std::string& dir) {
    Pattern p = load_pattern(path);
    if (alignment.empty() && !drawn) {
        throw Error(ErrorCode::MissingAlignment, "pass --alignment <file> or --drawn");
    }
    Alignment a = drawn ? drawn_alignment(p) : alignment_from_json(read_json(alignment), p);
    MeshBundle b = build_mesh_bundle(p, a, spacing);
    for (const std::string& name : export_bundle(b, dir)) std::printf("%s\n", (std::filesystem::path(dir) / name).c_str());
    std::printf("meshes %zu  threads %zu\n", b.meshes.size(), b.threads.size());
    return 0;
}

int cmd_apply(const std::string& path, const std::string& script, const std::string& builtin,
              const std::string& out) {
    Pattern p = load_pattern(path);
    json edits;
    if (!builtin.empty()) {
        if (builtin != "compound-skirt") throw Error(ErrorCode::NotFound, "no built-in script '" + builtin + "'");
        edits = compound_skirt_script();
    } else {
        edits = read_json(script);
    }
    ScriptOutcome r = apply_script(p, edits);
    if (r.failed_at >= 0) {
        std::fprintf(stderr, "edit %d rejected: %s: %s\n", r.failed_at, r.reason.c_str(), r.message.c_str());
        return 2;
    }
    save_pattern(p, out);
    std::printf("applied %zu edits, revision %d\n", edits.size(), p.revision);
    return 0;
}

int cmd_bench(const std::string& sizes, const std::string& removal, int seeds, double budget,
              const std::string& dir) {
    SolveOptions o;
    o.time_budget_s = budget;
    auto rows = run_bench(int_list(sizes), double_list(removal), seeds, default_supply(), o);
    std::string table = bench_table(rows);
    std::cout << table;
    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        write_file(dir + "/bench.json", bench_json(rows).dump(2) + "\n");
        write_file(dir + "/bench.txt", table);
        write_file(dir + "/bench.svg", bench_svg(rows));
    }
    return 0;
}

Service* g_service = nullptr;

void on_signal(int) {
    if (g_service) g_service->stop();
}

int cmd_serve(const std::string& host, int port, const std::string& root, const ServiceOptions& options) {
    PatternStore store(root.empty() ? PatternStore::root_from_env() : std::filesystem::path(root));
    Service service(store, options);
    int bound = service.bind(host, port);
    g_service = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::printf("serving http://%s:%d (store %s)\n", host.c_str(), bound, store.root().c_str());
    std::fflush(stdout);
    service.run();
    g_service = nullptr;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modular garment pattern engine"};
    app.require_subcommand(1);

    std::string file, out, dir;
    bool as_json = false;

    auto* templates = app.add_subcommand("templates", "list the template library");

    std::string template_name;
    auto* tmpl = app.add_subcommand("template", "write a template pattern");
    tmpl->add_option("name", template_name)->required();
    tmpl->add_option("-o,--output", out, "pattern file")->required();

    std::string script, builtin;
    auto* apply = app.add_subcommand("apply", "apply an edit script to a pattern");
    apply->add_option("file", file)->required()->check(CLI::ExistingFile);
    auto* script_opt = apply->add_option("--script", script, "JSON array of edit documents")->check(CLI::ExistingFile);
    apply->add_option("--builtin", builtin, "named script: compound-skirt")->excludes(script_opt);
    apply->add_option("-o,--output", out, "result pattern file")->required();

    auto* validate = app.add_subcommand("validate", "check every pattern invariant");
    validate->add_option("file", file)->required()->check(CLI::ExistingFile);
    validate->add_flag("--json", as_json, "print diagnostics as JSON");

    SupplyFlags supply;
    auto* decompose = app.add_subcommand("decompose", "minimum module cover");
    decompose->add_option("file", file)->required()->check(CLI::ExistingFile);
    supply.add(decompose);
    decompose->add_option("-o,--output", out, "assembly file");

    double sheet_width = 0, sheet_length = 0;
    auto* svg = app.add_subcommand("export-svg", "cutting sheets and assembly instructions");
    svg->add_option("file", file)->required()->check(CLI::ExistingFile);
    svg->add_option("--sheet-width", sheet_width, "sheet width in cm")->required();
    svg->add_option("--sheet-length", sheet_length, "sheet length in cm; 0 for one continuous sheet");
    supply.add(svg);
    svg->add_option("-o,--output", dir, "output directory")->required();

    std::string alignment;
    bool drawn = false;
    double spacing = 1.0;
    auto* mesh = app.add_subcommand("export-mesh", "per-panel meshes and sewing threads");
    mesh->add_option("file", file)->required()->check(CLI::ExistingFile);
    auto* align_opt = mesh->add_option("--alignment", alignment, "JSON object of panel offsets in cm")
                          ->check(CLI::ExistingFile);
    mesh->add_flag("--drawn", drawn, "place panels where they were drawn")->excludes(align_opt);
    mesh->add_option("--spacing", spacing, "vertex spacing in cm");
    mesh->add_option("-o,--output", dir, "output directory")->required();

    std::string sizes = "10..25", removal = "0,0.01,0.1";
    int seeds = 10;
    double bench_budget = 60.0;
    auto* bench = app.add_subcommand("bench", "decomposition runtime on random boards");
    bench->add_option("--sizes", sizes, "board sides, e.g. 10..25");
    bench->add_option("--removal", removal, "fractions of cells removed");
    bench->add_option("--seeds", seeds, "boards per size and fraction");
    bench->add_option("--budget", bench_budget, "solver time budget per board in seconds");
    bench->add_option("-o,--output", dir, "directory for bench.json, bench.txt and bench.svg");

    std::string host = "127.0.0.1", store_root;
    int port = 8080;
    ServiceOptions service_options;
    auto* serve = app.add_subcommand("serve", "HTTP API");
    serve->add_option("--host", host);
    serve->add_option("--port", port, "0 picks a free port");
    serve->add_option("--store", store_root, std::string("pattern directory; default $") + kStoreEnv);
    serve->add_option("--workers", service_options.solver_workers, "concurrent solves");
    serve->add_option("--budget", service_options.default_budget_s, "default solver budget in seconds");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*templates) {
            for (const TemplateInfo& t : template_list()) std::printf("%-16s %s\n", t.name.c_str(), t.description.c_str());
            return 0;
        }
        if (*tmpl) {
            save_pattern(make_template(template_name), out);
            return 0;
        }
        if (*apply) {
            if (script.empty() && builtin.empty()) throw Error(ErrorCode::InvalidArgument, "pass --script or --builtin");
            return cmd_apply(file, script, builtin, out);
        }
        if (*validate) return cmd_validate(file, as_json);
        if (*decompose) return cmd_decompose(file, supply, out);
        if (*svg) return cmd_export_svg(file, supply, sheet_width, sheet_length, dir);
        if (*mesh) return cmd_export_mesh(file, alignment, drawn, spacing, dir);
        if (*bench) return cmd_bench(sizes, removal, seeds, bench_budget, dir);
        if (*serve) return cmd_serve(host, port, store_root, service_options);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
