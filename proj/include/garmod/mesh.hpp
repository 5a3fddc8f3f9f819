#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "garmod/layout.hpp"
#include "garmod/pattern.hpp"

namespace garmod {

inline constexpr double kFrontDepth = 0.2;  // m, OutsideUp panels; InsideUp sit at -kFrontDepth

// 2D alignment offset per panel id, in cm.
using Alignment = std::map<int, Vec2>;

// Accepts {"<panel id or name>": [x, y], ...}. Throws ParseError, UnknownPanel.
Alignment alignment_from_json(const nlohmann::json& j, const Pattern& pattern);
// Every panel at the origin of its own drawing coordinates.
Alignment drawn_alignment(const Pattern& pattern);

struct PanelMesh {
    int panel = -1;
    std::string name;
    int subdivisions = 0;            // boundary steps per base unit
    std::vector<Vec2> local;         // cm, panel drawing coordinates
    std::vector<std::array<double, 3>> vertices;  // m, placed
    std::vector<std::array<int, 3>> triangles;    // counter-clockwise in the panel plane
    // Vertex ids along every side of every meshed cell, in the cell's counter-clockwise order.
    std::map<std::pair<int, int>, std::vector<int>> side_vertices;  // (cell id, side)
};

enum class ThreadTag { Seam, GatherFold, PleatFold, DartClose };
std::string_view to_string(ThreadTag tag);

struct Thread {
    int mesh_a = -1, vid_a = -1;
    int mesh_b = -1, vid_b = -1;
    ThreadTag tag = ThreadTag::Seam;
    auto operator<=>(const Thread&) const = default;
};

struct FabricParams {
    double areal_density = 0.6;  // kg/m^2
    double stiffness = 3.0;      // tension, compression, shear and bending
    int substeps = 7;
    int frames = 100;
};

struct MeshBundle {
    double spacing_cm = 1.0;
    std::vector<PanelMesh> meshes;  // one per panel, in pattern order
    std::vector<Thread> threads;
    FabricParams fabric;
    int revision = 0;
};

// Boundary steps per base unit: the smallest even count whose step does not exceed `spacing_cm`.
int subdivisions_for(double base_unit, double spacing_cm);

// Foundation and dart cells are meshed; pleat cells and dart wedges stay open. Vertices are
// placed with `offset` (cm) and the depth for the panel's orientation.
// Throws InvalidArgument (spacing), DegeneratePanel.
PanelMesh triangulate(const Pattern& pattern, int panel, double spacing_cm = 1.0, Vec2 offset = {});

// Seam, gather, pleat and dart threads. Throws ResolutionMismatch.
std::vector<Thread> generate_threads(const Pattern& pattern, const std::vector<PanelMesh>& meshes);

// Throws MissingAlignment, InvalidArgument for an empty pattern.
MeshBundle build_mesh_bundle(const Pattern& pattern, const Alignment& alignment, double spacing_cm = 1.0);

std::string to_obj(const PanelMesh& mesh);
std::string sidecar_text(const MeshBundle& bundle);
// File name and text of every mesh file, then the sidecar. Throws InvalidArgument when empty.
std::vector<std::pair<std::string, std::string>> bundle_files(const MeshBundle& bundle);
// Writes <name>.obj per panel and threads.txt; returns the file names. Throws IoFailure.
std::vector<std::string> export_bundle(const MeshBundle& bundle, const std::filesystem::path& dir);

// Thread endpoints on mesh boundaries, triangle edge bound, orientation and boundary length.
std::vector<std::string> mesh_violations(const Pattern& pattern, const MeshBundle& bundle);

}  // namespace garmod
