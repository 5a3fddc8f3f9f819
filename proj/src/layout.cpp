#include "garmod/layout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "garmod/error.hpp"

namespace garmod {

std::string_view to_string(PieceKind kind) { return kind == PieceKind::Square ? "square" : "dart_pair"; }

namespace {

constexpr double kEps = 1e-9;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

std::vector<Vec2> rectangle(double w, double h) { return {{0, 0}, {w, 0}, {w, h}, {0, h}}; }

double tick_length(const PatternConfig& c) { return c.seam_allowance > 0 ? c.seam_allowance : c.connector_spacing() / 4; }

// Ticks along one side of the stitching rectangle [d, d+w] x [d, d+h]; offsets run from
// `start` towards `dir`, and `inward` points from the cut edge to the stitching line.
void add_ticks(CutPiece& piece, const std::vector<double>& offsets, Vec2 start, Vec2 dir, Vec2 inward, double len,
               double allowance) {
    for (double t : offsets) {
        Vec2 on{start.x + dir.x * t, start.y + dir.y * t};
        double reach = allowance > 0 ? allowance : len;
        Vec2 from{on.x - inward.x * (allowance > 0 ? reach : 0), on.y - inward.y * (allowance > 0 ? reach : 0)};
        Vec2 to{from.x + inward.x * len, from.y + inward.y * len};
        piece.marks.push_back({from, to});
    }
}

// Marks on a trapezoid's narrow base, measured from its right-angle corner.
std::vector<double> narrow_offsets(double length, double spacing) {
    std::vector<double> out;
    for (double t = spacing / 2; t <= length - spacing / 2 + kEps; t += spacing) out.push_back(t);
    return out;
}

CutPiece square_piece(const PatternConfig& c, int size) {
    CutPiece p;
    double s = size * c.base_unit, d = c.seam_allowance, len = tick_length(c);
    p.width = p.height = s + 2 * d;
    p.net_area = s * s;
    p.cut_paths.push_back(rectangle(p.width, p.height));
    auto offs = connector_positions(s, c);
    add_ticks(p, offs, {d, d}, {1, 0}, {0, 1}, len, d);
    add_ticks(p, offs, {d + s, d}, {0, 1}, {-1, 0}, len, d);
    add_ticks(p, offs, {d + s, d + s}, {-1, 0}, {0, -1}, len, d);
    add_ticks(p, offs, {d, d + s}, {0, -1}, {1, 0}, len, d);
    int n = static_cast<int>(offs.size());
    p.marks_per_edge = {n, n, n, n};
    return p;
}

CutPiece dart_piece(const PatternConfig& c, double w, double h) {
    CutPiece p;
    p.kind = PieceKind::DartPair;
    double unit = c.base_unit, d = c.seam_allowance, len = tick_length(c);
    double narrow = unit - w / 2;
    double inner_w = 2 * unit - w / 2;
    p.width = inner_w + 2 * d;
    p.height = h + 2 * d;
    p.net_area = inner_w * h;
    p.cut_paths.push_back(rectangle(p.width, p.height));
    // Slanted legs: the first trapezoid's wide base is on the bottom, the reflected second
    // trapezoid's wide base on the top. Extend the leg through the allowance to both cut edges.
    double slope = (w / 2) / h;
    p.cut_paths.push_back({{d + unit + slope * d, 0}, {d + narrow - slope * d, p.height}});

    auto wide = connector_positions(unit, c);
    auto side = connector_positions(h, c);
    auto nar = narrow_offsets(narrow, c.connector_spacing());
    // Bottom: wide base of the first trapezoid from the left corner, narrow base of the
    // second measured from the right corner.
    add_ticks(p, wide, {d, d}, {1, 0}, {0, 1}, len, d);
    add_ticks(p, nar, {d + inner_w, d}, {-1, 0}, {0, 1}, len, d);
    add_ticks(p, side, {d + inner_w, d}, {0, 1}, {-1, 0}, len, d);
    // Top: wide base of the second trapezoid from the right corner, narrow base of the first
    // from the left corner.
    add_ticks(p, wide, {d + inner_w, d + h}, {-1, 0}, {0, -1}, len, d);
    add_ticks(p, nar, {d, d + h}, {1, 0}, {0, -1}, len, d);
    add_ticks(p, side, {d, d + h}, {0, -1}, {1, 0}, len, d);
    int across = static_cast<int>(wide.size() + nar.size());
    int up = static_cast<int>(side.size());
    p.marks_per_edge = {across, up, across, up};
    return p;
}

Vec2 place(const PlacedPiece& pp, const CutPiece& piece, Vec2 v) {
    if (!pp.rotated) return {pp.x + v.x, pp.y + v.y};
    return {pp.x + piece.height - v.y, pp.y + v.x};
}

}  // namespace

std::vector<CutPiece> cut_pieces(const Pattern& pattern, const Assembly& assembly) {
    const PatternConfig& c = pattern.config;
    std::vector<CutPiece> out;
    for (size_t i = 0; i < assembly.placements.size(); ++i) {
        const Placement& pl = assembly.placements[i];
        CutPiece piece;
        std::string where = pattern.panel(pl.panel).name + " (" + std::to_string(pl.origin.x) + "," +
                            std::to_string(pl.origin.y) + ")";
        switch (pl.role) {
        case ModuleRole::Foundation:
            piece = square_piece(c, pl.size);
            piece.label = std::to_string(pl.size) + "u square " + where;
            break;
        case ModuleRole::Pleat:
            piece = square_piece(c, 1);
            piece.label = "pleat " + std::string(to_string(pl.pleat_dir)) + " " + where;
            break;
        case ModuleRole::DartPair: {
            const Dart& dart = pattern.dart(pl.dart_id);
            piece = dart_piece(c, dart.width, dart.height);
            piece.label = "dart " + std::to_string(dart.id) + "." + std::to_string(pl.module_index) + " " + where;
            break;
        }
        }
        piece.placement = static_cast<int>(i);
        out.push_back(std::move(piece));
    }
    return out;
}

CutLayout pack_layout(std::vector<CutPiece> pieces, double sheet_width, double sheet_length) {
    CutLayout layout;
    layout.sheet_width = sheet_width;
    layout.sheet_length = sheet_length;
    if (!(sheet_width > 0)) throw Error(ErrorCode::InvalidArgument, "sheet width must be positive");
    std::vector<PlacedPiece> items;
    for (size_t i = 0; i < pieces.size(); ++i) {
        const CutPiece& p = pieces[i];
        PlacedPiece pp;
        pp.piece = i;
        pp.width = p.width;
        pp.height = p.height;
        if (p.width > sheet_width + kEps) {
            if (p.height > sheet_width + kEps) {
                throw Error(ErrorCode::PieceTooWide, p.label + " (" + num(p.width) + " x " + num(p.height) +
                                                         " cm) does not fit a " + num(sheet_width) + " cm sheet");
            }
            pp.rotated = true;
            std::swap(pp.width, pp.height);
        }
        if (sheet_length > 0 && pp.height > sheet_length + kEps) {
            throw Error(ErrorCode::PieceTooWide, p.label + " is longer than the sheet");
        }
        items.push_back(pp);
    }
    std::stable_sort(items.begin(), items.end(), [](const PlacedPiece& a, const PlacedPiece& b) {
        if (std::fabs(a.height - b.height) > kEps) return a.height > b.height;
        if (std::fabs(a.width - b.width) > kEps) return a.width > b.width;
        return a.piece < b.piece;
    });
    int sheet = 0;
    double shelf_y = 0, shelf_h = 0, x = 0;
    bool shelf_open = false;
    layout.sheet_heights.push_back(0);
    for (PlacedPiece pp : items) {
        if (!shelf_open || x + pp.width > sheet_width + kEps) {
            double next_y = shelf_open ? shelf_y + shelf_h : 0;
            if (sheet_length > 0 && next_y + pp.height > sheet_length + kEps) {
                ++sheet;
                layout.sheet_heights.push_back(0);
                next_y = 0;
            }
            shelf_y = next_y;
            shelf_h = pp.height;
            x = 0;
            shelf_open = true;
        }
        pp.sheet = sheet;
        pp.x = x;
        pp.y = shelf_y;
        x += pp.width;
        layout.sheet_heights[static_cast<size_t>(sheet)] = std::max(layout.sheet_heights[static_cast<size_t>(sheet)], shelf_y + shelf_h);
        layout.placed.push_back(pp);
    }
    double used = 0, area = 0;
    for (double h : layout.sheet_heights) used += h * sheet_width;
    for (const CutPiece& p : pieces) area += p.width * p.height;
    layout.utilization = used > 0 ? area / used : 0.0;
    layout.pieces = std::move(pieces);
    return layout;
}

std::vector<std::string> layout_violations(const CutLayout& layout) {
    std::vector<std::string> out;
    const auto& pl = layout.placed;
    for (const PlacedPiece& p : pl) {
        double limit = layout.sheet_length > 0 ? layout.sheet_length : layout.sheet_heights.at(static_cast<size_t>(p.sheet));
        if (p.x < -kEps || p.y < -kEps || p.x + p.width > layout.sheet_width + 1e-6 || p.y + p.height > limit + 1e-6) {
            out.push_back("piece " + std::to_string(p.piece) + " leaves the sheet");
        }
    }
    for (size_t i = 0; i < pl.size(); ++i) {
        for (size_t j = i + 1; j < pl.size(); ++j) {
            const PlacedPiece& a = pl[i];
            const PlacedPiece& b = pl[j];
            if (a.sheet != b.sheet) continue;
            bool apart = a.x + a.width <= b.x + 1e-6 || b.x + b.width <= a.x + 1e-6 || a.y + a.height <= b.y + 1e-6 ||
                         b.y + b.height <= a.y + 1e-6;
            if (!apart) out.push_back("pieces " + std::to_string(a.piece) + " and " + std::to_string(b.piece) + " overlap");
        }
    }
    return out;
}

std::string render_svg(const CutLayout& layout, int sheet) {
    double height = layout.sheet_length > 0 ? layout.sheet_length
                    : sheet < static_cast<int>(layout.sheet_heights.size()) ? layout.sheet_heights[static_cast<size_t>(sheet)]
                                                                             : 0.0;
    double wmm = layout.sheet_width * 10, hmm = height * 10;
    auto pt = [&](Vec2 v) { return num(v.x * 10) + " " + num(hmm - v.y * 10); };
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(wmm) << "mm\" height=\"" << num(hmm)
        << "mm\" viewBox=\"0 0 " << num(wmm) << " " << num(hmm) << "\"";
    if (layout.revision >= 0) svg << " data-revision=\"" << layout.revision << "\"";
    svg << ">\n";
    svg << "<style>.cut{fill:none;stroke:#ff0000;stroke-width:0.2}.mark{fill:none;stroke:#000000;stroke-width:0.2}</style>\n";
    for (const PlacedPiece& pp : layout.placed) {
        if (pp.sheet != sheet) continue;
        const CutPiece& piece = layout.pieces[pp.piece];
        svg << "<g id=\"piece-" << pp.piece << "\" data-kind=\"" << to_string(piece.kind) << "\" data-label=\""
            << piece.label << "\">\n";
        for (size_t k = 0; k < piece.cut_paths.size(); ++k) {
            svg << "<path class=\"cut\" d=\"";
            for (size_t i = 0; i < piece.cut_paths[k].size(); ++i) {
                svg << (i ? " L " : "M ") << pt(place(pp, piece, piece.cut_paths[k][i]));
            }
            svg << (k == 0 ? " Z" : "") << "\"/>\n";
        }
        if (!piece.marks.empty()) {
            svg << "<path class=\"mark\" d=\"";
            for (size_t i = 0; i < piece.marks.size(); ++i) {
                svg << (i ? " " : "") << "M " << pt(place(pp, piece, piece.marks[i].from)) << " L "
                    << pt(place(pp, piece, piece.marks[i].to));
            }
            svg << "\"/>\n";
        }
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string pleat_directive(Direction dir) {
    switch (dir) {
    case Direction::Right: return "connect left pins to right sockets (L+ -> R-)";
    case Direction::Left: return "connect right pins to left sockets (R+ -> L-)";
    case Direction::Up: return "connect bottom pins to top sockets (B+ -> T-)";
    case Direction::Down: return "connect top pins to bottom sockets (T+ -> B-)";
    }
    return {};
}

std::vector<InstructionStep> assembly_instructions(const Pattern& pattern, const Assembly& assembly) {
    std::vector<InstructionStep> steps;
    const int k = pattern.config.connectors_per_unit();
    for (const Panel& panel : pattern.panels) {
        std::map<int, int> squares;
        int pleats = 0;
        std::set<std::pair<int, int>> dart_modules;
        for (const Placement& pl : assembly.placements) {
            if (pl.panel != panel.id) continue;
            if (pl.role == ModuleRole::Foundation) ++squares[pl.size];
            if (pl.role == ModuleRole::Pleat) ++pleats;
            if (pl.role == ModuleRole::DartPair) dart_modules.insert({pl.dart_id, pl.module_index});
        }
        std::string text = "Panel " + panel.name + ":";
        nlohmann::json sq = nlohmann::json::object();
        bool first = true;
        for (auto it = squares.rbegin(); it != squares.rend(); ++it) {
            text += std::string(first ? " " : ", ") + std::to_string(it->second) + " x " + std::to_string(it->first) + "u square";
            sq[std::to_string(it->first)] = it->second;
            first = false;
        }
        if (pleats) text += std::string(first ? " " : ", ") + std::to_string(pleats) + " pleat module" + (pleats > 1 ? "s" : "");
        if (!dart_modules.empty()) {
            first = first && !pleats;
            text += std::string(first ? " " : ", ") + std::to_string(dart_modules.size()) + " dart module" +
                    (dart_modules.size() > 1 ? "s" : "");
        }
        steps.push_back({"manifest", text,
                         {{"panel", panel.id}, {"squares", sq}, {"pleats", pleats}, {"dart_modules", dart_modules.size()}}});
    }
    for (const Seam& s : pattern.seams) {
        const std::string& na = pattern.panel(s.panel_a).name;
        const std::string& nb = pattern.panel(s.panel_b).name;
        int flat = 0, gathered = 0;
        std::map<int, int> count_a, count_b;
        for (auto [a, b] : s.matching.pairs) {
            ++count_a[a];
            ++count_b[b];
        }
        for (auto [a, b] : s.matching.pairs) {
            if (count_a[a] == 1 && count_b[b] == 1) ++flat;
        }
        for (const auto& m : {count_a, count_b}) {
            for (auto [id, c] : m) gathered += c == 2;
        }
        std::string text = "Join " + na + " to " + nb + " along seam " + std::to_string(s.id) + ": ";
        if (gathered == 0) {
            text += std::to_string(flat) + " one-to-one unit pairs (" + std::to_string(flat * k) + " fastener pairs)";
        } else {
            text += std::to_string(flat) + " one-to-one unit pairs and " + std::to_string(gathered) +
                    " gathered units, each pairing two fasteners on the longer side with one on the shorter";
        }
        nlohmann::json pairs = nlohmann::json::array();
        for (auto [a, b] : s.matching.pairs) pairs.push_back({a, b});
        steps.push_back({"join", text,
                         {{"seam", s.id}, {"panel_a", s.panel_a}, {"panel_b", s.panel_b}, {"flat_pairs", flat},
                          {"gathered_units", gathered}, {"pairs", pairs}}});
    }
    for (const Placement& pl : assembly.placements) {
        if (pl.role != ModuleRole::Pleat) continue;
        std::string text = "Fold the pleat of " + pattern.panel(pl.panel).name + " at (" + std::to_string(pl.origin.x) +
                           "," + std::to_string(pl.origin.y) + ") " + std::string(to_string(pl.pleat_dir)) + ": " +
                           pleat_directive(pl.pleat_dir);
        steps.push_back({"pleat", text,
                         {{"panel", pl.panel},
                          {"cell", {pl.origin.x, pl.origin.y}},
                          {"direction", to_string(pl.pleat_dir)}}});
    }
    for (const Dart& d : pattern.darts) {
        std::string shape = d.modules.size() == 2 ? "diamond" : "triangle";
        std::string text = "Close dart " + std::to_string(d.id) + " (" + shape + ", " + num(d.width) + " cm wide, " +
                           num(d.height) + " cm high): join the slanted legs of each module";
        if (d.modules.size() == 2) text += ", then join the two modules at their narrow ends";
        steps.push_back({"dart", text,
                         {{"dart", d.id}, {"case", d.case_label}, {"modules", d.modules.size()}, {"width", d.width},
                          {"height", d.height}}});
    }
    return steps;
}

nlohmann::json instructions_json(const std::vector<InstructionStep>& steps) {
    nlohmann::json out = nlohmann::json::array();
    for (size_t i = 0; i < steps.size(); ++i) {
        out.push_back({{"step", i + 1}, {"kind", steps[i].kind}, {"text", steps[i].text}, {"detail", steps[i].detail}});
    }
    return out;
}

std::string instructions_markdown(const std::vector<InstructionStep>& steps) {
    std::string out = "# Assembly\n";
    std::string section;
    static const std::map<std::string, std::string> titles = {
        {"manifest", "Modules"}, {"join", "Seams"}, {"pleat", "Pleats"}, {"dart", "Darts"}};
    for (size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].kind != section) {
            section = steps[i].kind;
            out += "\n## " + titles.at(section) + "\n\n";
        }
        out += std::to_string(i + 1) + ". " + steps[i].text + "\n";
    }
    return out;
}

}  // namespace garmod
