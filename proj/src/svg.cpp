#include "sqmap/svg.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <utility>

namespace sqmap {

namespace {

void append_point(std::string& out, const Vec2& p) {
    char buf[64];
    // SVG y grows downward; the parameter square is drawn y-up.
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f", 1000.0 * p.x(), 1000.0 * (1.0 - p.y()));
    out += buf;
}

}  // namespace

void write_parameterization_svg(const Mesh& mesh, const Mapping& f, const std::string& path) {
    check_mapping(mesh, f);
    std::string out;
    out +=
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" "
        "width=\"1000\" height=\"1000\">\n";
    out += "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";

    out += "<g fill=\"#d62728\" fill-opacity=\"0.6\" stroke=\"none\">\n";
    for (int t = 0; t < mesh.face_count(); ++t) {
        const Vec2 a = f.row(mesh.faces()(t, 0)), b = f.row(mesh.faces()(t, 1)),
                   c = f.row(mesh.faces()(t, 2));
        if (signed_area_2d(a, b, c) > 0.0) continue;
        out += "<polygon points=\"";
        append_point(out, a);
        out += ' ';
        append_point(out, b);
        out += ' ';
        append_point(out, c);
        out += "\"/>\n";
    }
    out += "</g>\n";

    std::set<std::pair<int, int>> edges;
    for (int t = 0; t < mesh.face_count(); ++t) {
        for (int e = 0; e < 3; ++e) {
            const int a = mesh.faces()(t, e), b = mesh.faces()(t, (e + 1) % 3);
            edges.emplace(std::min(a, b), std::max(a, b));
        }
    }
    out += "<path fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.5\" d=\"";
    for (const auto& [a, b] : edges) {
        out += 'M';
        append_point(out, f.row(a));
        out += 'L';
        append_point(out, f.row(b));
    }
    out += "\"/>\n</svg>\n";

    std::ofstream file(path, std::ios::binary);
    if (!file) throw ParseError("cannot open '" + path + "' for writing");
    file << out;
}

}  // namespace sqmap
