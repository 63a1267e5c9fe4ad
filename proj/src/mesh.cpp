#include "sqmap/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <utility>

namespace sqmap {

double face_area_3d(const Vec3& p, const Vec3& q, const Vec3& r) {
    return 0.5 * (q - p).cross(r - p).norm();
}

double signed_area_2d(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

namespace {

uint64_t halfedge_key(int a, int b) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) | static_cast<uint32_t>(b);
}

}  // namespace

Mesh::Mesh(Eigen::MatrixX3d vertices, Eigen::MatrixX3i faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
    const int n = vertex_count();
    const int m = face_count();
    if (n < 3) throw ValidationError("mesh needs at least 3 vertices, got " + std::to_string(n));
    if (m < 1) throw ValidationError("mesh needs at least 1 face");
    if (!vertices_.allFinite()) throw ValidationError("non-finite vertex coordinate");

    face_areas_.resize(m);
    std::vector<char> referenced(static_cast<size_t>(n), 0);
    for (int f = 0; f < m; ++f) {
        const int i = faces_(f, 0), j = faces_(f, 1), k = faces_(f, 2);
        for (int v : {i, j, k}) {
            if (v < 0 || v >= n)
                throw ValidationError("face " + std::to_string(f) + " references vertex " +
                                      std::to_string(v) + " outside [0, " + std::to_string(n) + ")");
            referenced[static_cast<size_t>(v)] = 1;
        }
        if (i == j || j == k || k == i)
            throw ValidationError("face " + std::to_string(f) + " has repeated vertices");
        const double area = face_area_3d(vertex(i), vertex(j), vertex(k));
        if (!(area > 0.0))
            throw ValidationError("degenerate face " + std::to_string(f) + " (zero area)");
        face_areas_(f) = area;
    }
    total_area_ = face_areas_.sum();
    for (int v = 0; v < n; ++v)
        if (!referenced[static_cast<size_t>(v)])
            throw ValidationError("vertex " + std::to_string(v) + " is not referenced by any face");

    // Directed halfedges; a duplicate means a non-manifold edge or two
    // incident faces with opposite orientation.
    std::unordered_map<uint64_t, int> halfedge_face;
    halfedge_face.reserve(static_cast<size_t>(3 * m));
    for (int f = 0; f < m; ++f) {
        for (int e = 0; e < 3; ++e) {
            const int a = faces_(f, e), b = faces_(f, (e + 1) % 3);
            if (!halfedge_face.emplace(halfedge_key(a, b), f).second)
                throw ValidationError("non-manifold or inconsistently oriented edge (" +
                                      std::to_string(a) + ", " + std::to_string(b) + ")");
        }
    }

    // Face connectivity through shared (interior) edges.
    std::vector<int> component(static_cast<size_t>(m), -1);
    std::vector<int> stack{0};
    component[0] = 0;
    while (!stack.empty()) {
        const int f = stack.back();
        stack.pop_back();
        for (int e = 0; e < 3; ++e) {
            const int a = faces_(f, e), b = faces_(f, (e + 1) % 3);
            auto it = halfedge_face.find(halfedge_key(b, a));
            if (it != halfedge_face.end() && component[static_cast<size_t>(it->second)] < 0) {
                component[static_cast<size_t>(it->second)] = 0;
                stack.push_back(it->second);
            }
        }
    }
    if (std::count(component.begin(), component.end(), -1) > 0)
        throw ValidationError("disconnected surface (multiple face components)");

    // Boundary halfedges are those whose reverse is absent; traversing them
    // keeps the adjacent face on the left.
    std::unordered_map<int, int> boundary_next;  // tail vertex -> head vertex
    int boundary_edge_count = 0;
    int loop_start = std::numeric_limits<int>::max();
    for (const auto& [key, f] : halfedge_face) {
        const int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
        if (halfedge_face.count(halfedge_key(b, a))) continue;
        if (!boundary_next.emplace(a, b).second)
            throw ValidationError("non-manifold boundary vertex " + std::to_string(a));
        ++boundary_edge_count;
        loop_start = std::min(loop_start, a);
    }
    if (boundary_edge_count == 0)
        throw ValidationError("no boundary loop (closed surface)");

    boundary_flag_.assign(static_cast<size_t>(n), 0);
    boundary_loop_.clear();
    int v = loop_start;
    do {
        boundary_loop_.push_back(v);
        boundary_flag_[static_cast<size_t>(v)] = 1;
        v = boundary_next.at(v);
    } while (v != loop_start);
    if (static_cast<int>(boundary_loop_.size()) != boundary_edge_count)
        throw ValidationError("more than one boundary loop");

    // Orientation sanity: the z-projected image area is the signed area of
    // the projected boundary polygon. Flipped (clockwise) meshes are
    // rejected rather than silently reoriented.
    double projected = 0.0;
    for (int f = 0; f < m; ++f) {
        const Vec3 p = vertex(faces_(f, 0)), q = vertex(faces_(f, 1)), r = vertex(faces_(f, 2));
        projected += signed_area_2d(p.head<2>(), q.head<2>(), r.head<2>());
    }
    if (projected < -1e-9 * total_area_)
        throw ValidationError(
            "projected boundary is clockwise; flip the face orientation "
            "(reverse the vertex order of every face)");

    int closed_faces = 0;
    for (int f = 0; f < m; ++f) {
        if (is_boundary_vertex(faces_(f, 0)) && is_boundary_vertex(faces_(f, 1)) &&
            is_boundary_vertex(faces_(f, 2)))
            ++closed_faces;
    }
    if (closed_faces > 0)
        warnings_.push_back(std::to_string(closed_faces) +
                            " face(s) have no interior vertex; results may degrade near them");
}

const std::vector<int>& boundary_loop(const Mesh& mesh) { return mesh.boundary_loop(); }

Mesh normalize_area(const Mesh& mesh) {
    const double scale = 1.0 / std::sqrt(mesh.total_area());
    return Mesh(mesh.vertices() * scale, mesh.faces());
}

void check_mapping(const Mesh& mesh, const Mapping& f) {
    if (f.rows() != mesh.vertex_count())
        throw ValidationError("mapping has " + std::to_string(f.rows()) + " rows, mesh has " +
                              std::to_string(mesh.vertex_count()) + " vertices");
    if (!f.allFinite()) throw ValidationError("mapping has non-finite entries");
}

Vec2 evaluate_mapping(const Mesh& mesh, const Mapping& f, int face, const Vec3& point) {
    check_mapping(mesh, f);
    if (face < 0 || face >= mesh.face_count())
        throw ValidationError("face index " + std::to_string(face) + " out of range");
    const int i = mesh.faces()(face, 0), j = mesh.faces()(face, 1), k = mesh.faces()(face, 2);
    const Vec3 u = mesh.vertex(j) - mesh.vertex(i);
    const Vec3 w = mesh.vertex(k) - mesh.vertex(i);
    const Vec3 r = point - mesh.vertex(i);

    // In-plane barycentric coordinates from the 2x2 normal equations.
    const double uu = u.dot(u), uw = u.dot(w), ww = w.dot(w);
    const double det = uu * ww - uw * uw;
    const double beta = (ww * u.dot(r) - uw * w.dot(r)) / det;
    const double gamma = (uu * w.dot(r) - uw * u.dot(r)) / det;
    const double alpha = 1.0 - beta - gamma;

    constexpr double kTol = 1e-9;
    for (double c : {alpha, beta, gamma}) {
        if (!(c >= -kTol && c <= 1.0 + kTol))
            throw ValidationError("point lies outside face " + std::to_string(face));
    }
    return alpha * f.row(i).transpose() + beta * f.row(j).transpose() +
           gamma * f.row(k).transpose();
}

}  // namespace sqmap
