#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "sqmap/errors.hpp"

namespace sqmap {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// Planar image of the vertex set; row i is f_i = (f_i^1, f_i^2).
using Mapping = Eigen::Matrix<double, Eigen::Dynamic, 2>;

// Area of the 3D triangle (p, q, r); zero for collinear input.
double face_area_3d(const Vec3& p, const Vec3& q, const Vec3& r);

// Signed area of the 2D triangle (a, b, c), positive iff (a, b, c) is
// counterclockwise. Exactly antisymmetric under swapping b and c.
double signed_area_2d(const Vec2& a, const Vec2& b, const Vec2& c);

// Immutable simplicial surface. Construction validates the whole input
// class: triangle faces with in-range, pairwise distinct vertex indices
// and positive area, edge-manifold and connected face complex, globally
// consistent orientation, exactly one boundary loop, and a boundary whose
// z-projection is not clockwise (flipped meshes are rejected, not
// repaired). Faces whose three vertices all lie on the boundary are
// allowed but reported through warnings().
class Mesh {
public:
    Mesh(Eigen::MatrixX3d vertices, Eigen::MatrixX3i faces);

    int vertex_count() const { return static_cast<int>(vertices_.rows()); }
    int face_count() const { return static_cast<int>(faces_.rows()); }

    const Eigen::MatrixX3d& vertices() const { return vertices_; }
    const Eigen::MatrixX3i& faces() const { return faces_; }

    Vec3 vertex(int i) const { return vertices_.row(i).transpose(); }

    // |tau_l| for every face, and their sum |M|.
    const Eigen::VectorXd& face_areas() const { return face_areas_; }
    double total_area() const { return total_area_; }

    // Boundary cycle ordered counterclockwise with respect to the face
    // orientation (boundary-adjacent face on the left), starting at the
    // smallest vertex index on the loop.
    const std::vector<int>& boundary_loop() const { return boundary_loop_; }
    bool is_boundary_vertex(int v) const { return boundary_flag_[static_cast<size_t>(v)] != 0; }

    // Non-fatal diagnostics collected during validation.
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    Eigen::MatrixX3d vertices_;
    Eigen::MatrixX3i faces_;
    Eigen::VectorXd face_areas_;
    double total_area_ = 0.0;
    std::vector<int> boundary_loop_;
    std::vector<char> boundary_flag_;
    std::vector<std::string> warnings_;
};

// The unique boundary cycle of the mesh (see Mesh::boundary_loop).
const std::vector<int>& boundary_loop(const Mesh& mesh);

// Uniformly rescaled copy with total area 1.
Mesh normalize_area(const Mesh& mesh);

// Throws unless f has one finite row per mesh vertex.
void check_mapping(const Mesh& mesh, const Mapping& f);

// Piecewise-affine evaluation of the mapping at a point inside the given
// face, via barycentric interpolation of the vertex images. The point must
// lie in the face up to a barycentric tolerance of 1e-9.
Vec2 evaluate_mapping(const Mesh& mesh, const Mapping& f, int face, const Vec3& point);

}  // namespace sqmap
