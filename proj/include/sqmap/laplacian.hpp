#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <iosfwd>

#include "sqmap/mesh.hpp"

namespace sqmap {

enum class LaplacianKind { Dirichlet, Stretch };

// Symmetric zero-row-sum weighted Laplacian with nonzeros confined to the
// vertex adjacency plus the diagonal. Diagonals carry the positive sign, so
// E = 1/2 f' L f for both kinds.
struct SparseLaplacian {
    LaplacianKind kind;
    Eigen::SparseMatrix<double> matrix;

    int dimension() const { return static_cast<int>(matrix.rows()); }
};

// Cotangent Laplacian L_D; off-diagonal (i, j) accumulates
// -1/2 cot(theta_ij^k) over the faces [v_i, v_j, v_k], with the angle
// measured on the surface.
SparseLaplacian assemble_dirichlet(const Mesh& mesh);

// Stretch Laplacian L_S(f), assembled from the division-free per-face dot
// product form: the pair (a, b) opposite vertex c contributes
// -(f_a - f_c)'(f_b - f_c) / (4 |tau|). Well-defined for folded or
// collapsed image triangles.
SparseLaplacian assemble_stretch(const Mesh& mesh, const Mapping& f);

// The 3x3 contribution of one face to L_S(f); symmetric with zero row sums.
Eigen::Matrix3d local_stretch_matrix(const std::array<Vec3, 3>& face_vertices,
                                     const std::array<Vec2, 3>& face_images);

// MatrixMarket coordinate text (symmetric, lower triangle) for inspection.
void write_matrix_market(const SparseLaplacian& laplacian, std::ostream& out);

}  // namespace sqmap
