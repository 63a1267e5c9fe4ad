#include "sqmap/laplacian.hpp"

#include <Eigen/Geometry>

#include <cstdio>
#include <ostream>
#include <vector>

namespace sqmap {

namespace {

using Triplet = Eigen::Triplet<double>;

// One unordered pair per face: off-diagonal twice, both diagonals once.
void add_pair(std::vector<Triplet>& triplets, int a, int b, double weight) {
    triplets.emplace_back(a, b, -weight);
    triplets.emplace_back(b, a, -weight);
    triplets.emplace_back(a, a, weight);
    triplets.emplace_back(b, b, weight);
}

}  // namespace

SparseLaplacian assemble_dirichlet(const Mesh& mesh) {
    const int n = mesh.vertex_count();
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<size_t>(12 * mesh.face_count()));
    for (int f = 0; f < mesh.face_count(); ++f) {
        const int i = mesh.faces()(f, 0), j = mesh.faces()(f, 1), k = mesh.faces()(f, 2);
        const Vec3 pi = mesh.vertex(i), pj = mesh.vertex(j), pk = mesh.vertex(k);
        // cot of the angle at c, between the edges toward a and b.
        auto half_cot = [f](const Vec3& c, const Vec3& a, const Vec3& b) {
            const Vec3 u = a - c, w = b - c;
            const double cross = u.cross(w).norm();
            if (!(cross > 0.0))
                throw ValidationError("degenerate face " + std::to_string(f) +
                                      " in cotangent assembly");
            return 0.5 * u.dot(w) / cross;
        };
        add_pair(triplets, i, j, half_cot(pk, pi, pj));
        add_pair(triplets, j, k, half_cot(pi, pj, pk));
        add_pair(triplets, k, i, half_cot(pj, pk, pi));
    }
    SparseLaplacian result{LaplacianKind::Dirichlet, Eigen::SparseMatrix<double>(n, n)};
    result.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return result;
}

SparseLaplacian assemble_stretch(const Mesh& mesh, const Mapping& f) {
    check_mapping(mesh, f);
    const int n = mesh.vertex_count();
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<size_t>(12 * mesh.face_count()));
    for (int t = 0; t < mesh.face_count(); ++t) {
        const int i = mesh.faces()(t, 0), j = mesh.faces()(t, 1), k = mesh.faces()(t, 2);
        const double inv4a = 1.0 / (4.0 * mesh.face_areas()(t));
        const Vec2 gi = f.row(i), gj = f.row(j), gk = f.row(k);
        add_pair(triplets, i, j, (gi - gk).dot(gj - gk) * inv4a);
        add_pair(triplets, j, k, (gj - gi).dot(gk - gi) * inv4a);
        add_pair(triplets, k, i, (gk - gj).dot(gi - gj) * inv4a);
    }
    SparseLaplacian result{LaplacianKind::Stretch, Eigen::SparseMatrix<double>(n, n)};
    result.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return result;
}

Eigen::Matrix3d local_stretch_matrix(const std::array<Vec3, 3>& face_vertices,
                                     const std::array<Vec2, 3>& face_images) {
    const double area = face_area_3d(face_vertices[0], face_vertices[1], face_vertices[2]);
    if (!(area > 0.0)) throw ValidationError("degenerate face in local stretch matrix");
    const double inv4a = 1.0 / (4.0 * area);
    const Vec2& gi = face_images[0];
    const Vec2& gj = face_images[1];
    const Vec2& gk = face_images[2];
    const double wij = (gi - gk).dot(gj - gk) * inv4a;
    const double wjk = (gj - gi).dot(gk - gi) * inv4a;
    const double wki = (gk - gj).dot(gi - gj) * inv4a;
    Eigen::Matrix3d local;
    local << wij + wki, -wij, -wki,
             -wij, wij + wjk, -wjk,
             -wki, -wjk, wjk + wki;
    return local;
}

void write_matrix_market(const SparseLaplacian& laplacian, std::ostream& out) {
    const auto& m = laplacian.matrix;
    int nnz_lower = 0;
    for (int c = 0; c < m.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it)
            if (it.row() >= it.col()) ++nnz_lower;
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << m.rows() << ' ' << m.cols() << ' ' << nnz_lower << '\n';
    char buf[64];
    for (int c = 0; c < m.outerSize(); ++c) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, c); it; ++it) {
            if (it.row() < it.col()) continue;
            std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row()) + 1,
                          static_cast<long>(it.col()) + 1, it.value());
            out << buf;
        }
    }
}

}  // namespace sqmap
