#pragma once

#include <Eigen/Core>

#include "sqmap/laplacian.hpp"
#include "sqmap/mesh.hpp"

namespace sqmap {

// Row l holds (dE_S/df_l^1, dE_S/df_l^2). Rows of fixed vertices are
// computed too; projection is the pipeline's job.
using GradientField = Eigen::Matrix<double, Eigen::Dynamic, 2>;

// Stretch energy evaluated through both equivalent routes, image area and
// authalic energy. The two stretch values agree up to rounding; the
// geometric form is the canonical one downstream.
struct EnergyBreakdown {
    double stretch_quadratic;  // 1/2 trace(f' L_S(f) f)
    double stretch_geometric;  // sum over faces of |f(tau)|^2 / |tau|
    double image_area;         // sum of signed image areas
    double authalic;           // stretch_geometric - image_area
};

EnergyBreakdown stretch_energy(const Mesh& mesh, const Mapping& f);

// Single-pass evaluations used in the iteration loop.
double stretch_energy_geometric(const Mesh& mesh, const Mapping& f);
double image_area(const Mesh& mesh, const Mapping& f);
double authalic_energy(const Mesh& mesh, const Mapping& f);

// Dirichlet energy 1/2 (f^1' L_D f^1 + f^2' L_D f^2).
double dirichlet_energy(const Mesh& mesh, const Mapping& f);

// Gradient of the stretch energy, 2 L_S(f) f columnwise.
GradientField stretch_gradient(const Mesh& mesh, const Mapping& f);

// The same product L_S(f) f accumulated face by face without assembling
// the matrix: per face [v_i, v_j, v_k], column 1 receives
// |f(tau)|/(2|tau|) (f_j^2 - f_k^2) at row i (cyclically), column 2 the
// matching x-differences with opposite sign. Equal to L_S(f) f up to
// rounding; kept separate so the identity can be checked.
GradientField stretch_gradient_halves(const Mesh& mesh, const Mapping& f);

// Central finite differences of the geometric stretch energy, with
// per-coordinate step = step_scale * max(1, |f_l^s|).
GradientField gradient_fd_oracle(const Mesh& mesh, const Mapping& f, double step_scale = 1e-6);

}  // namespace sqmap
