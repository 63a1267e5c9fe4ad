#include "sqmap/energy.hpp"

#include <algorithm>
#include <cmath>

namespace sqmap {

namespace {

double signed_image_area(const Mesh& mesh, const Mapping& f, int face) {
    return signed_area_2d(f.row(mesh.faces()(face, 0)), f.row(mesh.faces()(face, 1)),
                          f.row(mesh.faces()(face, 2)));
}

}  // namespace

double stretch_energy_geometric(const Mesh& mesh, const Mapping& f) {
    check_mapping(mesh, f);
    double energy = 0.0;
    for (int t = 0; t < mesh.face_count(); ++t) {
        const double image = signed_image_area(mesh, f, t);
        energy += image * image / mesh.face_areas()(t);
    }
    return energy;
}

double image_area(const Mesh& mesh, const Mapping& f) {
    check_mapping(mesh, f);
    double area = 0.0;
    for (int t = 0; t < mesh.face_count(); ++t) area += signed_image_area(mesh, f, t);
    return area;
}

double authalic_energy(const Mesh& mesh, const Mapping& f) {
    return stretch_energy_geometric(mesh, f) - image_area(mesh, f);
}

EnergyBreakdown stretch_energy(const Mesh& mesh, const Mapping& f) {
    const SparseLaplacian laplacian = assemble_stretch(mesh, f);
    const double quadratic =
        0.5 * (f.col(0).dot(laplacian.matrix * f.col(0)) + f.col(1).dot(laplacian.matrix * f.col(1)));
    const double geometric = stretch_energy_geometric(mesh, f);
    const double area = image_area(mesh, f);
    return EnergyBreakdown{quadratic, geometric, area, geometric - area};
}

double dirichlet_energy(const Mesh& mesh, const Mapping& f) {
    check_mapping(mesh, f);
    const SparseLaplacian laplacian = assemble_dirichlet(mesh);
    return 0.5 *
           (f.col(0).dot(laplacian.matrix * f.col(0)) + f.col(1).dot(laplacian.matrix * f.col(1)));
}

GradientField stretch_gradient(const Mesh& mesh, const Mapping& f) {
    const SparseLaplacian laplacian = assemble_stretch(mesh, f);
    GradientField grad(mesh.vertex_count(), 2);
    grad.col(0) = 2.0 * (laplacian.matrix * f.col(0));
    grad.col(1) = 2.0 * (laplacian.matrix * f.col(1));
    return grad;
}

GradientField stretch_gradient_halves(const Mesh& mesh, const Mapping& f) {
    check_mapping(mesh, f);
    GradientField halves = GradientField::Zero(mesh.vertex_count(), 2);
    for (int t = 0; t < mesh.face_count(); ++t) {
        const int i = mesh.faces()(t, 0), j = mesh.faces()(t, 1), k = mesh.faces()(t, 2);
        const double ratio = signed_image_area(mesh, f, t) / (2.0 * mesh.face_areas()(t));
        halves(i, 0) += ratio * (f(j, 1) - f(k, 1));
        halves(j, 0) += ratio * (f(k, 1) - f(i, 1));
        halves(k, 0) += ratio * (f(i, 1) - f(j, 1));
        halves(i, 1) += ratio * (f(k, 0) - f(j, 0));
        halves(j, 1) += ratio * (f(i, 0) - f(k, 0));
        halves(k, 1) += ratio * (f(j, 0) - f(i, 0));
    }
    return halves;
}

GradientField gradient_fd_oracle(const Mesh& mesh, const Mapping& f, double step_scale) {
    check_mapping(mesh, f);
    if (!(step_scale > 0.0)) throw ValidationError("finite-difference step must be positive");
    Mapping probe = f;
    GradientField grad(mesh.vertex_count(), 2);
    for (int l = 0; l < mesh.vertex_count(); ++l) {
        for (int s = 0; s < 2; ++s) {
            const double center = f(l, s);
            const double h = step_scale * std::max(1.0, std::abs(center));
            probe(l, s) = center + h;
            const double forward = stretch_energy_geometric(mesh, probe);
            probe(l, s) = center - h;
            const double backward = stretch_energy_geometric(mesh, probe);
            probe(l, s) = center;
            grad(l, s) = (forward - backward) / (2.0 * h);
        }
    }
    return grad;
}

}  // namespace sqmap
