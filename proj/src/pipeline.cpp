#include "sqmap/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "sqmap/linsolve.hpp"

namespace sqmap {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iterations: return "max_iterations";
        case Termination::energy_increase: return "energy_increase";
        case Termination::solver_failure: return "solver_failure";
    }
    return "unknown";
}

namespace {

// Nearest loop position to each arc-length quartile, scanned left to right
// so later corners stay strictly after earlier ones.
std::array<int, 4> auto_corner_positions(const Mesh& mesh, const std::vector<int>& loop) {
    const int len = static_cast<int>(loop.size());
    std::vector<double> arc(static_cast<size_t>(len), 0.0);
    for (int p = 1; p < len; ++p) {
        arc[static_cast<size_t>(p)] =
            arc[static_cast<size_t>(p - 1)] +
            (mesh.vertex(loop[static_cast<size_t>(p)]) - mesh.vertex(loop[static_cast<size_t>(p - 1)])).norm();
    }
    const double perimeter =
        arc[static_cast<size_t>(len - 1)] +
        (mesh.vertex(loop[0]) - mesh.vertex(loop[static_cast<size_t>(len - 1)])).norm();

    std::array<int, 4> positions{0, 0, 0, 0};
    for (int q = 1; q <= 3; ++q) {
        const double target = perimeter * q / 4.0;
        const int lo = positions[static_cast<size_t>(q - 1)] + 1;
        const int hi = len - (4 - q);  // leave room for the remaining corners
        int best = lo;
        double best_dist = std::numeric_limits<double>::infinity();
        for (int p = lo; p <= hi; ++p) {
            const double d = std::abs(arc[static_cast<size_t>(p)] - target);
            if (d < best_dist) {
                best_dist = d;
                best = p;
            }
        }
        positions[static_cast<size_t>(q)] = best;
    }
    return positions;
}

}  // namespace

BoundaryPartition partition_boundary(const Mesh& mesh,
                                     const std::optional<std::array<int, 4>>& corners) {
    BoundaryPartition part;
    part.loop = mesh.boundary_loop();
    const int len = static_cast<int>(part.loop.size());
    if (len < 4)
        throw ValidationError("boundary partition needs >= 4 boundary vertices, got " +
                              std::to_string(len));

    std::array<int, 4> positions{};
    if (corners) {
        std::unordered_map<int, int> loop_position;
        for (int p = 0; p < len; ++p) loop_position.emplace(part.loop[static_cast<size_t>(p)], p);
        for (int c = 0; c < 4; ++c) {
            const auto it = loop_position.find((*corners)[static_cast<size_t>(c)]);
            if (it == loop_position.end())
                throw ValidationError("corner vertex " +
                                      std::to_string((*corners)[static_cast<size_t>(c)]) +
                                      " is not on the boundary loop");
            positions[static_cast<size_t>(c)] = it->second;
        }
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if (positions[static_cast<size_t>(a)] == positions[static_cast<size_t>(b)])
                    throw ValidationError("duplicate corner vertex " +
                                          std::to_string((*corners)[static_cast<size_t>(a)]));
        // C1 anchors the order; the rest must follow counterclockwise
        // (increasing loop offset). Anything else is reordered.
        std::array<int, 3> offsets{};
        for (int c = 1; c < 4; ++c)
            offsets[static_cast<size_t>(c - 1)] =
                (positions[static_cast<size_t>(c)] - positions[0] + len) % len;
        if (!(offsets[0] < offsets[1] && offsets[1] < offsets[2])) {
            std::array<int, 3> order{1, 2, 3};
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return offsets[static_cast<size_t>(a - 1)] < offsets[static_cast<size_t>(b - 1)];
            });
            const std::array<int, 4> given = positions;
            for (int c = 1; c < 4; ++c)
                positions[static_cast<size_t>(c)] = given[static_cast<size_t>(order[static_cast<size_t>(c - 1)])];
            part.warnings.push_back(
                "corner vertices were not in counterclockwise boundary order; reordered");
        }
    } else {
        positions = auto_corner_positions(mesh, part.loop);
    }
    for (int c = 0; c < 4; ++c)
        part.corners[static_cast<size_t>(c)] = part.loop[static_cast<size_t>(positions[static_cast<size_t>(c)])];

    // Sides run corner to corner, both endpoints included.
    for (int s = 0; s < 4; ++s) {
        const int from = positions[static_cast<size_t>(s)];
        const int to = positions[static_cast<size_t>((s + 1) % 4)];
        std::vector<int>& side = part.sides[static_cast<size_t>(s)];
        for (int p = from;; p = (p + 1) % len) {
            side.push_back(part.loop[static_cast<size_t>(p)]);
            if (p == to) break;
        }
    }

    part.interior.reserve(static_cast<size_t>(mesh.vertex_count() - len));
    for (int v = 0; v < mesh.vertex_count(); ++v)
        if (!mesh.is_boundary_vertex(v)) part.interior.push_back(v);

    // f^1 is pinned on the left/right sides, f^2 on the bottom/top; corners
    // sit in one side of each family and end up pinned in both coordinates.
    const auto& side_y0 = part.sides[0];
    const auto& side_x1 = part.sides[1];
    const auto& side_y1 = part.sides[2];
    const auto& side_x0 = part.sides[3];

    std::vector<double> value1(static_cast<size_t>(mesh.vertex_count()),
                               std::numeric_limits<double>::quiet_NaN());
    std::vector<double> value2(static_cast<size_t>(mesh.vertex_count()),
                               std::numeric_limits<double>::quiet_NaN());
    for (int v : side_x0) value1[static_cast<size_t>(v)] = 0.0;
    for (int v : side_x1) value1[static_cast<size_t>(v)] = 1.0;
    for (int v : side_y0) value2[static_cast<size_t>(v)] = 0.0;
    for (int v : side_y1) value2[static_cast<size_t>(v)] = 1.0;

    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (std::isnan(value1[static_cast<size_t>(v)]))
            part.free1.push_back(v);
        else
            part.fixed1.push_back(v);
        if (std::isnan(value2[static_cast<size_t>(v)]))
            part.free2.push_back(v);
        else
            part.fixed2.push_back(v);
    }
    part.fixed1_values.resize(static_cast<Eigen::Index>(part.fixed1.size()));
    for (size_t p = 0; p < part.fixed1.size(); ++p)
        part.fixed1_values(static_cast<Eigen::Index>(p)) = value1[static_cast<size_t>(part.fixed1[p])];
    part.fixed2_values.resize(static_cast<Eigen::Index>(part.fixed2.size()));
    for (size_t p = 0; p < part.fixed2.size(); ++p)
        part.fixed2_values(static_cast<Eigen::Index>(p)) = value2[static_cast<size_t>(part.fixed2[p])];
    return part;
}

namespace {

Mapping solve_both_coordinates(const SparseLaplacian& laplacian, const BoundaryPartition& part,
                               const Eigen::VectorXd& fixed1_values,
                               const Eigen::VectorXd& fixed2_values) {
    ConstrainedSolver solver1(laplacian, part.free1, part.fixed1);
    Mapping f(laplacian.dimension(), 2);
    f.col(0) = solver1.solve(fixed1_values);
    if (part.free1 == part.free2) {
        // One factorization serves both coordinates (happens when no side
        // has interior vertices).
        f.col(1) = solver1.solve(fixed2_values);
    } else {
        ConstrainedSolver solver2(laplacian, part.free2, part.fixed2);
        f.col(1) = solver2.solve(fixed2_values);
    }
    return f;
}

IterationStats measure(const Mesh& mesh, const Mapping& f) {
    double stretch = 0.0, area = 0.0;
    int folds = 0;
    for (int t = 0; t < mesh.face_count(); ++t) {
        const double image = signed_area_2d(f.row(mesh.faces()(t, 0)), f.row(mesh.faces()(t, 1)),
                                            f.row(mesh.faces()(t, 2)));
        stretch += image * image / mesh.face_areas()(t);
        area += image;
        if (image <= 0.0) ++folds;
    }
    return IterationStats{stretch, stretch - area, folds};
}

}  // namespace

Mapping harmonic_initial(const Mesh& mesh, const BoundaryPartition& partition) {
    const SparseLaplacian laplacian = assemble_dirichlet(mesh);
    try {
        return solve_both_coordinates(laplacian, partition, partition.fixed1_values,
                                      partition.fixed2_values);
    } catch (const SolverError& e) {
        throw SolverError(std::string("harmonic initialization: ") + e.what());
    }
}

Mapping sem_step(const Mesh& mesh, const BoundaryPartition& partition, const Mapping& current) {
    check_mapping(mesh, current);
    const SparseLaplacian laplacian = assemble_stretch(mesh, current);

    Eigen::VectorXd fixed1_values(static_cast<Eigen::Index>(partition.fixed1.size()));
    for (size_t p = 0; p < partition.fixed1.size(); ++p)
        fixed1_values(static_cast<Eigen::Index>(p)) = current(partition.fixed1[p], 0);
    Eigen::VectorXd fixed2_values(static_cast<Eigen::Index>(partition.fixed2.size()));
    for (size_t p = 0; p < partition.fixed2.size(); ++p)
        fixed2_values(static_cast<Eigen::Index>(p)) = current(partition.fixed2[p], 1);

    return solve_both_coordinates(laplacian, partition, fixed1_values, fixed2_values);
}

SolveResult run_sem(const Mesh& mesh, const SolverConfig& config) {
    if (config.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
    if (!(config.energy_tolerance > 0.0)) throw ValidationError("energy_tolerance must be > 0");

    // Normalization is idempotent; skip the copy when already at area 1.
    const bool normalized = std::abs(mesh.total_area() - 1.0) < 1e-12;
    const Mesh scaled = normalized ? mesh : normalize_area(mesh);
    const Mesh& m = scaled;

    const BoundaryPartition partition = partition_boundary(m, config.corner_indices);

    SolveResult result;
    result.mapping = harmonic_initial(m, partition);
    IterationStats stats = measure(m, result.mapping);
    if (config.record_history) result.energy_history.push_back(stats);

    double previous_authalic = stats.authalic_energy;
    result.termination = Termination::max_iterations;
    for (int n = 1; n <= config.max_iterations; ++n) {
        Mapping next;
        try {
            next = sem_step(m, partition, result.mapping);
        } catch (const SolverError&) {
            result.termination = Termination::solver_failure;
            break;
        }
        stats = measure(m, next);
        const double decrease = previous_authalic - stats.authalic_energy;
        if (decrease <= -config.energy_tolerance) {
            // A genuine rise: keep the best-so-far iterate, discard the riser.
            // Fluctuations within the tolerance count as convergence below.
            result.termination = Termination::energy_increase;
            break;
        }
        result.mapping = std::move(next);
        result.iterations_used = n;
        if (config.record_history) result.energy_history.push_back(stats);
        if (decrease < config.energy_tolerance) {
            result.termination = Termination::converged;
            break;
        }
        previous_authalic = stats.authalic_energy;
    }
    return result;
}

}  // namespace sqmap
