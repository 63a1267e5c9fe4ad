#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sqmap/energy.hpp"
#include "sqmap/mesh.hpp"

namespace sqmap {

// The boundary loop split into four corner-delimited sides mapped to the
// unit square's sides: Y0 (bottom, f^2 = 0), X1 (right, f^1 = 1),
// Y1 (top, f^2 = 1), X0 (left, f^1 = 0). Sides run corner to corner and
// include both endpoint corners, so every corner is fixed in both
// coordinates; a side-interior vertex is fixed in one coordinate and
// slides in the other.
struct BoundaryPartition {
    std::vector<int> loop;
    std::vector<int> interior;
    std::array<int, 4> corners;            // C1..C4 -> (0,0), (1,0), (1,1), (0,1)
    std::array<std::vector<int>, 4> sides; // Y0, X1, Y1, X0

    // Unknown/constrained index sets per coordinate, ascending, and the
    // square-shaped constraint values aligned with the fixed sets.
    std::vector<int> free1, fixed1, free2, fixed2;
    Eigen::VectorXd fixed1_values, fixed2_values;

    std::vector<std::string> warnings;
};

struct SolverConfig {
    int max_iterations = 50;
    // Stop once the per-iteration authalic energy decrease falls below this.
    // The minimizer is not unique (any area-preserving mapping attains the
    // bound), so the iteration creeps along the minimizer set with per-step
    // decreases that stay around 1e-7 for a long time on curved inputs;
    // 1e-6 stops once the energy has flattened out rather than chasing the
    // creep.
    double energy_tolerance = 1e-6;
    std::optional<std::array<int, 4>> corner_indices;
    bool record_history = true;
};

struct IterationStats {
    double stretch_energy;
    double authalic_energy;
    int fold_count;
};

enum class Termination { converged, max_iterations, energy_increase, solver_failure };

const char* to_string(Termination t);

// energy_history[0] describes the harmonic initial mapping; one entry is
// appended per accepted stretch iteration, so with record_history on its
// length is iterations_used + 1.
struct SolveResult {
    Mapping mapping;
    int iterations_used = 0;
    std::vector<IterationStats> energy_history;
    Termination termination = Termination::max_iterations;
};

// Splits the boundary at the given corners (counterclockwise starting from
// C1; a clockwise or scrambled ordering is reordered with a warning). When
// corners are absent, C1 is the loop start and the other three are the
// loop vertices nearest to 1/4, 1/2 and 3/4 of the cumulative boundary arc
// length, ties broken toward the lower loop position.
BoundaryPartition partition_boundary(const Mesh& mesh,
                                     const std::optional<std::array<int, 4>>& corners = {});

// Harmonic mapping under the square-shaped boundary constraints: solves
// L_D restricted to each coordinate's free set.
Mapping harmonic_initial(const Mesh& mesh, const BoundaryPartition& partition);

// One fixed-point iteration: assembles L_S(current) once and solves the
// constrained system per coordinate; fixed entries are copied forward
// bit-identically.
Mapping sem_step(const Mesh& mesh, const BoundaryPartition& partition, const Mapping& current);

// Full stretch-energy-minimization pipeline: normalize (idempotent),
// partition, harmonic initialization, then sem_step until the authalic
// energy decrease drops below the tolerance, the energy rises by more than
// the tolerance (the previous iterate is returned), the iteration budget
// runs out, or a solve fails mid-loop (the last good iterate is returned).
SolveResult run_sem(const Mesh& mesh, const SolverConfig& config = {});

}  // namespace sqmap
