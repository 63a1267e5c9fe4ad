#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCholesky>

#include <memory>
#include <vector>

#include "sqmap/laplacian.hpp"

namespace sqmap {

// The constrained system L_{I,I} x_I = -L_{I,B} x_B with prescribed x_B.
struct ConstrainedSystem {
    SparseLaplacian laplacian;
    std::vector<int> free_indices;
    std::vector<int> fixed_indices;
    Eigen::VectorXd fixed_values;
};

// Extracts and factors L_{I,I} once; solve() can then be reused across
// right-hand sides built from different fixed values. Tries a sparse LDLT
// first and falls back to diagonally preconditioned BiCGSTAB (tolerance
// 1e-12, at most 10 |I| iterations) when the factorization breaks down or
// leaves a relative residual above 1e-10. A relative residual above 1e-6
// after the fallback is a SolverError.
class ConstrainedSolver {
public:
    ConstrainedSolver(const SparseLaplacian& laplacian, std::vector<int> free_indices,
                      std::vector<int> fixed_indices);

    // Full-length solution; fixed entries are the given values verbatim.
    Eigen::VectorXd solve(const Eigen::VectorXd& fixed_values) const;

    const std::vector<int>& free_indices() const { return free_; }
    const std::vector<int>& fixed_indices() const { return fixed_; }

private:
    int dimension_;
    std::vector<int> free_;
    std::vector<int> fixed_;
    Eigen::SparseMatrix<double> free_block_;      // L_{I,I}
    Eigen::SparseMatrix<double> coupling_block_;  // L_{I,B}
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factorization_;
    bool factorized_ = false;
};

// One-shot convenience around ConstrainedSolver.
Eigen::VectorXd solve_constrained(const ConstrainedSystem& system);

}  // namespace sqmap
