#include "sqmap/linsolve.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sqmap {

namespace {

void check_partition(int dimension, const std::vector<int>& free_indices,
                     const std::vector<int>& fixed_indices) {
    std::vector<char> seen(static_cast<size_t>(dimension), 0);
    for (const auto* set : {&free_indices, &fixed_indices}) {
        for (int idx : *set) {
            if (idx < 0 || idx >= dimension)
                throw ValidationError("constrained system index " + std::to_string(idx) +
                                      " out of range");
            if (seen[static_cast<size_t>(idx)]++)
                throw ValidationError("constrained system index " + std::to_string(idx) +
                                      " appears twice");
        }
    }
    if (free_indices.size() + fixed_indices.size() != static_cast<size_t>(dimension))
        throw ValidationError("free and fixed index sets do not cover the system");
}

}  // namespace

ConstrainedSolver::ConstrainedSolver(const SparseLaplacian& laplacian,
                                     std::vector<int> free_indices, std::vector<int> fixed_indices)
    : dimension_(laplacian.dimension()),
      free_(std::move(free_indices)),
      fixed_(std::move(fixed_indices)) {
    check_partition(dimension_, free_, fixed_);

    // Positions within the free/fixed orderings; -1 marks the other set.
    std::vector<int> free_pos(static_cast<size_t>(dimension_), -1);
    std::vector<int> fixed_pos(static_cast<size_t>(dimension_), -1);
    for (size_t p = 0; p < free_.size(); ++p) free_pos[static_cast<size_t>(free_[p])] = static_cast<int>(p);
    for (size_t p = 0; p < fixed_.size(); ++p) fixed_pos[static_cast<size_t>(fixed_[p])] = static_cast<int>(p);

    std::vector<Eigen::Triplet<double>> ii, ib;
    for (int c = 0; c < laplacian.matrix.outerSize(); ++c) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(laplacian.matrix, c); it; ++it) {
            const int rp = free_pos[static_cast<size_t>(it.row())];
            if (rp < 0) continue;
            const int cp = free_pos[static_cast<size_t>(it.col())];
            if (cp >= 0)
                ii.emplace_back(rp, cp, it.value());
            else
                ib.emplace_back(rp, fixed_pos[static_cast<size_t>(it.col())], it.value());
        }
    }
    free_block_.resize(static_cast<Eigen::Index>(free_.size()), static_cast<Eigen::Index>(free_.size()));
    free_block_.setFromTriplets(ii.begin(), ii.end());
    coupling_block_.resize(static_cast<Eigen::Index>(free_.size()),
                           static_cast<Eigen::Index>(fixed_.size()));
    coupling_block_.setFromTriplets(ib.begin(), ib.end());

    if (!free_.empty()) {
        factorization_.compute(free_block_);
        factorized_ = factorization_.info() == Eigen::Success;
    }
}

Eigen::VectorXd ConstrainedSolver::solve(const Eigen::VectorXd& fixed_values) const {
    if (fixed_values.size() != static_cast<Eigen::Index>(fixed_.size()))
        throw ValidationError("fixed value count does not match the fixed index set");
    if (!fixed_values.allFinite()) throw ValidationError("non-finite fixed value");

    Eigen::VectorXd full(dimension_);
    for (size_t p = 0; p < fixed_.size(); ++p)
        full(fixed_[p]) = fixed_values(static_cast<Eigen::Index>(p));
    if (free_.empty()) return full;

    const Eigen::VectorXd rhs = -(coupling_block_ * fixed_values);
    const double rhs_scale = std::max(1.0, rhs.norm());
    auto residual_of = [&](const Eigen::VectorXd& x) {
        return (free_block_ * x - rhs).norm() / rhs_scale;
    };

    Eigen::VectorXd x;
    double residual = std::numeric_limits<double>::infinity();
    if (factorized_) {
        x = factorization_.solve(rhs);
        if (factorization_.info() == Eigen::Success && x.allFinite()) residual = residual_of(x);
    }
    if (residual >= 1e-10) {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> krylov;
        krylov.setTolerance(1e-12);
        krylov.setMaxIterations(10 * static_cast<Eigen::Index>(free_.size()));
        krylov.compute(free_block_);
        Eigen::VectorXd y = krylov.solve(rhs);
        if (y.allFinite()) {
            const double fallback_residual = residual_of(y);
            if (fallback_residual < residual) {
                x = y;
                residual = fallback_residual;
            }
        }
        if (residual > 1e-6)
            throw SolverError("constrained system is singular or too ill-conditioned "
                              "(relative residual " +
                              std::to_string(residual) + ")");
    }
    for (size_t p = 0; p < free_.size(); ++p) full(free_[p]) = x(static_cast<Eigen::Index>(p));
    return full;
}

Eigen::VectorXd solve_constrained(const ConstrainedSystem& system) {
    ConstrainedSolver solver(system.laplacian, system.free_indices, system.fixed_indices);
    return solver.solve(system.fixed_values);
}

}  // namespace sqmap
