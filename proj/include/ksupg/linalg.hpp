#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ksupg/sparse_matrix.hpp"

namespace ksupg {

using Vector = std::vector<double>;

Vector spmv(const CsrMatrix& A, std::span<const double> x);
void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

struct LinearSolveResult {
    Vector x;
    std::size_t iterations = 0;
    double residual = 0.0;  // ‖b − A·x‖₂ / ‖b‖₂
    bool converged = false;
    bool breakdown = false;
};

struct BicgstabOptions {
    double tol = 1e-10;
    std::size_t maxit = 1000;
    bool jacobi = false;
};

/// Unpreconditioned (or Jacobi-preconditioned) BiCGSTAB. On a rho or omega breakdown
/// (|.| < 1e-30) it restarts once from the current iterate, then gives up with breakdown set.
/// Failure never throws; the best iterate is returned with the flags set.
LinearSolveResult bicgstab(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                           const BicgstabOptions& options = {});

/// Small dense nodal coefficient matrix (m ≤ 4, no heap allocation).
using Block = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

/// Expands a scalar n×n matrix into the (n·m)×(n·m) system whose (i, j) block is A(i, j)·B_j.
/// With no blocks, B_j = I_m (the Kronecker product A ⊗ I_m).
CsrMatrix block_expand(const CsrMatrix& A, std::size_t m, std::span<const Block> blocks = {});

/// One term factor · Σ_j row_scale_i · S(i, j) · B_j of a block operator.
struct BlockTerm {
    const CsrMatrix* scalar = nullptr;
    double factor = 1.0;
    std::span<const Block> blocks;          // per column node; empty means identity
    std::span<const double> row_scale;      // per row node; empty means 1
};

/// Sum of block terms whose scalar matrices share one sparsity pattern, built in a single pass.
/// Equal to adding the block_expand of each (row-scaled) term.
CsrMatrix block_assemble(std::size_t m, std::span<const BlockTerm> terms);

}  // namespace ksupg
