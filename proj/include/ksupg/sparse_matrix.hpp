#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ksupg {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Compressed-row matrix with strictly increasing column indices in every row.
/// The sparsity pattern is fixed once built; values may be overwritten in place.
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> offsets,
              std::vector<std::size_t> columns, std::vector<double> values);

    /// Duplicates are summed. Explicit zeros are kept in the pattern.
    static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::span<const Triplet> entries);
    static CsrMatrix identity(std::size_t n);
    static CsrMatrix from_dense(const Eigen::MatrixXd& dense, double drop_tol = 0.0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t stored() const { return values_.size(); }
    /// Number of stored entries whose value is nonzero.
    std::size_t nnz() const;

    const std::vector<std::size_t>& offsets() const { return offsets_; }
    const std::vector<std::size_t>& columns() const { return columns_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Position of (i, j) in values(), or npos when not in the pattern.
    std::size_t find(std::size_t i, std::size_t j) const;
    double at(std::size_t i, std::size_t j) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::vector<double> diagonal() const;
    /// Zeroes row i and puts `diag` on its diagonal (which must be in the pattern).
    void replace_row_with_identity(std::size_t i, double diag = 1.0);
    void scale(double factor);
    /// this += factor * other; both matrices must share the same pattern.
    void add_same_pattern(const CsrMatrix& other, double factor = 1.0);
    bool same_pattern(const CsrMatrix& other) const;

    CsrMatrix transpose() const;
    bool is_symmetric(double tol = 1e-12) const;
    Eigen::MatrixXd to_dense() const;
    Eigen::SparseMatrix<double> to_eigen() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::size_t> columns_;
    std::vector<double> values_;
};

}  // namespace ksupg
