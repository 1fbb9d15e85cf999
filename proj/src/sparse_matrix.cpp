#include "ksupg/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "ksupg/error.hpp"

namespace ksupg {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> offsets,
                     std::vector<std::size_t> columns, std::vector<double> values)
    : rows_(rows), cols_(cols), offsets_(std::move(offsets)), columns_(std::move(columns)),
      values_(std::move(values)) {
    require(offsets_.size() == rows_ + 1 && offsets_.front() == 0 && offsets_.back() == columns_.size() &&
                columns_.size() == values_.size(),
            ErrorCode::DimensionMismatch, "inconsistent CSR arrays");
    for (std::size_t i = 0; i < rows_; ++i) {
        require(offsets_[i] <= offsets_[i + 1], ErrorCode::InvalidArgument, "CSR offsets must be monotone");
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            require(columns_[k] < cols_, ErrorCode::DimensionMismatch, "CSR column out of range");
            require(k == offsets_[i] || columns_[k] > columns_[k - 1], ErrorCode::InvalidArgument,
                    "CSR columns must be strictly increasing within a row");
        }
    }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols, std::span<const Triplet> entries) {
    std::vector<Triplet> sorted(entries.begin(), entries.end());
    for (const auto& t : sorted)
        require(t.row < rows && t.col < cols, ErrorCode::DimensionMismatch, "triplet outside matrix");
    std::sort(sorted.begin(), sorted.end(),
              [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    std::vector<std::size_t> offsets(rows + 1, 0), columns;
    std::vector<double> values;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (k > 0 && sorted[k].row == sorted[k - 1].row && sorted[k].col == sorted[k - 1].col) {
            values.back() += sorted[k].value;
            continue;
        }
        columns.push_back(sorted[k].col);
        values.push_back(sorted[k].value);
        ++offsets[sorted[k].row + 1];
    }
    for (std::size_t i = 0; i < rows; ++i) offsets[i + 1] += offsets[i];
    return CsrMatrix(rows, cols, std::move(offsets), std::move(columns), std::move(values));
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
    std::vector<std::size_t> offsets(n + 1), columns(n);
    for (std::size_t i = 0; i < n; ++i) {
        offsets[i + 1] = i + 1;
        columns[i] = i;
    }
    return CsrMatrix(n, n, std::move(offsets), std::move(columns), std::vector<double>(n, 1.0));
}

CsrMatrix CsrMatrix::from_dense(const Eigen::MatrixXd& dense, double drop_tol) {
    std::vector<Triplet> entries;
    for (Eigen::Index i = 0; i < dense.rows(); ++i)
        for (Eigen::Index j = 0; j < dense.cols(); ++j)
            if (std::abs(dense(i, j)) > drop_tol)
                entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), dense(i, j)});
    return from_triplets(static_cast<std::size_t>(dense.rows()), static_cast<std::size_t>(dense.cols()), entries);
}

std::size_t CsrMatrix::nnz() const {
    return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

std::size_t CsrMatrix::find(std::size_t i, std::size_t j) const {
    if (i >= rows_) return npos;
    auto first = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
    auto last = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
    auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return npos;
    return static_cast<std::size_t>(it - columns_.begin());
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
    std::size_t k = find(i, j);
    return k == npos ? 0.0 : values_[k];
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(std::min(rows_, cols_), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
    return d;
}

void CsrMatrix::replace_row_with_identity(std::size_t i, double diag) {
    std::size_t k = find(i, i);
    require(k != npos, ErrorCode::InvalidArgument, "diagonal entry missing from pattern");
    std::fill(values_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              values_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]), 0.0);
    values_[k] = diag;
}

void CsrMatrix::scale(double factor) {
    for (double& v : values_) v *= factor;
}

bool CsrMatrix::same_pattern(const CsrMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && offsets_ == other.offsets_ && columns_ == other.columns_;
}

void CsrMatrix::add_same_pattern(const CsrMatrix& other, double factor) {
    require(same_pattern(other), ErrorCode::DimensionMismatch, "matrices do not share a sparsity pattern");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += factor * other.values_[k];
}

CsrMatrix CsrMatrix::transpose() const {
    std::vector<std::size_t> offsets(cols_ + 1, 0), columns(values_.size());
    std::vector<double> values(values_.size());
    for (std::size_t c : columns_) ++offsets[c + 1];
    for (std::size_t j = 0; j < cols_; ++j) offsets[j + 1] += offsets[j];
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            std::size_t dst = cursor[columns_[k]]++;
            columns[dst] = i;
            values[dst] = values_[k];
        }
    return CsrMatrix(cols_, rows_, std::move(offsets), std::move(columns), std::move(values));
}

bool CsrMatrix::is_symmetric(double tol) const {
    if (rows_ != cols_) return false;
    double scale = 0.0;
    for (double v : values_) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
            if (std::abs(values_[k] - at(columns_[k], i)) > tol * std::max(scale, 1e-300)) return false;
    return true;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
            dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(columns_[k])) += values_[k];
    return dense;
}

Eigen::SparseMatrix<double> CsrMatrix::to_eigen() const {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(values_.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k)
            entries.emplace_back(static_cast<int>(i), static_cast<int>(columns_[k]), values_[k]);
    Eigen::SparseMatrix<double> out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

}  // namespace ksupg
