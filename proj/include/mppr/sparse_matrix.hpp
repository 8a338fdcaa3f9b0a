// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mppr {

using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using DenseVector = Eigen::VectorXd;

/// Compressed sparse row matrix of finite reals.
///
/// Entries within a row are sorted by column, there are no duplicate
/// (row, col) pairs and no explicitly stored zeros. Instances are immutable
/// once built; every operation returns a new matrix.
class SparseMatrix {
public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        double value;
    };

    SparseMatrix() = default;

    /// All-zero matrix of the given shape.
    SparseMatrix(std::size_t rows, std::size_t cols);

    /// Builds a matrix from unordered triplets. Duplicates are summed and
    /// resulting zeros dropped. Throws IndexError for out-of-range
    /// coordinates and DomainError for non-finite values.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Entry> entries);

    static SparseMatrix identity(std::size_t n);

    /// Keeps every entry with |value| > drop_below.
    static SparseMatrix from_dense(const DenseMatrix& dense, double drop_below = 0.0);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
    std::span<const std::size_t> col_indices() const noexcept { return col_idx_; }
    std::span<const double> values() const noexcept { return values_; }

    std::span<const std::size_t> row_cols(std::size_t row) const;
    std::span<const double> row_values(std::size_t row) const;

    /// Value at (row, col); zero when not stored.
    double at(std::size_t row, std::size_t col) const;
    bool contains(std::size_t row, std::size_t col) const;

    std::vector<Entry> entries() const;

    SparseMatrix transpose() const;
    SparseMatrix scaled(double factor) const;
    DenseVector row_sums() const;
    DenseMatrix to_dense() const;

    /// Sparse times dense.
    DenseMatrix multiply(const DenseMatrix& dense) const;
    DenseVector multiply(const DenseVector& vec) const;

    bool is_symmetric(double tol = 0.0) const;
    bool is_binary() const;
    bool is_nonnegative() const;
    bool has_zero_diagonal() const;

    /// Structural and bitwise value equality.
    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
};

/// a * x + b * y over the union of both patterns. Resulting zeros are dropped.
SparseMatrix add(const SparseMatrix& x, double a, const SparseMatrix& y, double b);

/// Entrywise product; the pattern is the intersection.
SparseMatrix hadamard(const SparseMatrix& x, const SparseMatrix& y);

/// (x * y) restricted to the pattern of `mask` and multiplied entrywise by
/// the mask values. Only entries inside the mask pattern are accumulated;
/// the full product is never formed.
SparseMatrix masked_product(const SparseMatrix& x, const SparseMatrix& y, const SparseMatrix& mask);

/// Text dump: "rows cols nnz" header then one "row col value" line per
/// entry, values printed with 17 significant digits.
void write_matrix_dump(std::ostream& out, const SparseMatrix& m);
void write_matrix_dump(std::ostream& out, const DenseMatrix& m);
SparseMatrix read_matrix_dump(std::istream& in);

}  // namespace mppr
