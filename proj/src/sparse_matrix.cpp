// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "mppr/errors.hpp"

namespace mppr {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Entry> entries) {
    for (const auto& e : entries) {
        if (e.row >= rows || e.col >= cols) {
            throw IndexError(fmt::format("entry ({}, {}) outside {}x{} matrix", e.row, e.col, rows, cols));
        }
        if (!std::isfinite(e.value)) {
            throw DomainError(fmt::format("non-finite value at ({}, {})", e.row, e.col));
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m(rows, cols);
    m.col_idx_.reserve(entries.size());
    m.values_.reserve(entries.size());
    std::size_t i = 0;
    while (i < entries.size()) {
        const auto row = entries[i].row;
        const auto col = entries[i].col;
        double sum = 0.0;
        for (; i < entries.size() && entries[i].row == row && entries[i].col == col; ++i) {
            sum += entries[i].value;
        }
        if (sum != 0.0) {
            m.col_idx_.push_back(col);
            m.values_.push_back(sum);
            ++m.row_ptr_[row + 1];
        }
    }
    for (std::size_t r = 0; r < rows; ++r) {
        m.row_ptr_[r + 1] += m.row_ptr_[r];
    }
    return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    SparseMatrix m(n, n);
    m.col_idx_.resize(n);
    m.values_.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.col_idx_[i] = i;
        m.row_ptr_[i + 1] = i + 1;
    }
    return m;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense, double drop_below) {
    SparseMatrix m(static_cast<std::size_t>(dense.rows()), static_cast<std::size_t>(dense.cols()));
    for (Eigen::Index r = 0; r < dense.rows(); ++r) {
        for (Eigen::Index c = 0; c < dense.cols(); ++c) {
            const double v = dense(r, c);
            if (!std::isfinite(v)) {
                throw DomainError(fmt::format("non-finite value at ({}, {})", r, c));
            }
            if (v != 0.0 && std::abs(v) > drop_below) {
                m.col_idx_.push_back(static_cast<std::size_t>(c));
                m.values_.push_back(v);
            }
        }
        m.row_ptr_[static_cast<std::size_t>(r) + 1] = m.values_.size();
    }
    return m;
}

std::span<const std::size_t> SparseMatrix::row_cols(std::size_t row) const {
    return {col_idx_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
}

std::span<const double> SparseMatrix::row_values(std::size_t row) const {
    return {values_.data() + row_ptr_[row], row_ptr_[row + 1] - row_ptr_[row]};
}

double SparseMatrix::at(std::size_t row, std::size_t col) const {
    if (row >= rows_ || col >= cols_) {
        throw IndexError(fmt::format("index ({}, {}) outside {}x{} matrix", row, col, rows_, cols_));
    }
    const auto cols = row_cols(row);
    const auto it = std::lower_bound(cols.begin(), cols.end(), col);
    if (it == cols.end() || *it != col) {
        return 0.0;
    }
    return values_[row_ptr_[row] + static_cast<std::size_t>(it - cols.begin())];
}

bool SparseMatrix::contains(std::size_t row, std::size_t col) const {
    if (row >= rows_ || col >= cols_) {
        return false;
    }
    const auto cols = row_cols(row);
    return std::binary_search(cols.begin(), cols.end(), col);
}

std::vector<SparseMatrix::Entry> SparseMatrix::entries() const {
    std::vector<Entry> out;
    out.reserve(nnz());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            out.push_back({r, col_idx_[k], values_[k]});
        }
    }
    return out;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(cols_, rows_);
    t.col_idx_.resize(nnz());
    t.values_.resize(nnz());
    for (const auto c : col_idx_) {
        ++t.row_ptr_[c + 1];
    }
    for (std::size_t c = 0; c < cols_; ++c) {
        t.row_ptr_[c + 1] += t.row_ptr_[c];
    }
    std::vector<std::size_t> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            const auto dst = next[col_idx_[k]]++;
            t.col_idx_[dst] = r;
            t.values_[dst] = values_[k];
        }
    }
    return t;
}

SparseMatrix SparseMatrix::scaled(double factor) const {
    if (factor == 0.0) {
        return SparseMatrix(rows_, cols_);
    }
    SparseMatrix out = *this;
    for (auto& v : out.values_) {
        v *= factor;
    }
    return out;
}

DenseVector SparseMatrix::row_sums() const {
    DenseVector sums = DenseVector::Zero(static_cast<Eigen::Index>(rows_));
    for (std::size_t r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (const double v : row_values(r)) {
            s += v;
        }
        sums[static_cast<Eigen::Index>(r)] = s;
    }
    return sums;
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d = DenseMatrix::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col_idx_[k])) = values_[k];
        }
    }
    return d;
}

DenseMatrix SparseMatrix::multiply(const DenseMatrix& dense) const {
    if (static_cast<std::size_t>(dense.rows()) != cols_) {
        throw ShapeError(fmt::format("cannot multiply {}x{} sparse by {}x{} dense", rows_, cols_, dense.rows(),
                                     dense.cols()));
    }
    DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(rows_), dense.cols());
    for (std::size_t r = 0; r < rows_; ++r) {
        auto dst = out.row(static_cast<Eigen::Index>(r));
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            dst.noalias() += values_[k] * dense.row(static_cast<Eigen::Index>(col_idx_[k]));
        }
    }
    return out;
}

DenseVector SparseMatrix::multiply(const DenseVector& vec) const {
    if (static_cast<std::size_t>(vec.size()) != cols_) {
        throw ShapeError(fmt::format("cannot multiply {}x{} sparse by vector of length {}", rows_, cols_, vec.size()));
    }
    DenseVector out = DenseVector::Zero(static_cast<Eigen::Index>(rows_));
    for (std::size_t r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            s += values_[k] * vec[static_cast<Eigen::Index>(col_idx_[k])];
        }
        out[static_cast<Eigen::Index>(r)] = s;
    }
    return out;
}

bool SparseMatrix::is_symmetric(double tol) const {
    if (!is_square()) {
        return false;
    }
    const SparseMatrix t = transpose();
    if (tol == 0.0) {
        return t == *this;
    }
    const SparseMatrix diff = add(*this, 1.0, t, -1.0);
    return std::all_of(diff.values_.begin(), diff.values_.end(), [tol](double v) { return std::abs(v) <= tol; });
}

bool SparseMatrix::is_binary() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 1.0; });
}

bool SparseMatrix::is_nonnegative() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

bool SparseMatrix::has_zero_diagonal() const {
    for (std::size_t r = 0; r < std::min(rows_, cols_); ++r) {
        if (contains(r, r)) {
            return false;
        }
    }
    return true;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_ptr_ == b.row_ptr_ && a.col_idx_ == b.col_idx_ &&
           a.values_ == b.values_;
}

SparseMatrix add(const SparseMatrix& x, double a, const SparseMatrix& y, double b) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw ShapeError(fmt::format("cannot add {}x{} and {}x{}", x.rows(), x.cols(), y.rows(), y.cols()));
    }
    std::vector<SparseMatrix::Entry> entries;
    entries.reserve(x.nnz() + y.nnz());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto xc = x.row_cols(r);
        const auto xv = x.row_values(r);
        const auto yc = y.row_cols(r);
        const auto yv = y.row_values(r);
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < xc.size() || j < yc.size()) {
            if (j == yc.size() || (i < xc.size() && xc[i] < yc[j])) {
                entries.push_back({r, xc[i], a * xv[i]});
                ++i;
            } else if (i == xc.size() || yc[j] < xc[i]) {
                entries.push_back({r, yc[j], b * yv[j]});
                ++j;
            } else {
                entries.push_back({r, xc[i], a * xv[i] + b * yv[j]});
                ++i;
                ++j;
            }
        }
    }
    return SparseMatrix::from_triplets(x.rows(), x.cols(), std::move(entries));
}

SparseMatrix hadamard(const SparseMatrix& x, const SparseMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw ShapeError(fmt::format("cannot take hadamard product of {}x{} and {}x{}", x.rows(), x.cols(), y.rows(),
                                     y.cols()));
    }
    std::vector<SparseMatrix::Entry> entries;
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto xc = x.row_cols(r);
        const auto xv = x.row_values(r);
        const auto yc = y.row_cols(r);
        const auto yv = y.row_values(r);
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < xc.size() && j < yc.size()) {
            if (xc[i] < yc[j]) {
                ++i;
            } else if (yc[j] < xc[i]) {
                ++j;
            } else {
                entries.push_back({r, xc[i], xv[i] * yv[j]});
                ++i;
                ++j;
            }
        }
    }
    return SparseMatrix::from_triplets(x.rows(), x.cols(), std::move(entries));
}

SparseMatrix masked_product(const SparseMatrix& x, const SparseMatrix& y, const SparseMatrix& mask) {
    if (x.cols() != y.rows() || mask.rows() != x.rows() || mask.cols() != y.cols()) {
        throw ShapeError(fmt::format("masked product shapes {}x{} * {}x{} with mask {}x{}", x.rows(), x.cols(),
                                     y.rows(), y.cols(), mask.rows(), mask.cols()));
    }
    constexpr auto kUnmarked = static_cast<std::size_t>(-1);
    // slot[j] is the position of column j within the current mask row.
    std::vector<std::size_t> slot(y.cols(), kUnmarked);
    std::vector<double> acc;
    std::vector<SparseMatrix::Entry> entries;
    entries.reserve(mask.nnz());

    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto mcols = mask.row_cols(r);
        if (mcols.empty()) {
            continue;
        }
        acc.assign(mcols.size(), 0.0);
        for (std::size_t k = 0; k < mcols.size(); ++k) {
            slot[mcols[k]] = k;
        }
        const auto xc = x.row_cols(r);
        const auto xv = x.row_values(r);
        for (std::size_t i = 0; i < xc.size(); ++i) {
            const auto yc = y.row_cols(xc[i]);
            const auto yv = y.row_values(xc[i]);
            for (std::size_t j = 0; j < yc.size(); ++j) {
                const auto s = slot[yc[j]];
                if (s != kUnmarked) {
                    acc[s] += xv[i] * yv[j];
                }
            }
        }
        const auto mvals = mask.row_values(r);
        for (std::size_t k = 0; k < mcols.size(); ++k) {
            slot[mcols[k]] = kUnmarked;
            if (acc[k] != 0.0) {
                entries.push_back({r, mcols[k], acc[k] * mvals[k]});
            }
        }
    }
    return SparseMatrix::from_triplets(x.rows(), y.cols(), std::move(entries));
}

void write_matrix_dump(std::ostream& out, const SparseMatrix& m) {
    out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
    for (const auto& e : m.entries()) {
        out << fmt::format("{} {} {:.17g}\n", e.row, e.col, e.value);
    }
}

void write_matrix_dump(std::ostream& out, const DenseMatrix& m) {
    std::size_t nnz = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            nnz += m(r, c) != 0.0 ? 1 : 0;
        }
    }
    out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (m(r, c) != 0.0) {
                out << fmt::format("{} {} {:.17g}\n", r, c, m(r, c));
            }
        }
    }
}

SparseMatrix read_matrix_dump(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t nnz = 0;
    if (!std::getline(in, line)) {
        throw ParseError("empty matrix dump");
    }
    ++line_no;
    {
        std::istringstream header(line);
        if (!(header >> rows >> cols >> nnz)) {
            throw ParseError("expected 'rows cols nnz' header", line_no);
        }
    }
    std::vector<SparseMatrix::Entry> entries;
    entries.reserve(nnz);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        SparseMatrix::Entry e{};
        if (!(fields >> e.row >> e.col >> e.value)) {
            throw ParseError("expected 'row col value'", line_no);
        }
        entries.push_back(e);
    }
    if (entries.size() != nnz) {
        throw ParseError(fmt::format("header announces {} entries, found {}", nnz, entries.size()));
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(entries));
}

}  // namespace mppr
