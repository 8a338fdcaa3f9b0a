// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include <sstream>

#include "mppr/errors.hpp"
#include "mppr/sparse_matrix.hpp"

using mppr::DenseMatrix;
using mppr::SparseMatrix;

namespace {

SparseMatrix random_sparse(std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<SparseMatrix::Entry> entries;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (unit(rng) < density) {
                entries.push_back({r, c, std::floor(unit(rng) * 5.0) + 1.0});
            }
        }
    }
    return SparseMatrix::from_triplets(rows, cols, std::move(entries));
}

}  // namespace

TEST_CASE("from_triplets sums duplicates and drops zeros") {
    const auto m = SparseMatrix::from_triplets(2, 3, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 2, 4.0}, {1, 0, 1.0}, {1, 0, -1.0}});
    CHECK(m.nnz() == 2);
    CHECK(m.at(0, 1) == 3.0);
    CHECK(m.at(1, 2) == 4.0);
    CHECK_FALSE(m.contains(1, 0));
    CHECK(m.at(1, 0) == 0.0);
}

TEST_CASE("from_triplets validates coordinates and values") {
    CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), mppr::IndexError);
    CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{0, 0, std::nan("")}}), mppr::DomainError);
}

TEST_CASE("row access is sorted by column") {
    const auto m = SparseMatrix::from_triplets(1, 5, {{0, 4, 1.0}, {0, 0, 2.0}, {0, 2, 3.0}});
    const auto cols = m.row_cols(0);
    REQUIRE(cols.size() == 3);
    CHECK(cols[0] == 0);
    CHECK(cols[1] == 2);
    CHECK(cols[2] == 4);
}

TEST_CASE("dense round trip and transpose") {
    const auto m = random_sparse(7, 5, 0.3, 3);
    CHECK(SparseMatrix::from_dense(m.to_dense()) == m);
    CHECK(m.transpose().to_dense() == DenseMatrix(m.to_dense().transpose()));
    CHECK(m.transpose().transpose() == m);
}

TEST_CASE("multiply matches dense arithmetic") {
    const auto m = random_sparse(6, 4, 0.4, 5);
    DenseMatrix h = DenseMatrix::Random(4, 3);
    CHECK((m.multiply(h) - m.to_dense() * h).cwiseAbs().maxCoeff() < 1e-12);
    mppr::DenseVector v = mppr::DenseVector::Random(4);
    CHECK((m.multiply(v) - m.to_dense() * v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("add uses the union pattern and drops cancellations") {
    const auto x = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}});
    const auto y = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 1, 3.0}});
    const auto s = mppr::add(x, 1.0, y, -2.0);
    CHECK(s.nnz() == 2);
    CHECK(s.at(0, 0) == 1.0);
    CHECK(s.at(1, 1) == -6.0);
    CHECK_FALSE(s.contains(0, 1));
}

TEST_CASE("hadamard keeps the intersection") {
    const auto x = SparseMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 2.0}});
    const auto y = SparseMatrix::from_triplets(2, 2, {{0, 1, 3.0}, {1, 1, 3.0}});
    const auto h = mppr::hadamard(x, y);
    CHECK(h.nnz() == 1);
    CHECK(h.at(0, 1) == 6.0);
}

TEST_CASE("masked product equals the dense product times the mask") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = random_sparse(9, 7, 0.3, seed);
        const auto y = random_sparse(7, 9, 0.3, seed + 100);
        const auto mask = random_sparse(9, 9, 0.4, seed + 200);
        const DenseMatrix expected = (x.to_dense() * y.to_dense()).cwiseProduct(mask.to_dense());
        CHECK(mppr::masked_product(x, y, mask) == SparseMatrix::from_dense(expected));
    }
}

TEST_CASE("masked product checks shapes") {
    CHECK_THROWS_AS(mppr::masked_product(SparseMatrix(2, 3), SparseMatrix(2, 2), SparseMatrix(2, 2)),
                    mppr::ShapeError);
}

TEST_CASE("predicates") {
    const auto sym = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
    CHECK(sym.is_symmetric());
    CHECK(sym.is_binary());
    CHECK(sym.has_zero_diagonal());
    CHECK(sym.is_nonnegative());
    const auto other = SparseMatrix::from_triplets(2, 2, {{0, 1, 2.0}, {1, 1, -1.0}});
    CHECK_FALSE(other.is_symmetric());
    CHECK_FALSE(other.is_binary());
    CHECK_FALSE(other.has_zero_diagonal());
    CHECK_FALSE(other.is_nonnegative());
}

TEST_CASE("matrix dump round trip keeps every bit") {
    auto m = SparseMatrix::from_triplets(3, 3, {{0, 1, 1.0 / 3.0}, {2, 0, 2.0 / 7.0}, {1, 1, 1e-300}});
    std::stringstream buffer;
    mppr::write_matrix_dump(buffer, m);
    CHECK(buffer.str().rfind("3 3 3\n", 0) == 0);
    CHECK(mppr::read_matrix_dump(buffer) == m);
}

TEST_CASE("matrix dump rejects malformed input") {
    std::stringstream bad("2 2 1\n0 5 1.0\n");
    CHECK_THROWS(mppr::read_matrix_dump(bad));
    std::stringstream truncated("2 2 2\n0 1 1.0\n");
    CHECK_THROWS_AS(mppr::read_matrix_dump(truncated), mppr::ParseError);
}
