// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "mppr/errors.hpp"
#include "mppr/propagation.hpp"
#include "support/fixtures.hpp"

using mppr::DenseMatrix;
using mppr::PropagationOperator;
using mppr::SparseMatrix;

namespace {

mppr::PprMatrix seeded_ppr(std::uint64_t seed, std::size_t n = 20) {
    const auto t = mppr::normalize_sym(mppr::to_adjacency(mppr::testing::random_digraph(n, 0.2, seed)));
    return mppr::ppr_matrix_direct(t, 0.1);
}

}  // namespace

TEST_CASE("entrywise power") {
    DenseMatrix m(1, 3);
    m << 0.04, 0.0, 1.0;
    const DenseMatrix p = mppr::entrywise_power(m, 0.5);
    CHECK(p(0, 0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p(0, 1) == 0.0);
    CHECK(p(0, 2) == 1.0);
    CHECK_THROWS_AS(mppr::entrywise_power(DenseMatrix::Constant(1, 1, -0.1), 0.5), mppr::DomainError);
    CHECK_THROWS_AS(mppr::entrywise_power(m, 0.0), mppr::DomainError);
    CHECK_THROWS_AS(mppr::entrywise_power(m, 1.5), mppr::DomainError);
}

TEST_CASE("apply_beta at 1 is the identity map") {
    const auto pi = seeded_ppr(1);
    CHECK(*mppr::apply_beta(pi, 1.0).dense_matrix() == pi.matrix);
}

TEST_CASE("beta 0.5 strictly raises entries inside (0, 1)") {
    const auto pi = seeded_ppr(2);
    const auto op = mppr::apply_beta(pi, 0.5);
    const DenseMatrix& raised = *op.dense_matrix();
    for (Eigen::Index i = 0; i < pi.matrix.size(); ++i) {
        const double x = pi.matrix.data()[i];
        if (x > 0.0 && x < 1.0) {
            CHECK(raised.data()[i] > x);
        }
    }
}

TEST_CASE("powers compose") {
    const auto pi = seeded_ppr(3);
    const DenseMatrix twice = mppr::entrywise_power(mppr::entrywise_power(pi.matrix, 0.5), 0.6);
    const DenseMatrix once = mppr::entrywise_power(pi.matrix, 0.3);
    CHECK(mppr::testing::max_abs_diff(twice, once) < 1e-12);
}

TEST_CASE("propagate is linear") {
    const auto op = mppr::apply_beta(seeded_ppr(4), 0.5);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> normal;
    DenseMatrix h1(20, 3);
    DenseMatrix h2(20, 3);
    for (Eigen::Index i = 0; i < h1.size(); ++i) {
        h1.data()[i] = normal(rng);
        h2.data()[i] = normal(rng);
    }
    const DenseMatrix sum = mppr::propagate(op, h1 + h2);
    CHECK(mppr::testing::max_abs_diff(sum, mppr::propagate(op, h1) + mppr::propagate(op, h2)) < 1e-12);
    CHECK(mppr::testing::max_abs_diff(mppr::propagate(op, 2.5 * h1), 2.5 * mppr::propagate(op, h1)) < 1e-12);
    CHECK(mppr::propagate(op, DenseMatrix::Zero(20, 3)).isZero(0.0));
    CHECK_THROWS_AS(mppr::propagate(op, DenseMatrix::Zero(19, 3)), mppr::ShapeError);
}

TEST_CASE("identity operator") {
    const auto op = PropagationOperator::identity(5);
    const DenseMatrix h = DenseMatrix::Random(5, 2);
    CHECK(op.apply(h) == h);
    CHECK(op.apply_transpose(h) == h);
    std::mt19937_64 rng(0);
    CHECK(op.with_edge_dropout(0.5, rng).apply(h) == h);

    const auto t = mppr::normalize_sym(mppr::to_adjacency(mppr::testing::random_digraph(5, 0.3, 0)));
    const auto alpha_one = mppr::apply_beta(mppr::ppr_matrix_direct(t, 1.0), 1.0);
    CHECK(mppr::testing::max_abs_diff(alpha_one.apply(h), h) <= 1e-15);
}

TEST_CASE("transpose application matches the explicit transpose") {
    const auto op = mppr::apply_beta(seeded_ppr(5, 15), 0.75);
    const DenseMatrix g = DenseMatrix::Random(15, 4);
    CHECK(mppr::testing::max_abs_diff(op.apply_transpose(g), op.to_dense().transpose() * g) < 1e-12);
}

TEST_CASE("edge dropout is unbiased") {
    const auto op = mppr::apply_beta(seeded_ppr(6, 10), 0.5);
    std::mt19937_64 rng(6);
    DenseMatrix mean = DenseMatrix::Zero(10, 10);
    const int samples = 4000;
    for (int s = 0; s < samples; ++s) {
        mean += op.with_edge_dropout(0.5, rng).to_dense();
    }
    mean /= samples;
    const DenseMatrix exact = op.to_dense();
    CHECK(mppr::testing::max_abs_diff(mean, exact) < 0.05 * exact.maxCoeff());

    const auto dropped = op.with_edge_dropout(0.5, rng).to_dense();
    for (Eigen::Index i = 0; i < dropped.size(); ++i) {
        const double d = dropped.data()[i];
        const double e = exact.data()[i];
        CHECK((d == 0.0 || d == 2.0 * e));
    }
    CHECK_THROWS_AS(op.with_edge_dropout(1.0, rng), mppr::DomainError);
}

TEST_CASE("large graphs switch to lazy or sparse storage") {
    const auto g = mppr::testing::random_digraph(40, 0.1, 7);
    const auto t = mppr::normalize_sym(mppr::to_adjacency(g));
    const DenseMatrix exact = mppr::ppr_matrix_direct(t, 0.1).matrix;
    const DenseMatrix h = DenseMatrix::Random(40, 3);

    mppr::OperatorOptions options;
    options.dense_limit = 16;
    options.solver.neumann = {1000, 1e-12};

    options.beta = 1.0;
    const auto lazy = mppr::build_propagation(t, options);
    CHECK(lazy.storage() == PropagationOperator::Storage::LazyNeumann);
    CHECK(mppr::testing::max_abs_diff(lazy.apply(h), exact * h) < 1e-9);
    CHECK(mppr::testing::max_abs_diff(lazy.apply_transpose(h), exact.transpose() * h) < 1e-9);
    CHECK(lazy.sparsify_threshold() == 0.0);

    options.beta = 0.5;
    const auto sparse = mppr::build_propagation(t, options);
    CHECK(sparse.storage() == PropagationOperator::Storage::Sparse);
    CHECK(sparse.sparsify_threshold() == options.lazy_threshold);
    const DenseMatrix kept = sparse.to_dense();
    for (Eigen::Index i = 0; i < exact.size(); ++i) {
        const double x = exact.data()[i];
        if (x >= 1e-3) {
            CHECK(kept.data()[i] == doctest::Approx(std::sqrt(x)).epsilon(1e-6));
        }
        if (x < 0.5e-4) {
            CHECK(kept.data()[i] == 0.0);
        }
    }

    options.dense_limit = 4096;
    const auto dense = mppr::build_propagation(t, options);
    CHECK(dense.storage() == PropagationOperator::Storage::Dense);
    CHECK(*dense.dense_matrix() == mppr::entrywise_power(exact, 0.5));
}
