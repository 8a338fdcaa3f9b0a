// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "mppr/errors.hpp"
#include "mppr/motif.hpp"
#include "support/fixtures.hpp"

using mppr::Graph;
using mppr::MotifId;
using mppr::SparseMatrix;

TEST_CASE("motif names") {
    CHECK(mppr::to_string(MotifId::M7) == "M7");
    CHECK(mppr::parse_motif("m3") == MotifId::M3);
    CHECK(mppr::parse_motif("M1") == MotifId::M1);
    CHECK_FALSE(mppr::parse_motif("m8").has_value());
    CHECK(mppr::kAllMotifs.size() == 7);
}

TEST_CASE("uni/bi split") {
    const auto a = mppr::to_adjacency(Graph(3, {{0, 1}, {1, 0}, {1, 2}}));
    const auto split = mppr::split_uni_bi(a);
    CHECK(split.bidirectional == mppr::to_adjacency(Graph(3, {{0, 1}, {1, 0}})));
    CHECK(split.unidirectional == mppr::to_adjacency(Graph(3, {{1, 2}})));

    const auto sym = mppr::to_adjacency(Graph(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}}));
    CHECK(mppr::split_uni_bi(sym).unidirectional.nnz() == 0);
    CHECK(mppr::split_uni_bi(sym).bidirectional == sym);

    const auto dag = mppr::to_adjacency(Graph(3, {{0, 1}, {1, 2}, {0, 2}}));
    CHECK(mppr::split_uni_bi(dag).bidirectional.nnz() == 0);
    CHECK(mppr::split_uni_bi(dag).unidirectional == dag);
}

TEST_CASE("uni/bi split rejects non-binary input") {
    CHECK_THROWS_AS(mppr::split_uni_bi(SparseMatrix::from_triplets(2, 2, {{0, 1, 2.0}})), mppr::DomainError);
    CHECK_THROWS_AS(mppr::split_uni_bi(SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}})), mppr::DomainError);
}

TEST_CASE("uni/bi parts add up to A on random graphs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto a = mppr::to_adjacency(mppr::testing::random_digraph(10, 0.3, seed));
        const auto split = mppr::split_uni_bi(a);
        CHECK(mppr::add(split.unidirectional, 1.0, split.bidirectional, 1.0) == a);
        CHECK(split.bidirectional.is_symmetric());
        CHECK(mppr::hadamard(split.unidirectional, split.unidirectional.transpose()).nnz() == 0);
    }
}

TEST_CASE("worked example: M7 count of the reciprocated pair is 2") {
    const auto am = mppr::motif_adjacency(mppr::to_adjacency(mppr::testing::m7_pair_graph()), MotifId::M7);
    CHECK(am.matrix.at(0, 2) == 2.0);
    CHECK(am.matrix.at(2, 0) == 2.0);
}

TEST_CASE("oracle: every motif of every pattern graph") {
    for (const auto m : mppr::kAllMotifs) {
        const Graph g(3, mppr::testing::motif_pattern(m));
        const auto oracle = mppr::testing::brute_force_motif_adjacency(g, m);
        CHECK(oracle.sum() == 6.0);
        for (const auto other : mppr::kAllMotifs) {
            const auto am = mppr::motif_adjacency(mppr::to_adjacency(g), other);
            CAPTURE(mppr::to_string(m));
            CAPTURE(mppr::to_string(other));
            CHECK(am.matrix.to_dense() == mppr::testing::brute_force_motif_adjacency(g, other));
        }
    }
}

TEST_CASE("matrix formulas equal the brute-force oracle on seeded graphs") {
    const double densities[] = {0.1, 0.3, 0.5};
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t n = 4 + seed % 9;
        const Graph g = mppr::testing::random_digraph(n, densities[seed % 3], 1000 + seed);
        const auto a = mppr::to_adjacency(g);
        for (const auto m : mppr::kAllMotifs) {
            const auto am = mppr::motif_adjacency(a, m);
            CAPTURE(seed);
            CAPTURE(mppr::to_string(m));
            CHECK(am.matrix.to_dense() == mppr::testing::brute_force_motif_adjacency(g, m));
            CHECK(am.matrix.is_symmetric(0.0));
            CHECK(am.matrix.has_zero_diagonal());
            ++checked;
        }
    }
    CHECK(checked == 420);
}

TEST_CASE("bidirectional triangles count once per pair under M4") {
    const Graph g = mppr::symmetrize(Graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}));
    const auto am = mppr::motif_adjacency(mppr::to_adjacency(g), MotifId::M4);
    CHECK(am.matrix.at(0, 1) == 1.0);
    CHECK(am.matrix.at(0, 2) == 1.0);
    CHECK(am.matrix.at(2, 3) == 0.0);
    CHECK(am.matrix.to_dense() == mppr::testing::brute_force_motif_adjacency(g, MotifId::M4));
}

TEST_CASE("empty graph gives zero matrices") {
    const auto a = mppr::to_adjacency(Graph(5, {}));
    for (const auto m : mppr::kAllMotifs) {
        CHECK(mppr::motif_adjacency(a, m).matrix.nnz() == 0);
    }
}

TEST_CASE("blend") {
    const auto a = mppr::to_adjacency(mppr::testing::m7_pair_graph());
    const auto am = mppr::motif_adjacency(a, MotifId::M7);
    CHECK(mppr::blend(a, am, 0.0).matrix == a);
    CHECK(mppr::blend(a, am, 1.0).matrix == am.matrix);
    CHECK(mppr::blend(a, am, 0.9).matrix.at(0, 2) == doctest::Approx(1.9).epsilon(1e-15));
    CHECK_THROWS_AS(mppr::blend(a, am, 1.5), mppr::DomainError);
    CHECK_THROWS_AS(mppr::blend(a, am, -0.1), mppr::DomainError);
    CHECK_THROWS_AS(mppr::blend(a, SparseMatrix(3, 3), 0.5), mppr::ShapeError);
}
