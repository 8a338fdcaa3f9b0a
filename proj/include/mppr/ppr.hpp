// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

#include "mppr/motif.hpp"
#include "mppr/sparse_matrix.hpp"

namespace mppr {

struct PageRankState {
    DenseVector psi;
    double damping = 0.85;
    std::size_t iterations = 0;
    /// L1 distance between the last two iterates.
    double residual = 0.0;
};

/// Power iteration psi <- d * P^T psi + (1 - d) / n * e from the uniform
/// vector, until the L1 change drops below `tol`. Throws ConvergenceError
/// after `max_iter` iterations.
PageRankState pagerank(const SparseMatrix& p, double damping, double tol = 1e-10, std::size_t max_iter = 10000);

enum class PprSource { Edge, MotifBlended };
enum class SolverKind { Direct, Neumann };

struct NeumannOptions {
    std::size_t max_terms = 1000;
    double tol = 1e-6;
};

/// Dense personalized PageRank matrix alpha * (I - (1 - alpha) T)^{-1}.
struct PprMatrix {
    double alpha = 0.1;
    DenseMatrix matrix;
    PprSource source = PprSource::Edge;
    SolverKind solver = SolverKind::Direct;
    /// Neumann terms summed beyond the zeroth (0 for the direct solver).
    std::size_t terms = 0;
    /// Max-norm of the last Neumann term added (0 for the direct solver).
    double residual = 0.0;

    std::size_t size() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

/// Solves the dense system column by column through one LU factorization.
/// Throws SolverError when the system is numerically singular or the
/// result leaves the nonnegative cone (spectral radius of (1-alpha)T >= 1).
PprMatrix ppr_matrix_direct(const SparseMatrix& t, double alpha);

/// Partial sum sum_{k=0..K} alpha (1-alpha)^k T^k, stopping as soon as a
/// term's max-norm falls below `tol`. Never throws on slow convergence.
PprMatrix ppr_matrix_neumann(const SparseMatrix& t, double alpha, NeumannOptions options = {});

struct SolverOptions {
    SolverKind kind = SolverKind::Direct;
    NeumannOptions neumann{};
};

PprMatrix ppr_matrix(const SparseMatrix& t, double alpha, const SolverOptions& solver);

/// Edge pipeline: PPR of the symmetrically normalized adjacency with
/// self-loops.
PprMatrix edge_ppr_matrix(const SparseMatrix& a, double alpha, const SolverOptions& solver = {});

/// Motif pipeline: the blend is symmetrically normalized with self-loops
/// before inversion, so that tau = 0 reproduces edge_ppr_matrix exactly.
PprMatrix mppr_matrix(const BlendedAdjacency& theta, double alpha, const SolverOptions& solver = {});

}  // namespace mppr
