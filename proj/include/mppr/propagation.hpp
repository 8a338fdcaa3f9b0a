// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <random>

#include "mppr/ppr.hpp"
#include "mppr/sparse_matrix.hpp"

namespace mppr {

/// Entrywise power x^beta of a nonnegative matrix, 0 < beta <= 1. Zeros
/// stay zero. Throws DomainError on a negative entry.
DenseMatrix entrywise_power(const DenseMatrix& m, double beta);
SparseMatrix entrywise_power(const SparseMatrix& m, double beta);

/// Fixed linear map Z = Pi^beta H applied to predictions or embeddings.
///
/// Small graphs hold the operator densely. Large graphs either keep a
/// thresholded sparse copy of the PPR matrix, or (beta = 1) apply the PPR
/// matrix lazily by summing the Neumann recurrence against H. Instances are
/// immutable and cheap to copy; copies share storage.
class PropagationOperator {
public:
    enum class Storage { Identity, Dense, Sparse, LazyNeumann };

    PropagationOperator() = default;

    static PropagationOperator identity(std::size_t n);
    static PropagationOperator dense(DenseMatrix materialized, double alpha, double beta);
    static PropagationOperator sparse(SparseMatrix materialized, double alpha, double beta, double threshold);
    /// Applies alpha * sum_k (1-alpha)^k T^k on the fly.
    static PropagationOperator lazy(SparseMatrix transition, double alpha, NeumannOptions neumann);

    Storage storage() const noexcept { return storage_; }
    std::size_t size() const noexcept { return n_; }
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    /// Entries below this value were dropped before the power (0 = none).
    double sparsify_threshold() const noexcept { return threshold_; }

    /// op * h
    DenseMatrix apply(const DenseMatrix& h) const;
    /// op^T * g
    DenseMatrix apply_transpose(const DenseMatrix& g) const;

    /// Copy with each stored nonzero kept with probability 1 - rate and
    /// rescaled by 1 / (1 - rate). The lazy form drops entries of the
    /// transition matrix instead. The identity is returned unchanged.
    PropagationOperator with_edge_dropout(double rate, std::mt19937_64& rng) const;

    /// Explicit matrix; the lazy form is evaluated against the identity.
    DenseMatrix to_dense() const;

    const DenseMatrix* dense_matrix() const noexcept { return dense_.get(); }
    const SparseMatrix* sparse_matrix() const noexcept { return sparse_.get(); }

private:
    Storage storage_ = Storage::Identity;
    std::size_t n_ = 0;
    double alpha_ = 1.0;
    double beta_ = 1.0;
    double threshold_ = 0.0;
    std::shared_ptr<const DenseMatrix> dense_;
    std::shared_ptr<const SparseMatrix> sparse_;
    std::shared_ptr<const SparseMatrix> sparse_t_;
    NeumannOptions neumann_{};
};

/// Entrywise beta-power of a PPR matrix, held densely.
PropagationOperator apply_beta(const PprMatrix& pi, double beta);

/// Z = op * H.
DenseMatrix propagate(const PropagationOperator& op, const DenseMatrix& h);

struct OperatorOptions {
    double alpha = 0.1;
    double beta = 1.0;
    /// Used as given up to dense_limit nodes; larger graphs always go
    /// through the Neumann recurrence.
    SolverOptions solver{SolverKind::Direct, {}};
    std::size_t dense_limit = 4096;
    /// Sparsification level for large graphs with beta < 1.
    double lazy_threshold = 1e-4;
};

/// PPR matrix of the sparse PPR matrix above `threshold`, computed in
/// column blocks through the Neumann recurrence.
SparseMatrix sparse_ppr_matrix(const SparseMatrix& t, double alpha, NeumannOptions neumann, double threshold);

/// Builds the propagation operator for an already normalized transition
/// matrix, picking dense, sparse or lazy storage from the graph size.
PropagationOperator build_propagation(const SparseMatrix& t, const OperatorOptions& options);

}  // namespace mppr
