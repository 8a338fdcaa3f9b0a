// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/propagation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mppr/errors.hpp"
#include "mppr/random.hpp"

namespace mppr {

namespace {

void check_beta(double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw DomainError(fmt::format("beta must lie in (0, 1], got {}", beta));
    }
}

double power_entry(double v, double beta) {
    if (v < 0.0) {
        throw DomainError(fmt::format("cannot take the beta-power of negative entry {}", v));
    }
    return beta == 1.0 || v == 0.0 ? v : std::pow(v, beta);
}

SparseMatrix drop_entries(const SparseMatrix& m, double rate, std::mt19937_64& rng) {
    KeepSampler keep(rate, rng);
    const double scale = 1.0 / (1.0 - rate);
    std::vector<SparseMatrix::Entry> entries = m.entries();
    for (auto& e : entries) {
        e.value = keep.next() ? e.value * scale : 0.0;
    }
    return SparseMatrix::from_triplets(m.rows(), m.cols(), std::move(entries));
}

DenseMatrix neumann_apply(const SparseMatrix& t, double alpha, const NeumannOptions& neumann, const DenseMatrix& h) {
    DenseMatrix term = alpha * h;
    DenseMatrix acc = term;
    for (std::size_t k = 1; k <= neumann.max_terms; ++k) {
        term = t.multiply(term) * (1.0 - alpha);
        acc += term;
        if (term.size() == 0 || term.cwiseAbs().maxCoeff() < neumann.tol) {
            break;
        }
    }
    return acc;
}

}  // namespace

DenseMatrix entrywise_power(const DenseMatrix& m, double beta) {
    check_beta(beta);
    DenseMatrix out = m;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out.data()[i] = power_entry(out.data()[i], beta);
    }
    return out;
}

SparseMatrix entrywise_power(const SparseMatrix& m, double beta) {
    check_beta(beta);
    std::vector<SparseMatrix::Entry> entries = m.entries();
    for (auto& e : entries) {
        e.value = power_entry(e.value, beta);
    }
    return SparseMatrix::from_triplets(m.rows(), m.cols(), std::move(entries));
}

PropagationOperator PropagationOperator::identity(std::size_t n) {
    PropagationOperator op;
    op.storage_ = Storage::Identity;
    op.n_ = n;
    return op;
}

PropagationOperator PropagationOperator::dense(DenseMatrix materialized, double alpha, double beta) {
    if (materialized.rows() != materialized.cols()) {
        throw ShapeError(fmt::format("propagation matrix must be square, got {}x{}", materialized.rows(),
                                     materialized.cols()));
    }
    PropagationOperator op;
    op.storage_ = Storage::Dense;
    op.n_ = static_cast<std::size_t>(materialized.rows());
    op.alpha_ = alpha;
    op.beta_ = beta;
    op.dense_ = std::make_shared<const DenseMatrix>(std::move(materialized));
    return op;
}

PropagationOperator PropagationOperator::sparse(SparseMatrix materialized, double alpha, double beta,
                                                double threshold) {
    if (!materialized.is_square()) {
        throw ShapeError(fmt::format("propagation matrix must be square, got {}x{}", materialized.rows(),
                                     materialized.cols()));
    }
    PropagationOperator op;
    op.storage_ = Storage::Sparse;
    op.n_ = materialized.rows();
    op.alpha_ = alpha;
    op.beta_ = beta;
    op.threshold_ = threshold;
    op.sparse_t_ = std::make_shared<const SparseMatrix>(materialized.transpose());
    op.sparse_ = std::make_shared<const SparseMatrix>(std::move(materialized));
    return op;
}

PropagationOperator PropagationOperator::lazy(SparseMatrix transition, double alpha, NeumannOptions neumann) {
    if (!transition.is_square()) {
        throw ShapeError(fmt::format("transition matrix must be square, got {}x{}", transition.rows(),
                                     transition.cols()));
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError(fmt::format("teleport probability must lie in (0, 1], got {}", alpha));
    }
    PropagationOperator op;
    op.storage_ = Storage::LazyNeumann;
    op.n_ = transition.rows();
    op.alpha_ = alpha;
    op.neumann_ = neumann;
    op.sparse_t_ = std::make_shared<const SparseMatrix>(transition.transpose());
    op.sparse_ = std::make_shared<const SparseMatrix>(std::move(transition));
    return op;
}

DenseMatrix PropagationOperator::apply(const DenseMatrix& h) const {
    if (static_cast<std::size_t>(h.rows()) != n_) {
        throw ShapeError(fmt::format("operator of size {} applied to {} rows", n_, h.rows()));
    }
    switch (storage_) {
    case Storage::Identity:
        return h;
    case Storage::Dense: {
        DenseMatrix out(h.rows(), h.cols());
        out.noalias() = *dense_ * h;
        return out;
    }
    case Storage::Sparse:
        return sparse_->multiply(h);
    case Storage::LazyNeumann:
        return neumann_apply(*sparse_, alpha_, neumann_, h);
    }
    return h;
}

DenseMatrix PropagationOperator::apply_transpose(const DenseMatrix& g) const {
    if (static_cast<std::size_t>(g.rows()) != n_) {
        throw ShapeError(fmt::format("operator of size {} applied to {} rows", n_, g.rows()));
    }
    switch (storage_) {
    case Storage::Identity:
        return g;
    case Storage::Dense: {
        DenseMatrix out(g.rows(), g.cols());
        out.noalias() = dense_->transpose() * g;
        return out;
    }
    case Storage::Sparse:
        return sparse_t_->multiply(g);
    case Storage::LazyNeumann:
        return neumann_apply(*sparse_t_, alpha_, neumann_, g);
    }
    return g;
}

PropagationOperator PropagationOperator::with_edge_dropout(double rate, std::mt19937_64& rng) const {
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw DomainError(fmt::format("dropout rate must lie in [0, 1), got {}", rate));
    }
    if (rate == 0.0 || storage_ == Storage::Identity) {
        return *this;
    }
    PropagationOperator op = *this;
    switch (storage_) {
    case Storage::Identity:
        break;
    case Storage::Dense: {
        // A draw for every entry, zeros included, so the loop stays branch free.
        KeepSampler keep(rate, rng);
        const double factors[2] = {0.0, 1.0 / (1.0 - rate)};
        DenseMatrix dropped(dense_->rows(), dense_->cols());
        const double* src = dense_->data();
        double* dst = dropped.data();
        for (Eigen::Index i = 0; i < dropped.size(); ++i) {
            dst[i] = src[i] * factors[keep.next() ? 1 : 0];
        }
        op.dense_ = std::make_shared<const DenseMatrix>(std::move(dropped));
        break;
    }
    case Storage::Sparse:
    case Storage::LazyNeumann: {
        SparseMatrix dropped = drop_entries(*sparse_, rate, rng);
        op.sparse_t_ = std::make_shared<const SparseMatrix>(dropped.transpose());
        op.sparse_ = std::make_shared<const SparseMatrix>(std::move(dropped));
        break;
    }
    }
    return op;
}

DenseMatrix PropagationOperator::to_dense() const {
    switch (storage_) {
    case Storage::Identity:
        return DenseMatrix::Identity(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    case Storage::Dense:
        return *dense_;
    case Storage::Sparse:
        return sparse_->to_dense();
    case Storage::LazyNeumann:
        return apply(DenseMatrix::Identity(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_)));
    }
    return {};
}

PropagationOperator apply_beta(const PprMatrix& pi, double beta) {
    return PropagationOperator::dense(entrywise_power(pi.matrix, beta), pi.alpha, beta);
}

DenseMatrix propagate(const PropagationOperator& op, const DenseMatrix& h) {
    return op.apply(h);
}

SparseMatrix sparse_ppr_matrix(const SparseMatrix& t, double alpha, NeumannOptions neumann, double threshold) {
    if (!t.is_square()) {
        throw ShapeError(fmt::format("transition matrix must be square, got {}x{}", t.rows(), t.cols()));
    }
    constexpr Eigen::Index kBlock = 64;
    const auto n = static_cast<Eigen::Index>(t.rows());
    std::vector<SparseMatrix::Entry> entries;
    for (Eigen::Index start = 0; start < n; start += kBlock) {
        const Eigen::Index width = std::min(kBlock, n - start);
        DenseMatrix basis = DenseMatrix::Zero(n, width);
        for (Eigen::Index j = 0; j < width; ++j) {
            basis(start + j, j) = 1.0;
        }
        const DenseMatrix block = neumann_apply(t, alpha, neumann, basis);
        for (Eigen::Index r = 0; r < n; ++r) {
            for (Eigen::Index j = 0; j < width; ++j) {
                const double v = block(r, j);
                if (v >= threshold && v > 0.0) {
                    entries.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(start + j), v});
                }
            }
        }
    }
    return SparseMatrix::from_triplets(t.rows(), t.cols(), std::move(entries));
}

PropagationOperator build_propagation(const SparseMatrix& t, const OperatorOptions& options) {
    check_beta(options.beta);
    if (t.rows() <= options.dense_limit) {
        return apply_beta(ppr_matrix(t, options.alpha, options.solver), options.beta);
    }
    if (options.beta == 1.0) {
        return PropagationOperator::lazy(t, options.alpha, options.solver.neumann);
    }
    SparseMatrix pi = sparse_ppr_matrix(t, options.alpha, options.solver.neumann, options.lazy_threshold);
    return PropagationOperator::sparse(entrywise_power(pi, options.beta), options.alpha, options.beta,
                                       options.lazy_threshold);
}

}  // namespace mppr
