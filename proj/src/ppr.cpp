// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/ppr.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mppr/errors.hpp"
#include "mppr/graph.hpp"

namespace mppr {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError(fmt::format("teleport probability must lie in (0, 1], got {}", alpha));
    }
}

void check_square(const SparseMatrix& t) {
    if (!t.is_square()) {
        throw ShapeError(fmt::format("transition matrix must be square, got {}x{}", t.rows(), t.cols()));
    }
}

}  // namespace

PageRankState pagerank(const SparseMatrix& p, double damping, double tol, std::size_t max_iter) {
    check_square(p);
    if (!(damping > 0.0 && damping <= 1.0)) {
        throw DomainError(fmt::format("damping must lie in (0, 1], got {}", damping));
    }
    if (!(tol > 0.0)) {
        throw DomainError("tolerance must be positive");
    }
    if (!p.is_nonnegative()) {
        throw DomainError("transition matrix has negative entries");
    }
    const DenseVector sums = p.row_sums();
    for (Eigen::Index i = 0; i < sums.size(); ++i) {
        if (std::abs(sums[i] - 1.0) > 1e-9) {
            throw DomainError(fmt::format("row {} of the transition matrix is not stochastic", i));
        }
    }

    const auto n = static_cast<Eigen::Index>(p.rows());
    PageRankState state;
    state.damping = damping;
    if (n == 0) {
        return state;
    }
    const SparseMatrix pt = p.transpose();
    const double teleport = (1.0 - damping) / static_cast<double>(n);
    state.psi = DenseVector::Constant(n, 1.0 / static_cast<double>(n));
    for (std::size_t it = 1; it <= max_iter; ++it) {
        DenseVector next = pt.multiply(state.psi);
        next = (damping * next).array() + teleport;
        state.residual = (next - state.psi).lpNorm<1>();
        state.psi = std::move(next);
        state.iterations = it;
        if (state.residual < tol) {
            return state;
        }
    }
    throw ConvergenceError(fmt::format("pagerank did not converge in {} iterations", max_iter), state.residual);
}

PprMatrix ppr_matrix_direct(const SparseMatrix& t, double alpha) {
    check_square(t);
    check_alpha(alpha);
    const auto n = static_cast<Eigen::Index>(t.rows());

    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const auto cols = t.row_cols(r);
        const auto vals = t.row_values(r);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            system(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols[k])) -= (1.0 - alpha) * vals[k];
        }
    }

    PprMatrix out;
    out.alpha = alpha;
    out.solver = SolverKind::Direct;
    if (n == 0) {
        return out;
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-13)) {
        throw SolverError(fmt::format("PPR system is numerically singular (rcond {:.3g})", rcond));
    }
    out.matrix = alpha * lu.solve(Eigen::MatrixXd::Identity(n, n));

    // Round-off may leave entries that are exactly zero in theory slightly negative.
    const double floor = -1e-10 * std::max(1.0, out.matrix.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < out.matrix.size(); ++i) {
        double& v = out.matrix.data()[i];
        if (!std::isfinite(v) || v < floor) {
            throw SolverError("PPR solve left the nonnegative cone; the spectral radius of (1-alpha)T is not below 1");
        }
        if (v < 0.0) {
            v = 0.0;
        }
    }
    return out;
}

PprMatrix ppr_matrix_neumann(const SparseMatrix& t, double alpha, NeumannOptions options) {
    check_square(t);
    check_alpha(alpha);
    const auto n = static_cast<Eigen::Index>(t.rows());

    PprMatrix out;
    out.alpha = alpha;
    out.solver = SolverKind::Neumann;
    DenseMatrix term = alpha * DenseMatrix::Identity(n, n);
    out.matrix = term;
    out.residual = n == 0 ? 0.0 : alpha;
    for (std::size_t k = 1; k <= options.max_terms && out.residual >= options.tol; ++k) {
        term = t.multiply(term) * (1.0 - alpha);
        out.matrix += term;
        out.residual = n == 0 ? 0.0 : term.cwiseAbs().maxCoeff();
        out.terms = k;
    }
    return out;
}

PprMatrix ppr_matrix(const SparseMatrix& t, double alpha, const SolverOptions& solver) {
    switch (solver.kind) {
    case SolverKind::Direct:
        return ppr_matrix_direct(t, alpha);
    case SolverKind::Neumann:
        return ppr_matrix_neumann(t, alpha, solver.neumann);
    }
    return ppr_matrix_direct(t, alpha);
}

PprMatrix edge_ppr_matrix(const SparseMatrix& a, double alpha, const SolverOptions& solver) {
    PprMatrix pi = ppr_matrix(normalize_sym(a), alpha, solver);
    pi.source = PprSource::Edge;
    return pi;
}

PprMatrix mppr_matrix(const BlendedAdjacency& theta, double alpha, const SolverOptions& solver) {
    PprMatrix pi = ppr_matrix(normalize_sym(theta.matrix), alpha, solver);
    pi.source = PprSource::MotifBlended;
    return pi;
}

}  // namespace mppr
