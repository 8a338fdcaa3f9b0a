// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/neural.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mppr/errors.hpp"
#include "mppr/random.hpp"

namespace mppr {

namespace {

constexpr double kMinProbability = 1e-15;

void check_rate(double rate) {
    if (!(rate >= 0.0 && rate < 1.0)) {
        throw DomainError(fmt::format("dropout rate must lie in [0, 1), got {}", rate));
    }
}

DenseMatrix sample_mask(Eigen::Index rows, Eigen::Index cols, double rate, std::mt19937_64& rng) {
    check_rate(rate);
    KeepSampler keep(rate, rng);
    const double scale = 1.0 / (1.0 - rate);
    DenseMatrix mask(rows, cols);
    for (Eigen::Index i = 0; i < mask.size(); ++i) {
        mask.data()[i] = keep.next() ? scale : 0.0;
    }
    return mask;
}

std::vector<double> sample_sparse_mask(std::size_t count, double rate, std::mt19937_64& rng) {
    check_rate(rate);
    KeepSampler keep(rate, rng);
    const double scale = 1.0 / (1.0 - rate);
    std::vector<double> mask(count);
    for (auto& m : mask) {
        m = keep.next() ? scale : 0.0;
    }
    return mask;
}

std::size_t count_nonzeros(const DenseMatrix& x) {
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        count += x.data()[i] != 0.0 ? 1 : 0;
    }
    return count;
}

// X with the input mask applied, keeping only nonzero products.
SparseMatrix masked_input(const DenseMatrix& x, const std::vector<double>& mask) {
    std::vector<SparseMatrix::Entry> entries;
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            const double v = x(r, c);
            if (v == 0.0) {
                continue;
            }
            const double kept = mask.empty() ? v : v * mask[k];
            ++k;
            if (kept != 0.0) {
                entries.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), kept});
            }
        }
    }
    return SparseMatrix::from_triplets(static_cast<std::size_t>(x.rows()), static_cast<std::size_t>(x.cols()),
                                       std::move(entries));
}

// S^T G without forming the transpose.
DenseMatrix transpose_multiply(const SparseMatrix& s, const DenseMatrix& g) {
    DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(s.cols()), g.cols());
    const auto row_ptr = s.row_ptr();
    const auto cols = s.col_indices();
    const auto values = s.values();
    for (std::size_t r = 0; r < s.rows(); ++r) {
        const auto src = g.row(static_cast<Eigen::Index>(r));
        for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            out.row(static_cast<Eigen::Index>(cols[k])).noalias() += values[k] * src;
        }
    }
    return out;
}

void check_model(const MlpModel& model, const DenseMatrix& x) {
    if (x.cols() != model.w0.rows()) {
        throw ShapeError(fmt::format("features have {} columns, model expects {}", x.cols(), model.w0.rows()));
    }
    if (model.w0.cols() != model.w1.rows()) {
        throw ShapeError(fmt::format("W0 is {}x{} but W1 is {}x{}", model.w0.rows(), model.w0.cols(),
                                     model.w1.rows(), model.w1.cols()));
    }
}

double l2_penalty(const MlpModel& model) {
    return 0.5 * model.l2_lambda * model.w0.squaredNorm();
}

// Loss value and its gradient with respect to Z.
double loss_and_gradient(const DenseMatrix& z, const LossSpec& loss, DenseMatrix* dz) {
    if (dz != nullptr) {
        *dz = DenseMatrix::Zero(z.rows(), z.cols());
    }
    if (const auto* node = std::get_if<NodeLoss>(&loss)) {
        const DenseMatrix p = softmax_rows(z);
        if (dz != nullptr) {
            for (const auto v : node->nodes) {
                const auto row = static_cast<Eigen::Index>(v);
                dz->row(row) = p.row(row);
                (*dz)(row, node->labels[v]) -= 1.0;
            }
        }
        return nll_loss(p, node->labels, node->nodes);
    }
    const auto& edge = std::get<EdgeLoss>(loss);
    if (edge.pairs.size() != edge.targets.size()) {
        throw ShapeError(fmt::format("{} pairs but {} targets", edge.pairs.size(), edge.targets.size()));
    }
    const std::vector<double> logits = edge_logits(z, edge.pairs);
    if (dz != nullptr) {
        for (std::size_t i = 0; i < edge.pairs.size(); ++i) {
            const auto u = static_cast<Eigen::Index>(edge.pairs[i].first);
            const auto v = static_cast<Eigen::Index>(edge.pairs[i].second);
            const double g = sigmoid(logits[i]) - edge.targets[i];
            dz->row(u) += g * z.row(v);
            dz->row(v) += g * z.row(u);
        }
    }
    return bce_loss_logits(logits, edge.targets);
}

}  // namespace

MlpModel MlpModel::glorot(std::size_t features, std::size_t hidden, std::size_t outputs, std::mt19937_64& rng) {
    auto init = [&rng](std::size_t fan_in, std::size_t fan_out) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        DenseMatrix w(static_cast<Eigen::Index>(fan_in), static_cast<Eigen::Index>(fan_out));
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            w.data()[i] = dist(rng);
        }
        return w;
    };
    MlpModel model;
    model.w0 = init(features, hidden);
    model.w1 = init(hidden, outputs);
    return model;
}

ForwardTrace mlp_forward(const MlpModel& model, const DenseMatrix& x, ForwardMode mode, std::mt19937_64* rng) {
    DropoutMasks masks;
    if (mode == ForwardMode::Train) {
        const bool needs_rng = model.input_dropout_rate > 0.0 || model.dropout_rate > 0.0;
        if (needs_rng && rng == nullptr) {
            throw DomainError("train-mode forward with dropout needs a random generator");
        }
        if (model.input_dropout_rate > 0.0) {
            masks.input = sample_sparse_mask(count_nonzeros(x), model.input_dropout_rate, *rng);
        }
        if (model.dropout_rate > 0.0) {
            masks.hidden = sample_mask(x.rows(), model.w0.cols(), model.dropout_rate, *rng);
        }
    }
    return mlp_forward(model, x, masks);
}

ForwardTrace mlp_forward(const MlpModel& model, const DenseMatrix& x, const DropoutMasks& masks) {
    check_model(model, x);
    ForwardTrace trace;
    trace.masks = masks;
    if (!masks.input.empty() && masks.input.size() != count_nonzeros(x)) {
        throw ShapeError("input dropout mask does not match the feature matrix");
    }
    trace.input = masked_input(x, masks.input);
    trace.pre_activation = trace.input.multiply(model.w0);
    trace.hidden = trace.pre_activation.cwiseMax(0.0);
    if (masks.hidden.size() != 0) {
        if (masks.hidden.rows() != trace.hidden.rows() || masks.hidden.cols() != trace.hidden.cols()) {
            throw ShapeError("hidden dropout mask does not match the hidden layer");
        }
        trace.hidden = trace.hidden.cwiseProduct(masks.hidden);
    }
    trace.h.noalias() = trace.hidden * model.w1;
    return trace;
}

void attach_propagation(ForwardTrace& trace, const PropagationOperator& op) {
    trace.z = op.apply(trace.h);
    trace.propagated = true;
}

DenseMatrix softmax_rows(const DenseMatrix& z) {
    DenseMatrix p(z.rows(), z.cols());
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        const double shift = z.row(r).maxCoeff();
        p.row(r) = (z.row(r).array() - shift).exp();
        p.row(r) /= p.row(r).sum();
    }
    return p;
}

double nll_loss(const DenseMatrix& probabilities, std::span<const int> labels, std::span<const NodeId> nodes,
                std::size_t* clamped) {
    double loss = 0.0;
    for (const auto v : nodes) {
        if (v >= labels.size() || static_cast<Eigen::Index>(v) >= probabilities.rows()) {
            throw IndexError(fmt::format("node {} has no label or prediction", v));
        }
        const int y = labels[v];
        if (y < 0 || y >= probabilities.cols()) {
            throw IndexError(fmt::format("node {} has label {} outside [0, {})", v, y, probabilities.cols()));
        }
        double p = probabilities(static_cast<Eigen::Index>(v), y);
        if (p < kMinProbability) {
            p = kMinProbability;
            if (clamped != nullptr) {
                ++*clamped;
            }
        }
        loss -= std::log(p);
    }
    return loss;
}

double sigmoid(double s) {
    if (s >= 0.0) {
        return 1.0 / (1.0 + std::exp(-s));
    }
    const double e = std::exp(s);
    return e / (1.0 + e);
}

double bce_loss_logits(std::span<const double> logits, std::span<const double> targets) {
    if (logits.size() != targets.size()) {
        throw ShapeError(fmt::format("{} logits but {} targets", logits.size(), targets.size()));
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double s = logits[i];
        loss += std::max(s, 0.0) - s * targets[i] + std::log1p(std::exp(-std::abs(s)));
    }
    return loss;
}

double bce_loss(std::span<const double> probabilities, std::span<const double> targets) {
    if (probabilities.size() != targets.size()) {
        throw ShapeError(fmt::format("{} probabilities but {} targets", probabilities.size(), targets.size()));
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double p = probabilities[i];
        loss -= targets[i] * std::log(p) + (1.0 - targets[i]) * std::log(1.0 - p);
    }
    return loss;
}

std::vector<double> edge_logits(const DenseMatrix& z, std::span<const Edge> pairs) {
    std::vector<double> out;
    out.reserve(pairs.size());
    const auto n = static_cast<std::size_t>(z.rows());
    for (const auto& [u, v] : pairs) {
        if (u >= n || v >= n) {
            throw IndexError(fmt::format("pair ({}, {}) references a node outside [0, {})", u, v, n));
        }
        out.push_back(z.row(static_cast<Eigen::Index>(u)).dot(z.row(static_cast<Eigen::Index>(v))));
    }
    return out;
}

double objective(const MlpModel& model, const ForwardTrace& trace, const LossSpec& loss) {
    if (!trace.propagated) {
        throw DomainError("objective needs a propagated trace");
    }
    return loss_and_gradient(trace.z, loss, nullptr) + l2_penalty(model);
}

GradientSet backward(const MlpModel& model, const ForwardTrace& trace, const PropagationOperator& op,
                     const LossSpec& loss) {
    if (!trace.propagated) {
        throw DomainError("backward needs a propagated trace");
    }
    if (op.size() != static_cast<std::size_t>(trace.z.rows())) {
        throw ShapeError(fmt::format("operator of size {} does not match trace with {} rows", op.size(),
                                     trace.z.rows()));
    }
    GradientSet grads;
    DenseMatrix dz;
    grads.loss = loss_and_gradient(trace.z, loss, &dz) + l2_penalty(model);

    const DenseMatrix dh = op.apply_transpose(dz);
    grads.dw1.noalias() = trace.hidden.transpose() * dh;
    DenseMatrix dpre = dh * model.w1.transpose();
    if (trace.masks.hidden.size() != 0) {
        dpre = dpre.cwiseProduct(trace.masks.hidden);
    }
    for (Eigen::Index i = 0; i < dpre.size(); ++i) {
        if (!(trace.pre_activation.data()[i] > 0.0)) {
            dpre.data()[i] = 0.0;
        }
    }
    grads.dw0 = transpose_multiply(trace.input, dpre);
    grads.dw0 += model.l2_lambda * model.w0;
    return grads;
}

AdamState AdamState::zeros_like(const MlpModel& model) {
    AdamState s;
    s.m0 = DenseMatrix::Zero(model.w0.rows(), model.w0.cols());
    s.v0 = s.m0;
    s.m1 = DenseMatrix::Zero(model.w1.rows(), model.w1.cols());
    s.v1 = s.m1;
    return s;
}

MlpModel adam_step(const MlpModel& model, const GradientSet& grads, AdamState& state, double lr) {
    if (grads.dw0.rows() != model.w0.rows() || grads.dw0.cols() != model.w0.cols() ||
        grads.dw1.rows() != model.w1.rows() || grads.dw1.cols() != model.w1.cols()) {
        throw ShapeError("gradient shapes do not match the model");
    }
    if (state.m0.size() == 0) {
        const auto b1 = state.beta1;
        const auto b2 = state.beta2;
        const auto eps = state.epsilon;
        state = AdamState::zeros_like(model);
        state.beta1 = b1;
        state.beta2 = b2;
        state.epsilon = eps;
    }
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double correct1 = 1.0 - std::pow(state.beta1, t);
    const double correct2 = 1.0 - std::pow(state.beta2, t);

    auto update = [&](DenseMatrix& w, const DenseMatrix& g, DenseMatrix& m, DenseMatrix& v) {
        m = state.beta1 * m + (1.0 - state.beta1) * g;
        v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
        w.array() -= lr * (m.array() / correct1) / ((v.array() / correct2).sqrt() + state.epsilon);
    };

    MlpModel next = model;
    update(next.w0, grads.dw0, state.m0, state.v0);
    update(next.w1, grads.dw1, state.m1, state.v1);
    return next;
}

}  // namespace mppr
