// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "mppr/graph.hpp"
#include "mppr/propagation.hpp"
#include "mppr/sparse_matrix.hpp"

namespace mppr {

/// Two-layer feature transformer H = Dropout(ReLU(Dropout_in(X) W0)) W1.
struct MlpModel {
    DenseMatrix w0;  // f x h
    DenseMatrix w1;  // h x c
    double dropout_rate = 0.5;
    /// Dropout on the input features; 0 disables it.
    double input_dropout_rate = 0.0;
    /// L2 penalty on W0 only.
    double l2_lambda = 0.005;

    std::size_t num_features() const noexcept { return static_cast<std::size_t>(w0.rows()); }
    std::size_t hidden() const noexcept { return static_cast<std::size_t>(w0.cols()); }
    std::size_t num_outputs() const noexcept { return static_cast<std::size_t>(w1.cols()); }

    /// Glorot-uniform weights drawn from `rng`.
    static MlpModel glorot(std::size_t features, std::size_t hidden, std::size_t outputs, std::mt19937_64& rng);
};

enum class ForwardMode { Train, Eval };

/// Scaled keep masks (entries 0 or 1/(1-rate)); an empty mask means the
/// corresponding dropout is inactive. The input mask holds one factor per
/// nonzero of X in row-major order, since dropping a zero is a no-op.
struct DropoutMasks {
    std::vector<double> input;
    DenseMatrix hidden;
};

/// Everything the backward pass needs.
struct ForwardTrace {
    DropoutMasks masks;
    SparseMatrix input;          // Dropout_in(X), row-compressed
    DenseMatrix pre_activation;  // Dropout_in(X) W0
    DenseMatrix hidden;          // after ReLU and dropout
    DenseMatrix h;               // f_theta(X)
    DenseMatrix z;               // op * H, filled by attach_propagation
    bool propagated = false;
};

/// Train mode samples fresh masks from `rng` (required in that mode) and
/// uses inverted scaling; eval mode applies no dropout.
ForwardTrace mlp_forward(const MlpModel& model, const DenseMatrix& x, ForwardMode mode,
                         std::mt19937_64* rng = nullptr);

/// Forward pass reusing previously sampled masks.
ForwardTrace mlp_forward(const MlpModel& model, const DenseMatrix& x, const DropoutMasks& masks);

/// Sets trace.z = op * trace.h.
void attach_propagation(ForwardTrace& trace, const PropagationOperator& op);

/// Row-wise softmax with max subtraction.
DenseMatrix softmax_rows(const DenseMatrix& z);

/// -sum over `nodes` of log P[v][label_v]. Probabilities below 1e-15 are
/// clamped; `clamped`, when given, counts how often that happened.
double nll_loss(const DenseMatrix& probabilities, std::span<const int> labels, std::span<const NodeId> nodes,
                std::size_t* clamped = nullptr);

/// Binary cross-entropy in the stable logits form
/// max(s, 0) - s y + log(1 + exp(-|s|)), summed.
double bce_loss_logits(std::span<const double> logits, std::span<const double> targets);

/// Binary cross-entropy from probabilities, -sum y log p + (1-y) log(1-p).
double bce_loss(std::span<const double> probabilities, std::span<const double> targets);

double sigmoid(double s);

/// Dot-product decoder logits z_u . z_v.
std::vector<double> edge_logits(const DenseMatrix& z, std::span<const Edge> pairs);

/// Cross-entropy over labeled training nodes (Z rows are class scores).
struct NodeLoss {
    std::span<const int> labels;
    std::span<const NodeId> nodes;
};

/// Binary cross-entropy over candidate pairs scored by the dot-product
/// decoder (Z rows are embeddings).
struct EdgeLoss {
    std::span<const Edge> pairs;
    std::span<const double> targets;
};

using LossSpec = std::variant<NodeLoss, EdgeLoss>;

struct GradientSet {
    DenseMatrix dw0;
    DenseMatrix dw1;
    /// Task loss plus (lambda / 2) ||W0||^2.
    double loss = 0.0;
};

/// Task loss plus the L2 penalty for a propagated trace.
double objective(const MlpModel& model, const ForwardTrace& trace, const LossSpec& loss);

/// Analytic gradients of `objective`: dZ is pulled back through the
/// propagation as op^T dZ, then through W1, the dropout mask, ReLU, and W0.
GradientSet backward(const MlpModel& model, const ForwardTrace& trace, const PropagationOperator& op,
                     const LossSpec& loss);

struct AdamState {
    DenseMatrix m0, v0, m1, v1;
    std::size_t step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState zeros_like(const MlpModel& model);
};

MlpModel adam_step(const MlpModel& model, const GradientSet& grads, AdamState& state, double lr);

}  // namespace mppr
