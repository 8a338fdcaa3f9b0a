// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mppr/neural.hpp"
#include "mppr/propagation.hpp"
#include "mppr/splits.hpp"

namespace mppr {

/// Where the propagation operator is used.
enum class Ablation {
    None,          // plain MLP
    Train,         // propagate while training, predict without
    Predict,       // train a plain MLP, propagate its predictions
    TrainPredict,  // full pipeline
};

std::string to_string(Ablation a);
std::optional<Ablation> parse_ablation(std::string_view s);

struct TrainConfig {
    std::size_t hidden = 64;
    double dropout = 0.5;
    double input_dropout = 0.5;
    double l2_lambda = 0.005;
    double lr = 1e-3;
    /// Bernoulli dropout on the operator entries, resampled every epoch.
    bool edge_dropout = true;
    double edge_dropout_rate = 0.5;
    Ablation ablation = Ablation::TrainPredict;

    // Node classification
    std::size_t max_epochs = 10000;
    /// Early-stopping patience for both tasks.
    std::size_t patience = 100;

    // Link prediction
    std::size_t embedding_dim = 64;
    std::size_t batch_size = 1024;
    std::size_t lp_epochs = 1000;
};

/// Early stopping on validation accuracy, ties broken by validation loss.
class EarlyStopping {
public:
    explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

    /// Records an epoch; returns true when it is the new best.
    bool update(std::size_t epoch, double val_accuracy, double val_loss);
    bool should_stop(std::size_t epoch) const;

    std::size_t best_epoch() const noexcept { return best_epoch_; }
    double best_accuracy() const noexcept { return best_accuracy_; }
    double best_loss() const noexcept { return best_loss_; }

private:
    std::size_t patience_;
    std::size_t best_epoch_ = 0;
    double best_accuracy_ = -1.0;
    double best_loss_ = 0.0;
    bool seen_ = false;
};

struct RunReport {
    std::string task;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::size_t epochs = 0;
    std::size_t best_epoch = 0;
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::vector<double> val_metric;
    std::vector<double> epoch_seconds;
    double total_seconds = 0.0;
    std::optional<double> test_accuracy;
    std::optional<double> test_auc;
    std::optional<double> test_ap;
    std::optional<double> val_auc;
    std::optional<double> val_ap;
    /// Operator sparsification level (0 when the operator is exact).
    double sparsify_threshold = 0.0;
    std::size_t clamped_probabilities = 0;

    double mean_epoch_seconds() const;
    nlohmann::json to_json() const;
};

struct TrainResult {
    MlpModel model;
    AdamState optimizer;
    RunReport report;
};

/// Full-batch training of the propagated MLP on the cross-entropy of the
/// training nodes plus L2 on W0, with early stopping and restoration of
/// the best snapshot. `op` must be built from the same graph.
TrainResult train_node_classification(const Graph& g, const NodeSplit& split, const PropagationOperator& op,
                                      const TrainConfig& config, std::uint64_t seed);

/// Class scores for every node: op * f_theta(X) in eval mode.
DenseMatrix predict_nodes(const MlpModel& model, const DenseMatrix& x, const PropagationOperator& op);

/// Mini-batch training of the propagated MLP encoder with the dot-product
/// decoder. `op` must be built from the training edges only; training
/// negatives are redrawn every batch from the non-edges of `full`. With a
/// validation split, stops early on validation AUC and restores the best
/// snapshot.
TrainResult train_link_prediction(const Graph& full, const EdgeSplit& split, const PropagationOperator& op,
                                  const TrainConfig& config, std::uint64_t seed);

/// Embeddings op * f_theta(X) in eval mode.
DenseMatrix embed_nodes(const MlpModel& model, const DenseMatrix& x, const PropagationOperator& op);

/// sigma(z_u . z_v) for each pair.
std::vector<double> score_edges(const DenseMatrix& z, std::span<const Edge> pairs);

struct LinkMetrics {
    double auc = 0.0;
    double ap = 0.0;
};

LinkMetrics evaluate_links(const DenseMatrix& z, std::span<const Edge> positives, std::span<const Edge> negatives);

}  // namespace mppr
