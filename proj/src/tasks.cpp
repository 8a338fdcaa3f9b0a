// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/tasks.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include <fmt/format.h>

#include "mppr/errors.hpp"
#include "mppr/metrics.hpp"

namespace mppr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool propagates_in_training(Ablation a) {
    return a == Ablation::Train || a == Ablation::TrainPredict;
}

bool propagates_in_prediction(Ablation a) {
    return a == Ablation::Predict || a == Ablation::TrainPredict;
}

MlpModel init_model(std::size_t features, std::size_t outputs, const TrainConfig& config, std::mt19937_64& rng) {
    MlpModel model = MlpModel::glorot(features, config.hidden, outputs, rng);
    model.dropout_rate = config.dropout;
    model.input_dropout_rate = config.input_dropout;
    model.l2_lambda = config.l2_lambda;
    return model;
}

}  // namespace

std::string to_string(Ablation a) {
    switch (a) {
    case Ablation::None:
        return "none";
    case Ablation::Train:
        return "train";
    case Ablation::Predict:
        return "predict";
    case Ablation::TrainPredict:
        return "train_predict";
    }
    return "train_predict";
}

std::optional<Ablation> parse_ablation(std::string_view s) {
    if (s == "none") {
        return Ablation::None;
    }
    if (s == "train") {
        return Ablation::Train;
    }
    if (s == "predict") {
        return Ablation::Predict;
    }
    if (s == "train_predict" || s == "train-predict" || s == "full") {
        return Ablation::TrainPredict;
    }
    return std::nullopt;
}

bool EarlyStopping::update(std::size_t epoch, double val_accuracy, double val_loss) {
    const bool better =
        !seen_ || val_accuracy > best_accuracy_ || (val_accuracy == best_accuracy_ && val_loss < best_loss_);
    if (better) {
        seen_ = true;
        best_epoch_ = epoch;
        best_accuracy_ = val_accuracy;
        best_loss_ = val_loss;
    }
    return better;
}

bool EarlyStopping::should_stop(std::size_t epoch) const {
    return seen_ && epoch >= best_epoch_ + patience_;
}

double RunReport::mean_epoch_seconds() const {
    if (epoch_seconds.empty()) {
        return 0.0;
    }
    return std::accumulate(epoch_seconds.begin(), epoch_seconds.end(), 0.0) /
           static_cast<double>(epoch_seconds.size());
}

nlohmann::json RunReport::to_json() const {
    nlohmann::json j;
    j["task"] = task;
    j["seed"] = seed;
    j["config_hash"] = config_hash;
    j["epochs"] = epochs;
    j["best_epoch"] = best_epoch;
    j["total_seconds"] = total_seconds;
    j["mean_epoch_seconds"] = mean_epoch_seconds();
    j["sparsify_threshold"] = sparsify_threshold;
    j["clamped_probabilities"] = clamped_probabilities;
    auto put_optional = [&j](const char* key, const std::optional<double>& v) {
        if (v) {
            j[key] = *v;
        }
    };
    put_optional("test_accuracy", test_accuracy);
    put_optional("test_auc", test_auc);
    put_optional("test_ap", test_ap);
    put_optional("val_auc", val_auc);
    put_optional("val_ap", val_ap);
    j["train_loss"] = train_loss;
    j["val_loss"] = val_loss;
    j["val_metric"] = val_metric;
    j["epoch_seconds"] = epoch_seconds;
    return j;
}

DenseMatrix predict_nodes(const MlpModel& model, const DenseMatrix& x, const PropagationOperator& op) {
    ForwardTrace trace = mlp_forward(model, x, ForwardMode::Eval);
    return op.apply(trace.h);
}

TrainResult train_node_classification(const Graph& g, const NodeSplit& split, const PropagationOperator& op,
                                      const TrainConfig& config, std::uint64_t seed) {
    if (!g.has_labels()) {
        throw DomainError("node classification needs labels");
    }
    if (op.size() != g.num_nodes()) {
        throw ShapeError(fmt::format("operator of size {} for a graph of {} nodes", op.size(), g.num_nodes()));
    }
    if (split.train.empty() || split.val.empty() || split.test.empty()) {
        throw SplitError("node classification needs nonempty train, validation and test sets");
    }

    const auto start = Clock::now();
    std::mt19937_64 rng(seed);
    const DenseMatrix& x = g.features();
    const auto identity = PropagationOperator::identity(g.num_nodes());
    const PropagationOperator& train_op = propagates_in_training(config.ablation) ? op : identity;
    const PropagationOperator& predict_op = propagates_in_prediction(config.ablation) ? op : identity;

    TrainResult result;
    result.model = init_model(g.num_features(), g.num_classes(), config, rng);
    result.optimizer = AdamState::zeros_like(result.model);
    result.report.task = "node_classification";
    result.report.seed = seed;
    result.report.sparsify_threshold = op.sparsify_threshold();

    MlpModel model = result.model;
    AdamState adam = result.optimizer;
    EarlyStopping stopping(config.patience);
    const NodeLoss train_loss{g.labels(), split.train};

    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        const auto epoch_start = Clock::now();
        const PropagationOperator epoch_op =
            config.edge_dropout ? train_op.with_edge_dropout(config.edge_dropout_rate, rng) : train_op;
        ForwardTrace trace = mlp_forward(model, x, ForwardMode::Train, &rng);
        attach_propagation(trace, epoch_op);
        const GradientSet grads = backward(model, trace, epoch_op, train_loss);
        model = adam_step(model, grads, adam, config.lr);

        const DenseMatrix probabilities = softmax_rows(predict_nodes(model, x, predict_op));
        const double val_loss = nll_loss(probabilities, g.labels(), split.val, &result.report.clamped_probabilities) /
                                static_cast<double>(split.val.size());
        const double val_accuracy = metric_accuracy(argmax_rows(probabilities), g.labels(), split.val);

        result.report.train_loss.push_back(grads.loss);
        result.report.val_loss.push_back(val_loss);
        result.report.val_metric.push_back(val_accuracy);
        result.report.epochs = epoch + 1;
        if (stopping.update(epoch, val_accuracy, val_loss)) {
            result.model = model;
            result.optimizer = adam;
        }
        result.report.epoch_seconds.push_back(seconds_since(epoch_start));
        if (stopping.should_stop(epoch)) {
            break;
        }
    }
    result.report.best_epoch = stopping.best_epoch();

    const DenseMatrix scores = predict_nodes(result.model, x, predict_op);
    result.report.test_accuracy = metric_accuracy(argmax_rows(scores), g.labels(), split.test);
    result.report.total_seconds = seconds_since(start);
    return result;
}

DenseMatrix embed_nodes(const MlpModel& model, const DenseMatrix& x, const PropagationOperator& op) {
    return predict_nodes(model, x, op);
}

std::vector<double> score_edges(const DenseMatrix& z, std::span<const Edge> pairs) {
    std::vector<double> scores = edge_logits(z, pairs);
    for (auto& s : scores) {
        s = sigmoid(s);
    }
    return scores;
}

LinkMetrics evaluate_links(const DenseMatrix& z, std::span<const Edge> positives, std::span<const Edge> negatives) {
    std::vector<Edge> pairs(positives.begin(), positives.end());
    pairs.insert(pairs.end(), negatives.begin(), negatives.end());
    std::vector<double> labels(positives.size(), 1.0);
    labels.resize(pairs.size(), 0.0);
    // Ranking on logits avoids ties from sigmoid saturation.
    const std::vector<double> logits = edge_logits(z, pairs);
    return {metric_auc(logits, labels), metric_ap(logits, labels)};
}

TrainResult train_link_prediction(const Graph& full, const EdgeSplit& split, const PropagationOperator& op,
                                  const TrainConfig& config, std::uint64_t seed) {
    if (op.size() != full.num_nodes()) {
        throw ShapeError(fmt::format("operator of size {} for a graph of {} nodes", op.size(), full.num_nodes()));
    }
    if (split.train.empty()) {
        throw SplitError("link prediction needs training edges");
    }
    if (config.batch_size == 0) {
        throw DomainError("batch size must be positive");
    }

    const auto start = Clock::now();
    std::mt19937_64 rng(seed);
    const DenseMatrix& x = full.features();
    const auto identity = PropagationOperator::identity(full.num_nodes());
    const PropagationOperator& train_op = propagates_in_training(config.ablation) ? op : identity;
    const PropagationOperator& predict_op = propagates_in_prediction(config.ablation) ? op : identity;

    TrainResult result;
    result.model = init_model(full.num_features(), config.embedding_dim, config, rng);
    result.optimizer = AdamState::zeros_like(result.model);
    result.report.task = "link_prediction";
    result.report.seed = seed;
    result.report.sparsify_threshold = op.sparsify_threshold();

    const bool validate = !split.val.empty() && !split.val_negatives.empty();
    std::vector<Edge> positives = split.train;
    std::vector<Edge> pairs;
    std::vector<double> targets;
    NegativeOptions negative_options;
    negative_options.undirected = true;

    MlpModel model = result.model;
    AdamState adam = result.optimizer;
    EarlyStopping stopping(config.patience);

    for (std::size_t epoch = 0; epoch < config.lp_epochs; ++epoch) {
        const auto epoch_start = Clock::now();
        std::shuffle(positives.begin(), positives.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t begin = 0; begin < positives.size(); begin += config.batch_size) {
            const std::size_t end = std::min(begin + config.batch_size, positives.size());
            pairs.assign(positives.begin() + static_cast<std::ptrdiff_t>(begin),
                         positives.begin() + static_cast<std::ptrdiff_t>(end));
            const auto negatives = sample_negatives(full, end - begin, rng, negative_options);
            pairs.insert(pairs.end(), negatives.begin(), negatives.end());
            targets.assign(end - begin, 1.0);
            targets.resize(pairs.size(), 0.0);

            const PropagationOperator epoch_op =
                config.edge_dropout ? train_op.with_edge_dropout(config.edge_dropout_rate, rng) : train_op;
            ForwardTrace trace = mlp_forward(model, x, ForwardMode::Train, &rng);
            attach_propagation(trace, epoch_op);
            const GradientSet grads = backward(model, trace, epoch_op, EdgeLoss{pairs, targets});
            model = adam_step(model, grads, adam, config.lr);
            epoch_loss += grads.loss;
        }
        result.report.train_loss.push_back(epoch_loss);
        result.report.epochs = epoch + 1;
        bool stop = false;
        if (validate) {
            const DenseMatrix z = embed_nodes(model, x, predict_op);
            const double val_auc = evaluate_links(z, split.val, split.val_negatives).auc;
            result.report.val_metric.push_back(val_auc);
            if (stopping.update(epoch, val_auc, 0.0)) {
                result.model = model;
                result.optimizer = adam;
            }
            stop = stopping.should_stop(epoch);
        } else {
            result.model = model;
            result.optimizer = adam;
        }
        result.report.epoch_seconds.push_back(seconds_since(epoch_start));
        if (stop) {
            break;
        }
    }
    if (validate) {
        result.report.best_epoch = stopping.best_epoch();
    } else if (result.report.epochs > 0) {
        result.report.best_epoch = result.report.epochs - 1;
    }

    const DenseMatrix z = embed_nodes(result.model, x, predict_op);
    if (!split.test.empty() && !split.test_negatives.empty()) {
        const auto test = evaluate_links(z, split.test, split.test_negatives);
        result.report.test_auc = test.auc;
        result.report.test_ap = test.ap;
    }
    if (validate) {
        const auto val = evaluate_links(z, split.val, split.val_negatives);
        result.report.val_auc = val.auc;
        result.report.val_ap = val.ap;
    }
    result.report.total_seconds = seconds_since(start);
    return result;
}

}  // namespace mppr
