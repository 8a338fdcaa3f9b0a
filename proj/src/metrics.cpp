// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/metrics.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "mppr/errors.hpp"

namespace mppr {

namespace {

struct ClassCounts {
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

ClassCounts check_binary(std::span<const double> scores, std::span<const double> labels) {
    if (scores.size() != labels.size()) {
        throw ShapeError(fmt::format("{} scores but {} labels", scores.size(), labels.size()));
    }
    ClassCounts counts;
    for (const double y : labels) {
        if (y == 1.0) {
            ++counts.positives;
        } else if (y == 0.0) {
            ++counts.negatives;
        } else {
            throw MetricError(fmt::format("binary labels must be 0 or 1, got {}", y));
        }
    }
    if (counts.positives == 0 || counts.negatives == 0) {
        throw MetricError("metric needs both positive and negative labels");
    }
    return counts;
}

std::vector<std::size_t> order_by_score(std::span<const double> scores, bool descending) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return descending ? scores[a] > scores[b] : scores[a] < scores[b];
    });
    return order;
}

}  // namespace

double metric_accuracy(std::span<const int> predicted, std::span<const int> labels, std::span<const NodeId> nodes) {
    if (nodes.empty()) {
        throw MetricError("accuracy over an empty node set");
    }
    std::size_t correct = 0;
    for (const auto v : nodes) {
        if (v >= predicted.size() || v >= labels.size()) {
            throw IndexError(fmt::format("node {} has no prediction or label", v));
        }
        correct += predicted[v] == labels[v] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

std::vector<int> argmax_rows(const DenseMatrix& scores) {
    std::vector<int> out(static_cast<std::size_t>(scores.rows()));
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
        Eigen::Index best = 0;
        scores.row(r).maxCoeff(&best);
        out[static_cast<std::size_t>(r)] = static_cast<int>(best);
    }
    return out;
}

double metric_auc(std::span<const double> scores, std::span<const double> labels) {
    const auto counts = check_binary(scores, labels);
    const auto order = order_by_score(scores, false);
    // Sum of (1-based, tie-averaged) ranks of the positives.
    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::size_t tied_positives = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            tied_positives += labels[order[j]] == 1.0 ? 1 : 0;
            ++j;
        }
        const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);
        positive_rank_sum += mean_rank * static_cast<double>(tied_positives);
        i = j;
    }
    const auto p = static_cast<double>(counts.positives);
    const auto n = static_cast<double>(counts.negatives);
    return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

double metric_ap(std::span<const double> scores, std::span<const double> labels) {
    const auto counts = check_binary(scores, labels);
    const auto order = order_by_score(scores, true);
    const auto total_positives = static_cast<double>(counts.positives);
    double ap = 0.0;
    double previous_recall = 0.0;
    std::size_t true_positives = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            true_positives += labels[order[j]] == 1.0 ? 1 : 0;
            ++j;
        }
        const double precision = static_cast<double>(true_positives) / static_cast<double>(j);
        const double recall = static_cast<double>(true_positives) / total_positives;
        ap += (recall - previous_recall) * precision;
        previous_recall = recall;
        i = j;
    }
    return ap;
}

}  // namespace mppr
