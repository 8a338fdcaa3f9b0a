// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "mppr/graph.hpp"

namespace mppr {

/// Fraction of `nodes` whose predicted class equals the label.
double metric_accuracy(std::span<const int> predicted, std::span<const int> labels, std::span<const NodeId> nodes);

/// Row-wise argmax (first maximum wins).
std::vector<int> argmax_rows(const DenseMatrix& scores);

/// Area under the ROC curve as the Mann-Whitney rank statistic; tied
/// scores count 1/2. Throws MetricError unless both classes are present.
double metric_auc(std::span<const double> scores, std::span<const double> labels);

/// Average precision: area under the precision-recall step function,
/// sum_k (R_k - R_{k-1}) P_k over distinct score thresholds.
double metric_ap(std::span<const double> scores, std::span<const double> labels);

}  // namespace mppr
