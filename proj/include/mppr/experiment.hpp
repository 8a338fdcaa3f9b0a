// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "mppr/config.hpp"
#include "mppr/graph.hpp"
#include "mppr/propagation.hpp"
#include "mppr/splits.hpp"
#include "mppr/tasks.hpp"

namespace mppr {

/// Degree-normalized transition matrix of the blend (1-tau) A + tau A^M,
/// or of A alone when no motif is given.
SparseMatrix transition_matrix(const Graph& g, std::optional<MotifId> motif, double tau);

OperatorOptions operator_options(const ExperimentConfig& config);

/// Propagation operator of `g` under the config's motif, tau, alpha and beta.
PropagationOperator build_operator(const Graph& g, const ExperimentConfig& config);

/// Loads the configured files. Link prediction keeps the largest
/// (weakly) connected component.
Graph load_experiment_graph(const ExperimentConfig& config);

struct RunSeeds {
    std::uint64_t split = 0;
    std::uint64_t model = 0;
};

/// Seeds of run `index`; the split seed stays fixed when reshuffling is off.
RunSeeds run_seeds(const ExperimentConfig& config, std::size_t index);

/// Everything one run needs besides the model.
struct RunSetup {
    std::optional<NodeSplit> node_split;
    std::optional<EdgeSplit> edge_split;
    PropagationOperator op;
};

/// Builds the split and operator of run `index`. `shared_op` is reused
/// when given and the task allows it.
RunSetup prepare_run(const Graph& g, const ExperimentConfig& config, std::size_t index,
                     const PropagationOperator* shared_op = nullptr);

struct ExperimentResult {
    std::string config_hash;
    std::vector<RunReport> runs;
    /// Trained model of the first run.
    std::optional<TrainResult> first;
    nlohmann::json aggregate;
};

/// Runs config.runs independent trainings on worker threads. Results do
/// not depend on the thread count.
ExperimentResult run_experiment(const Graph& g, const ExperimentConfig& config);

/// Mean, variance and standard deviation of every reported test and
/// validation metric, plus timing and epoch summaries.
nlohmann::json aggregate_reports(std::span<const RunReport> runs, const ExperimentConfig& config);

/// Writes `<stem>.jsonl` (one record per run) and `<stem>.json` (aggregate).
void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir, const std::string& stem);

/// Metrics of a trained model on the split of run 0 of `config`.
nlohmann::json evaluate_model(const Graph& g, const ExperimentConfig& config, const MlpModel& model);

}  // namespace mppr
