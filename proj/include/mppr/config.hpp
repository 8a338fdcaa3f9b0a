// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mppr/motif.hpp"
#include "mppr/ppr.hpp"
#include "mppr/tasks.hpp"

namespace mppr {

enum class Task { NodeClassification, LinkPrediction };

std::string to_string(Task t);
/// Accepts "nc", "node-classification", "lp", "link-prediction".
std::optional<Task> parse_task(std::string_view s);

struct ExperimentConfig {
    std::string edges;
    std::string features;
    std::string labels;
    /// Output directory for run records; empty means the current directory.
    std::string output;
    std::string checkpoint;

    Task task = Task::NodeClassification;
    /// nullopt runs the plain edge PPR operator.
    std::optional<MotifId> motif = MotifId::M7;
    double tau = 0.9;
    double alpha = 0.1;
    double beta = 0.5;
    SolverKind solver = SolverKind::Direct;
    /// Graphs above this size get sparse or lazy operators.
    std::size_t dense_limit = 4096;
    std::size_t max_terms = 1000;
    double tol = 1e-6;
    bool symmetrize = false;

    TrainConfig train;
    /// Unset means on for node classification and off for link prediction.
    std::optional<bool> edge_dropout;

    std::size_t train_per_class = 20;
    std::size_t val_size = 500;

    std::uint64_t seed = 0;
    std::size_t runs = 1;
    /// Draw a fresh split for every run instead of only reseeding the model.
    bool reshuffle = true;
    /// Worker threads for independent runs; 0 picks the hardware count.
    std::size_t threads = 0;

    /// Throws ConfigError on any out-of-range value.
    void validate() const;

    /// Training settings with task-dependent defaults resolved.
    TrainConfig resolved_train() const;

    /// Canonical form; the output directory, checkpoint path and thread
    /// count are left out because they do not change any metric.
    nlohmann::json to_json() const;

    /// 16 hex digits of FNV-1a over the canonical JSON dump.
    std::string hash() const;
};

/// Sets one option by key, as written in a config file ("tau", "motif",
/// "lr", ...). Throws ConfigError for unknown keys or bad values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Reads `key = value` lines; '#' starts a comment, values may be quoted.
/// [section] headers are accepted and ignored.
void apply_config_text(ExperimentConfig& config, std::string_view text);
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

/// Rebuilds a config from to_json() output.
ExperimentConfig config_from_json(const nlohmann::json& j);

std::string fnv1a_hex(std::string_view data);

}  // namespace mppr
