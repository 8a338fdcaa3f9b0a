// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "mppr/errors.hpp"
#include "mppr/metrics.hpp"
#include "mppr/motif.hpp"
#include "mppr/random.hpp"

namespace mppr {

SparseMatrix transition_matrix(const Graph& g, std::optional<MotifId> motif, double tau) {
    const SparseMatrix a = to_adjacency(g);
    if (!motif) {
        return normalize_sym(a);
    }
    return normalize_sym(blend(a, motif_adjacency(a, *motif), tau).matrix);
}

OperatorOptions operator_options(const ExperimentConfig& config) {
    OperatorOptions options;
    options.alpha = config.alpha;
    options.beta = config.beta;
    options.solver.kind = config.solver;
    options.solver.neumann.max_terms = config.max_terms;
    options.solver.neumann.tol = config.tol;
    options.dense_limit = config.dense_limit;
    return options;
}

PropagationOperator build_operator(const Graph& g, const ExperimentConfig& config) {
    return build_propagation(transition_matrix(g, config.motif, config.tau), operator_options(config));
}

Graph load_experiment_graph(const ExperimentConfig& config) {
    if (config.edges.empty() || config.features.empty()) {
        throw ConfigError("edges and features paths are required");
    }
    if (config.task == Task::NodeClassification && config.labels.empty()) {
        throw ConfigError("node classification needs a labels path");
    }
    std::optional<std::filesystem::path> labels;
    if (!config.labels.empty()) {
        labels = config.labels;
    }
    Graph g = load_graph(config.edges, config.features, labels, LoadOptions{config.symmetrize});
    if (config.task == Task::LinkPrediction) {
        const auto keep = largest_component(g);
        if (keep.size() != g.num_nodes()) {
            g = induced_subgraph(g, keep);
        }
    }
    return g;
}

RunSeeds run_seeds(const ExperimentConfig& config, std::size_t index) {
    RunSeeds seeds;
    seeds.split = derive_seed(config.seed, config.reshuffle ? 2 * index : 0);
    seeds.model = derive_seed(config.seed, 2 * index + 1);
    return seeds;
}

namespace {

bool uses_operator(const ExperimentConfig& config) {
    return config.train.ablation != Ablation::None;
}

// The operator is shared across runs unless each run trains on its own
// edge split.
bool operator_is_shared(const ExperimentConfig& config) {
    return config.task == Task::NodeClassification || !config.reshuffle;
}

PropagationOperator shared_operator(const Graph& g, const ExperimentConfig& config) {
    if (!uses_operator(config)) {
        return PropagationOperator::identity(g.num_nodes());
    }
    if (config.task == Task::NodeClassification) {
        return build_operator(g, config);
    }
    const auto split = split_edges(g, kDefaultEdgeRatios, run_seeds(config, 0).split);
    return build_operator(restrict_to_edges(g, split.train), config);
}

double variance(std::span<const double> xs, double mean) {
    if (xs.size() < 2) {
        return 0.0;
    }
    double s = 0.0;
    for (const double x : xs) {
        s += (x - mean) * (x - mean);
    }
    return s / static_cast<double>(xs.size() - 1);
}

}  // namespace

RunSetup prepare_run(const Graph& g, const ExperimentConfig& config, std::size_t index,
                     const PropagationOperator* shared_op) {
    RunSetup setup;
    const auto seeds = run_seeds(config, index);
    if (config.task == Task::NodeClassification) {
        setup.node_split = split_nodes(g, config.train_per_class, config.val_size, seeds.split);
    } else {
        setup.edge_split = split_edges(g, kDefaultEdgeRatios, seeds.split);
    }
    if (shared_op != nullptr && operator_is_shared(config)) {
        setup.op = *shared_op;
    } else if (!uses_operator(config)) {
        setup.op = PropagationOperator::identity(g.num_nodes());
    } else if (config.task == Task::NodeClassification) {
        setup.op = build_operator(g, config);
    } else {
        setup.op = build_operator(restrict_to_edges(g, setup.edge_split->train), config);
    }
    return setup;
}

ExperimentResult run_experiment(const Graph& g, const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    result.config_hash = config.hash();
    const TrainConfig train = config.resolved_train();

    std::optional<PropagationOperator> shared;
    if (operator_is_shared(config)) {
        shared = shared_operator(g, config);
    }

    std::vector<std::optional<TrainResult>> outcomes(config.runs);
    std::vector<std::exception_ptr> errors(config.runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < config.runs; i = next++) {
            try {
                const RunSetup setup = prepare_run(g, config, i, shared ? &*shared : nullptr);
                const auto seed = run_seeds(config, i).model;
                TrainResult r = config.task == Task::NodeClassification
                                    ? train_node_classification(g, *setup.node_split, setup.op, train, seed)
                                    : train_link_prediction(g, *setup.edge_split, setup.op, train, seed);
                r.report.config_hash = result.config_hash;
                outcomes[i] = std::move(r);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    std::size_t threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, config.runs);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    result.runs.reserve(config.runs);
    for (auto& o : outcomes) {
        result.runs.push_back(o->report);
    }
    result.first = std::move(outcomes.front());
    result.aggregate = aggregate_reports(result.runs, config);
    return result;
}

nlohmann::json aggregate_reports(std::span<const RunReport> runs, const ExperimentConfig& config) {
    nlohmann::json j;
    j["config_hash"] = config.hash();
    j["config"] = config.to_json();
    j["runs"] = runs.size();

    auto summarize = [&](const char* name, auto getter) {
        std::vector<double> xs;
        for (const auto& r : runs) {
            if (const std::optional<double> v = getter(r)) {
                xs.push_back(*v);
            }
        }
        if (xs.empty()) {
            return;
        }
        double mean = 0.0;
        for (const double x : xs) {
            mean += x;
        }
        mean /= static_cast<double>(xs.size());
        const double var = variance(xs, mean);
        j[name] = {{"mean", mean}, {"variance", var}, {"std", std::sqrt(var)}};
    };
    summarize("test_accuracy", [](const RunReport& r) { return r.test_accuracy; });
    summarize("test_auc", [](const RunReport& r) { return r.test_auc; });
    summarize("test_ap", [](const RunReport& r) { return r.test_ap; });
    summarize("val_auc", [](const RunReport& r) { return r.val_auc; });
    summarize("val_ap", [](const RunReport& r) { return r.val_ap; });
    summarize("epochs", [](const RunReport& r) { return std::optional<double>(static_cast<double>(r.epochs)); });
    summarize("total_seconds", [](const RunReport& r) { return std::optional<double>(r.total_seconds); });
    summarize("epoch_seconds", [](const RunReport& r) { return std::optional<double>(r.mean_epoch_seconds()); });
    return j;
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir, const std::string& stem) {
    if (!dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) {
            throw IoError(fmt::format("cannot create output directory {}: {}", dir.string(), ec.message()));
        }
    }
    const auto runs_path = dir / (stem + ".jsonl");
    std::ofstream runs(runs_path);
    if (!runs) {
        throw IoError(fmt::format("cannot write {}", runs_path.string()));
    }
    for (const auto& r : result.runs) {
        runs << r.to_json().dump() << '\n';
    }
    const auto aggregate_path = dir / (stem + ".json");
    std::ofstream aggregate(aggregate_path);
    if (!aggregate) {
        throw IoError(fmt::format("cannot write {}", aggregate_path.string()));
    }
    aggregate << result.aggregate.dump(2) << '\n';
}

nlohmann::json evaluate_model(const Graph& g, const ExperimentConfig& config, const MlpModel& model) {
    config.validate();
    const RunSetup setup = prepare_run(g, config, 0);
    const bool propagate_predictions =
        config.train.ablation == Ablation::Predict || config.train.ablation == Ablation::TrainPredict;
    const PropagationOperator op = propagate_predictions ? setup.op : PropagationOperator::identity(g.num_nodes());

    nlohmann::json j;
    j["config_hash"] = config.hash();
    j["task"] = to_string(config.task);
    if (config.task == Task::NodeClassification) {
        const auto predicted = argmax_rows(predict_nodes(model, g.features(), op));
        j["val_accuracy"] = metric_accuracy(predicted, g.labels(), setup.node_split->val);
        j["test_accuracy"] = metric_accuracy(predicted, g.labels(), setup.node_split->test);
    } else {
        const DenseMatrix z = embed_nodes(model, g.features(), op);
        const auto& split = *setup.edge_split;
        const auto val = evaluate_links(z, split.val, split.val_negatives);
        const auto test = evaluate_links(z, split.test, split.test_negatives);
        j["val_auc"] = val.auc;
        j["val_ap"] = val.ap;
        j["test_auc"] = test.auc;
        j["test_ap"] = test.ap;
    }
    return j;
}

}  // namespace mppr
