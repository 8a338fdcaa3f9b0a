// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

// mppr command-line tool: motif, propagate, train, eval, sweep.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mppr/checkpoint.hpp"
#include "mppr/config.hpp"
#include "mppr/errors.hpp"
#include "mppr/experiment.hpp"
#include "mppr/graph.hpp"
#include "mppr/motif.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct SettingOption {
    const char* key;
    const char* help;
};

const std::vector<SettingOption> kExperimentOptions = {
    {"edges", "edge list file"},
    {"features", "feature CSV file"},
    {"labels", "label file (node classification)"},
    {"output", "output directory"},
    {"task", "nc | lp"},
    {"motif", "m1..m7 | none"},
    {"tau", "motif blend weight in [0, 1]"},
    {"alpha", "teleport probability in (0, 1]"},
    {"beta", "entrywise operator power in (0, 1]"},
    {"solver", "direct | neumann"},
    {"tol", "Neumann tolerance"},
    {"max-terms", "Neumann term limit"},
    {"dense-limit", "largest graph held as a dense operator"},
    {"symmetrize", "add reverse edges on load"},
    {"hidden", "hidden units"},
    {"dropout", "hidden-layer dropout rate"},
    {"input-dropout", "input dropout rate"},
    {"l2", "L2 weight on the first layer"},
    {"lr", "Adam learning rate"},
    {"edge-dropout", "drop operator entries during training"},
    {"edge-dropout-rate", "operator dropout rate"},
    {"ablation", "none | train | predict | train_predict"},
    {"epochs", "node classification epoch limit"},
    {"patience", "early-stopping patience"},
    {"embedding-dim", "link prediction embedding size"},
    {"batch-size", "link prediction batch size"},
    {"lp-epochs", "link prediction epochs"},
    {"train-per-class", "labeled training nodes per class"},
    {"val-size", "validation nodes"},
    {"seed", "base seed"},
    {"runs", "independent runs"},
    {"reshuffle", "new split for every run"},
    {"threads", "worker threads (0 = all cores)"},
    {"checkpoint", "model checkpoint path"},
};

struct ExperimentFlags {
    std::string config_file;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
};

void add_experiment_options(CLI::App* app, ExperimentFlags& flags) {
    app->add_option("--config", flags.config_file, "key = value config file");
    for (const auto& opt : kExperimentOptions) {
        flags.options[opt.key] = app->add_option(fmt::format("--{}", opt.key), flags.values[opt.key], opt.help);
    }
}

// Defaults, then the config file, then explicit flags.
mppr::ExperimentConfig resolve_config(const ExperimentFlags& flags) {
    mppr::ExperimentConfig config;
    if (!flags.config_file.empty()) {
        mppr::apply_config_file(config, flags.config_file);
    }
    for (const auto& [key, option] : flags.options) {
        if (option->count() > 0) {
            mppr::apply_setting(config, key, flags.values.at(key));
        }
    }
    config.validate();
    return config;
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw mppr::IoError(fmt::format("cannot write {}", path.string()));
    }
    body(out);
}

std::string storage_name(mppr::PropagationOperator::Storage s) {
    switch (s) {
    case mppr::PropagationOperator::Storage::Identity:
        return "identity";
    case mppr::PropagationOperator::Storage::Dense:
        return "dense";
    case mppr::PropagationOperator::Storage::Sparse:
        return "sparse";
    case mppr::PropagationOperator::Storage::LazyNeumann:
        return "lazy";
    }
    return "dense";
}

struct MotifArgs {
    std::string edges;
    std::string motif = "m7";
    std::string out = ".";
    double tau = -1.0;
    bool symmetrize = false;
};

int cmd_motif(const MotifArgs& args) {
    std::ifstream in(args.edges);
    if (!in) {
        throw mppr::IoError(fmt::format("cannot open edge list {}", args.edges));
    }
    auto [n, edges] = mppr::parse_edge_list(in);
    mppr::Graph g(n, std::move(edges));
    if (args.symmetrize) {
        g = mppr::symmetrize(g);
    }
    std::vector<mppr::MotifId> motifs;
    if (args.motif == "all") {
        motifs.assign(mppr::kAllMotifs.begin(), mppr::kAllMotifs.end());
    } else if (const auto m = mppr::parse_motif(args.motif)) {
        motifs.push_back(*m);
    } else {
        throw mppr::ConfigError(fmt::format("motif: expected m1..m7 or all, got '{}'", args.motif));
    }
    if (args.tau != -1.0 && !(args.tau >= 0.0 && args.tau <= 1.0)) {
        throw mppr::ConfigError(fmt::format("tau must lie in [0, 1], got {}", args.tau));
    }

    const mppr::SparseMatrix a = mppr::to_adjacency(g);
    const auto split = mppr::split_uni_bi(a);
    for (const auto m : motifs) {
        const auto am = mppr::motif_adjacency(split, m);
        const fs::path path = fs::path(args.out) / fmt::format("A_{}.txt", mppr::to_string(m));
        write_text(path, [&](std::ostream& out) { mppr::write_matrix_dump(out, am.matrix); });
        nlohmann::json line = {{"motif", mppr::to_string(m)},
                               {"path", path.string()},
                               {"nodes", n},
                               {"nnz", am.matrix.nnz()},
                               {"symmetric", am.matrix.is_symmetric(0.0)}};
        if (args.tau >= 0.0) {
            const auto theta = mppr::blend(a, am, args.tau);
            const fs::path blend_path = fs::path(args.out) / fmt::format("blend_{}.txt", mppr::to_string(m));
            write_text(blend_path, [&](std::ostream& out) { mppr::write_matrix_dump(out, theta.matrix); });
            line["blend_path"] = blend_path.string();
            line["blend_nnz"] = theta.matrix.nnz();
        }
        std::cout << line.dump() << '\n';
    }
    return kExitOk;
}

struct PropagateArgs {
    std::string dump;
    std::string input;
    std::string result;
};

int cmd_propagate(const ExperimentFlags& flags, const PropagateArgs& args) {
    mppr::ExperimentConfig config = resolve_config(flags);
    if (config.edges.empty()) {
        throw mppr::ConfigError("--edges is required");
    }
    std::ifstream in(config.edges);
    if (!in) {
        throw mppr::IoError(fmt::format("cannot open edge list {}", config.edges));
    }
    auto [n, edges] = mppr::parse_edge_list(in);
    mppr::Graph g(n, std::move(edges));
    if (config.symmetrize) {
        g = mppr::symmetrize(g);
    }
    const auto op = mppr::build_operator(g, config);
    nlohmann::json summary = {{"nodes", n},
                              {"storage", storage_name(op.storage())},
                              {"alpha", op.alpha()},
                              {"beta", op.beta()},
                              {"sparsify_threshold", op.sparsify_threshold()}};
    if (!args.dump.empty()) {
        write_text(args.dump, [&](std::ostream& out) {
            if (const auto* s = op.sparse_matrix()) {
                mppr::write_matrix_dump(out, *s);
            } else {
                mppr::write_matrix_dump(out, op.to_dense());
            }
        });
        summary["dump"] = args.dump;
    }
    if (!args.input.empty()) {
        std::ifstream h_in(args.input);
        if (!h_in) {
            throw mppr::IoError(fmt::format("cannot open input matrix {}", args.input));
        }
        const mppr::DenseMatrix h = mppr::parse_features(h_in);
        const mppr::DenseMatrix z = mppr::propagate(op, h);
        if (args.result.empty()) {
            mppr::write_features(std::cout, z);
        } else {
            write_text(args.result, [&](std::ostream& out) { mppr::write_features(out, z); });
            summary["result"] = args.result;
        }
    }
    std::cerr << summary.dump() << '\n';
    return kExitOk;
}

int cmd_train(const ExperimentFlags& flags) {
    const mppr::ExperimentConfig config = resolve_config(flags);
    const mppr::Graph g = mppr::load_experiment_graph(config);
    const auto result = mppr::run_experiment(g, config);
    const std::string stem = fmt::format("train-{}", result.config_hash);
    mppr::write_experiment(result, config.output, stem);
    if (!config.checkpoint.empty() && result.first) {
        nlohmann::json hyper = {{"config", config.to_json()}, {"config_hash", result.config_hash}};
        mppr::save_checkpoint(config.checkpoint, {result.first->model, result.first->optimizer}, hyper);
    }
    std::cout << result.aggregate.dump() << '\n';
    return kExitOk;
}

int cmd_eval(const ExperimentFlags& flags) {
    std::string checkpoint = flags.values.at("checkpoint");
    if (checkpoint.empty()) {
        throw mppr::ConfigError("--checkpoint is required");
    }
    const fs::path sidecar = checkpoint + ".json";
    std::ifstream side(sidecar);
    if (!side) {
        throw mppr::IoError(fmt::format("cannot open checkpoint sidecar {}", sidecar.string()));
    }
    nlohmann::json hyper;
    try {
        hyper = nlohmann::json::parse(side);
    } catch (const nlohmann::json::exception& e) {
        throw mppr::ParseError(fmt::format("{}: {}", sidecar.string(), e.what()), 0);
    }
    mppr::ExperimentConfig config = mppr::config_from_json(hyper.at("config"));
    // Paths may be overridden, e.g. after moving the dataset.
    for (const char* key : {"edges", "features", "labels"}) {
        if (flags.options.at(key)->count() > 0) {
            mppr::apply_setting(config, key, flags.values.at(key));
        }
    }
    config.validate();
    const auto ckpt = mppr::load_checkpoint(checkpoint);
    const mppr::Graph g = mppr::load_experiment_graph(config);
    std::cout << mppr::evaluate_model(g, config, ckpt.model).dump() << '\n';
    return kExitOk;
}

struct SweepArgs {
    std::vector<double> taus{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> betas{0.25, 0.5, 0.75, 1.0};
};

int cmd_sweep(const ExperimentFlags& flags, const SweepArgs& args) {
    if (args.taus.empty() || args.betas.empty()) {
        throw mppr::ConfigError("sweep grids must not be empty");
    }
    const mppr::ExperimentConfig base = resolve_config(flags);
    const mppr::Graph g = mppr::load_experiment_graph(base);
    std::vector<nlohmann::json> records;
    for (const double tau : args.taus) {
        for (const double beta : args.betas) {
            mppr::ExperimentConfig config = base;
            config.tau = tau;
            config.beta = beta;
            config.validate();
            const auto result = mppr::run_experiment(g, config);
            nlohmann::json record = result.aggregate;
            record["tau"] = tau;
            record["beta"] = beta;
            std::cout << record.dump() << '\n';
            records.push_back(std::move(record));
        }
    }
    const fs::path path = fs::path(base.output) / fmt::format("sweep-{}.jsonl", base.hash());
    write_text(path, [&](std::ostream& out) {
        for (const auto& r : records) {
            out << r.dump() << '\n';
        }
    });
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Motif-based personalized PageRank propagation for graph learning"};
    app.require_subcommand(1);

    MotifArgs motif_args;
    auto* motif = app.add_subcommand("motif", "Write motif adjacency matrices");
    motif->add_option("--edges", motif_args.edges, "edge list file")->required();
    motif->add_option("--motif", motif_args.motif, "m1..m7 | all");
    motif->add_option("--out", motif_args.out, "output directory");
    motif->add_option("--tau", motif_args.tau, "also write the blend with this weight");
    motif->add_flag("--symmetrize", motif_args.symmetrize, "add reverse edges on load");

    ExperimentFlags propagate_flags;
    PropagateArgs propagate_args;
    auto* propagate = app.add_subcommand("propagate", "Build the propagation operator and apply it");
    add_experiment_options(propagate, propagate_flags);
    propagate->add_option("--dump", propagate_args.dump, "write the operator in matrix dump format");
    propagate->add_option("--input", propagate_args.input, "CSV matrix H to propagate");
    propagate->add_option("--result", propagate_args.result, "CSV output for op * H (default stdout)");

    ExperimentFlags train_flags;
    auto* train = app.add_subcommand("train", "Train and write run records");
    add_experiment_options(train, train_flags);

    ExperimentFlags eval_flags;
    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on its split");
    add_experiment_options(eval, eval_flags);

    ExperimentFlags sweep_flags;
    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Grid over tau and beta");
    add_experiment_options(sweep, sweep_flags);
    sweep->add_option("--taus", sweep_args.taus, "tau grid")->delimiter(',');
    sweep->add_option("--betas", sweep_args.betas, "beta grid")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (motif->parsed()) {
            return cmd_motif(motif_args);
        }
        if (propagate->parsed()) {
            return cmd_propagate(propagate_flags, propagate_args);
        }
        if (train->parsed()) {
            return cmd_train(train_flags);
        }
        if (eval->parsed()) {
            return cmd_eval(eval_flags);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_flags, sweep_args);
        }
    } catch (const mppr::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const mppr::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}
