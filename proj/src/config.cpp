// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "mppr/errors.hpp"

namespace mppr {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
        throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, value));
    }
    return out;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view value) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError(fmt::format("{}: expected a nonnegative integer, got '{}'", key, value));
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no" || value == "off") {
        return false;
    }
    throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, value));
}

std::string solver_name(SolverKind k) {
    return k == SolverKind::Direct ? "direct" : "neumann";
}

void check_range(bool ok, std::string_view what) {
    if (!ok) {
        throw ConfigError(std::string(what));
    }
}

}  // namespace

std::string to_string(Task t) {
    return t == Task::NodeClassification ? "node-classification" : "link-prediction";
}

std::optional<Task> parse_task(std::string_view s) {
    if (s == "nc" || s == "node-classification" || s == "node_classification") {
        return Task::NodeClassification;
    }
    if (s == "lp" || s == "link-prediction" || s == "link_prediction") {
        return Task::LinkPrediction;
    }
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    check_range(tau >= 0.0 && tau <= 1.0, fmt::format("tau must lie in [0, 1], got {}", tau));
    check_range(alpha > 0.0 && alpha <= 1.0, fmt::format("alpha must lie in (0, 1], got {}", alpha));
    check_range(beta > 0.0 && beta <= 1.0, fmt::format("beta must lie in (0, 1], got {}", beta));
    check_range(runs >= 1, "runs must be at least 1");
    check_range(max_terms >= 1, "max-terms must be at least 1");
    check_range(tol > 0.0, fmt::format("tol must be positive, got {}", tol));
    check_range(train.hidden >= 1, "hidden must be at least 1");
    check_range(train.dropout >= 0.0 && train.dropout < 1.0,
                fmt::format("dropout must lie in [0, 1), got {}", train.dropout));
    check_range(train.input_dropout >= 0.0 && train.input_dropout < 1.0,
                fmt::format("input-dropout must lie in [0, 1), got {}", train.input_dropout));
    check_range(train.edge_dropout_rate >= 0.0 && train.edge_dropout_rate < 1.0,
                fmt::format("edge-dropout-rate must lie in [0, 1), got {}", train.edge_dropout_rate));
    check_range(train.l2_lambda >= 0.0, fmt::format("l2 must be nonnegative, got {}", train.l2_lambda));
    check_range(train.lr > 0.0, fmt::format("lr must be positive, got {}", train.lr));
    check_range(train.max_epochs >= 1, "epochs must be at least 1");
    check_range(train.embedding_dim >= 1, "embedding-dim must be at least 1");
    check_range(train.batch_size >= 1, "batch-size must be at least 1");
    check_range(train.lp_epochs >= 1, "lp-epochs must be at least 1");
    check_range(task == Task::LinkPrediction || train_per_class >= 1, "train-per-class must be at least 1");
}

TrainConfig ExperimentConfig::resolved_train() const {
    TrainConfig t = train;
    t.edge_dropout = edge_dropout.value_or(task == Task::NodeClassification);
    return t;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["edges"] = edges;
    j["features"] = features;
    j["labels"] = labels;
    j["task"] = to_string(task);
    j["motif"] = motif ? to_string(*motif) : "none";
    j["tau"] = tau;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["solver"] = solver_name(solver);
    j["dense_limit"] = dense_limit;
    j["max_terms"] = max_terms;
    j["tol"] = tol;
    j["symmetrize"] = symmetrize;
    const TrainConfig t = resolved_train();
    j["hidden"] = t.hidden;
    j["dropout"] = t.dropout;
    j["input_dropout"] = t.input_dropout;
    j["l2"] = t.l2_lambda;
    j["lr"] = t.lr;
    j["edge_dropout"] = t.edge_dropout;
    j["edge_dropout_rate"] = t.edge_dropout_rate;
    j["ablation"] = to_string(t.ablation);
    j["epochs"] = t.max_epochs;
    j["patience"] = t.patience;
    j["embedding_dim"] = t.embedding_dim;
    j["batch_size"] = t.batch_size;
    j["lp_epochs"] = t.lp_epochs;
    j["train_per_class"] = train_per_class;
    j["val_size"] = val_size;
    j["seed"] = seed;
    j["runs"] = runs;
    j["reshuffle"] = reshuffle;
    return j;
}

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

std::string ExperimentConfig::hash() const {
    return fnv1a_hex(to_json().dump());
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
    value = trim(value);
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
        value = value.substr(1, value.size() - 2);
    }
    std::string k(key);
    for (auto& ch : k) {
        if (ch == '_') {
            ch = '-';
        }
    }

    if (k == "edges") {
        c.edges = value;
    } else if (k == "features") {
        c.features = value;
    } else if (k == "labels") {
        c.labels = value;
    } else if (k == "output") {
        c.output = value;
    } else if (k == "checkpoint") {
        c.checkpoint = value;
    } else if (k == "task") {
        const auto t = parse_task(value);
        if (!t) {
            throw ConfigError(fmt::format("task: unknown task '{}'", value));
        }
        c.task = *t;
    } else if (k == "motif") {
        if (value == "none") {
            c.motif.reset();
        } else {
            const auto m = parse_motif(value);
            if (!m) {
                throw ConfigError(fmt::format("motif: unknown motif '{}'", value));
            }
            c.motif = *m;
        }
    } else if (k == "tau") {
        c.tau = to_double(k, value);
    } else if (k == "alpha") {
        c.alpha = to_double(k, value);
    } else if (k == "beta") {
        c.beta = to_double(k, value);
    } else if (k == "solver") {
        if (value == "direct") {
            c.solver = SolverKind::Direct;
        } else if (value == "neumann") {
            c.solver = SolverKind::Neumann;
        } else {
            throw ConfigError(fmt::format("solver: expected direct or neumann, got '{}'", value));
        }
    } else if (k == "dense-limit") {
        c.dense_limit = to_unsigned(k, value);
    } else if (k == "max-terms") {
        c.max_terms = to_unsigned(k, value);
    } else if (k == "tol") {
        c.tol = to_double(k, value);
    } else if (k == "symmetrize") {
        c.symmetrize = to_bool(k, value);
    } else if (k == "hidden") {
        c.train.hidden = to_unsigned(k, value);
    } else if (k == "dropout") {
        c.train.dropout = to_double(k, value);
    } else if (k == "input-dropout") {
        c.train.input_dropout = to_double(k, value);
    } else if (k == "l2" || k == "lambda") {
        c.train.l2_lambda = to_double(k, value);
    } else if (k == "lr") {
        c.train.lr = to_double(k, value);
    } else if (k == "edge-dropout") {
        c.edge_dropout = to_bool(k, value);
    } else if (k == "edge-dropout-rate") {
        c.train.edge_dropout_rate = to_double(k, value);
    } else if (k == "ablation") {
        const auto a = parse_ablation(value);
        if (!a) {
            throw ConfigError(fmt::format("ablation: expected none, train, predict or train_predict, got '{}'", value));
        }
        c.train.ablation = *a;
    } else if (k == "epochs") {
        c.train.max_epochs = to_unsigned(k, value);
    } else if (k == "patience") {
        c.train.patience = to_unsigned(k, value);
    } else if (k == "embedding-dim") {
        c.train.embedding_dim = to_unsigned(k, value);
    } else if (k == "batch-size") {
        c.train.batch_size = to_unsigned(k, value);
    } else if (k == "lp-epochs") {
        c.train.lp_epochs = to_unsigned(k, value);
    } else if (k == "train-per-class") {
        c.train_per_class = to_unsigned(k, value);
    } else if (k == "val-size") {
        c.val_size = to_unsigned(k, value);
    } else if (k == "seed") {
        c.seed = to_unsigned(k, value);
    } else if (k == "runs") {
        c.runs = to_unsigned(k, value);
    } else if (k == "reshuffle") {
        c.reshuffle = to_bool(k, value);
    } else if (k == "threads") {
        c.threads = to_unsigned(k, value);
    } else {
        throw ConfigError(fmt::format("unknown setting '{}'", key));
    }
}

void apply_config_text(ExperimentConfig& config, std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') {
                quoted = !quoted;
            } else if (line[i] == '#' && !quoted) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty() || (line.front() == '[' && line.back() == ']')) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("line {}: expected key = value", line_no));
        }
        const auto key = trim(line.substr(0, eq));
        try {
            apply_setting(config, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("line {}: {}", line_no, e.what()));
        }
    }
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open config file {}", path.string()));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        apply_config_text(config, buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    for (const auto& [key, value] : j.items()) {
        std::string text;
        if (value.is_string()) {
            text = value.get<std::string>();
        } else if (value.is_number_float()) {
            text = fmt::format("{}", value.get<double>());
        } else {
            text = value.dump();
        }
        apply_setting(c, key, text);
    }
    return c;
}

}  // namespace mppr
