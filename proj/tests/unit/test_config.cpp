// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mppr/config.hpp"
#include "mppr/errors.hpp"

using mppr::ExperimentConfig;

TEST_CASE("defaults validate and resolve per task") {
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.motif == mppr::MotifId::M7);
    CHECK(c.resolved_train().edge_dropout);
    c.task = mppr::Task::LinkPrediction;
    CHECK_FALSE(c.resolved_train().edge_dropout);
    c.edge_dropout = true;
    CHECK(c.resolved_train().edge_dropout);
}

TEST_CASE("task names") {
    CHECK(mppr::parse_task("nc") == mppr::Task::NodeClassification);
    CHECK(mppr::parse_task("link-prediction") == mppr::Task::LinkPrediction);
    CHECK(mppr::parse_task(mppr::to_string(mppr::Task::LinkPrediction)) == mppr::Task::LinkPrediction);
    CHECK_FALSE(mppr::parse_task("regression").has_value());
}

TEST_CASE("settings by key") {
    ExperimentConfig c;
    mppr::apply_setting(c, "tau", "0.25");
    mppr::apply_setting(c, "motif", "m3");
    mppr::apply_setting(c, "input_dropout", "0.1");
    mppr::apply_setting(c, "edge-dropout", "false");
    mppr::apply_setting(c, "ablation", "predict");
    mppr::apply_setting(c, "solver", "neumann");
    mppr::apply_setting(c, "edges", "\"data/g.edges\"");
    CHECK(c.tau == 0.25);
    CHECK(c.motif == mppr::MotifId::M3);
    CHECK(c.train.input_dropout == 0.1);
    CHECK(c.edge_dropout == false);
    CHECK(c.train.ablation == mppr::Ablation::Predict);
    CHECK(c.solver == mppr::SolverKind::Neumann);
    CHECK(c.edges == "data/g.edges");
    mppr::apply_setting(c, "motif", "none");
    CHECK_FALSE(c.motif.has_value());

    CHECK_THROWS_AS(mppr::apply_setting(c, "colour", "red"), mppr::ConfigError);
    CHECK_THROWS_AS(mppr::apply_setting(c, "tau", "high"), mppr::ConfigError);
    CHECK_THROWS_AS(mppr::apply_setting(c, "motif", "m8"), mppr::ConfigError);
    CHECK_THROWS_AS(mppr::apply_setting(c, "runs", "-2"), mppr::ConfigError);
    CHECK_THROWS_AS(mppr::apply_setting(c, "symmetrize", "maybe"), mppr::ConfigError);
}

TEST_CASE("validation rejects out-of-range values") {
    auto rejects = [](const char* key, const char* value) {
        ExperimentConfig c;
        mppr::apply_setting(c, key, value);
        CHECK_THROWS_AS(c.validate(), mppr::ConfigError);
    };
    rejects("tau", "1.5");
    rejects("tau", "-0.1");
    rejects("alpha", "0");
    rejects("beta", "0");
    rejects("beta", "1.01");
    rejects("dropout", "1");
    rejects("lr", "0");
    rejects("runs", "0");
    rejects("hidden", "0");

    ExperimentConfig edge;
    edge.tau = 1.0;
    edge.alpha = 1.0;
    edge.beta = 1.0;
    CHECK_NOTHROW(edge.validate());
}

TEST_CASE("config text parsing") {
    ExperimentConfig c;
    mppr::apply_config_text(c, R"(# experiment
[model]
tau = 0.5   # trailing comment
lr = 0.01
motif = "m4"

[data]
labels = 'x.labels'
)");
    CHECK(c.tau == 0.5);
    CHECK(c.train.lr == 0.01);
    CHECK(c.motif == mppr::MotifId::M4);
    CHECK(c.labels == "x.labels");

    try {
        mppr::apply_config_text(c, "tau = 0.5\nno equals sign\n");
        FAIL("expected a ConfigError");
    } catch (const mppr::ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(mppr::apply_config_text(c, "beta = half"), mppr::ConfigError);
}

TEST_CASE("flags override the config file") {
    const auto path = std::filesystem::temp_directory_path() / "mppr_config_test.toml";
    {
        std::ofstream out(path);
        out << "tau = 0.3\nalpha = 0.2\n";
    }
    ExperimentConfig c;
    mppr::apply_config_file(c, path);
    mppr::apply_setting(c, "tau", "0.7");
    CHECK(c.tau == 0.7);
    CHECK(c.alpha == 0.2);
    CHECK(c.beta == 0.5);
    CHECK_THROWS_AS(mppr::apply_config_file(c, "/nonexistent/mppr.toml"), mppr::IoError);
}

TEST_CASE("hash is stable and ignores outputs") {
    ExperimentConfig a;
    ExperimentConfig b;
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    b.output = "elsewhere";
    b.checkpoint = "model.bin";
    b.threads = 8;
    CHECK(a.hash() == b.hash());
    b.tau = 0.8;
    CHECK(a.hash() != b.hash());

    ExperimentConfig c;
    c.edge_dropout = true;
    CHECK(a.hash() == c.hash());

    CHECK(mppr::fnv1a_hex("") == "cbf29ce484222325");
    CHECK(mppr::fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("JSON round trip keeps the hash") {
    ExperimentConfig c;
    c.task = mppr::Task::LinkPrediction;
    c.motif = std::nullopt;
    c.tau = 0.0;
    c.beta = 0.75;
    c.train.hidden = 32;
    c.train.ablation = mppr::Ablation::Train;
    c.seed = 42;
    c.runs = 3;
    const ExperimentConfig back = mppr::config_from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
    CHECK(back.hash() == c.hash());
}
