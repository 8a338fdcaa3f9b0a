// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mppr/config.hpp"
#include "mppr/errors.hpp"
#include "mppr/experiment.hpp"
#include "mppr/metrics.hpp"
#include "mppr/motif.hpp"
#include "mppr/ppr.hpp"
#include "mppr/propagation.hpp"

namespace py = pybind11;

namespace {

mppr::Graph make_graph(std::size_t n, const std::vector<mppr::Edge>& edges) {
    return mppr::Graph(n, edges);
}

mppr::MotifId motif_or_throw(const std::string& name) {
    const auto m = mppr::parse_motif(name);
    if (!m) {
        throw mppr::ConfigError("unknown motif '" + name + "'");
    }
    return *m;
}

mppr::SolverOptions solver_options(const std::string& solver) {
    mppr::SolverOptions options;
    if (solver == "direct") {
        options.kind = mppr::SolverKind::Direct;
    } else if (solver == "neumann") {
        options.kind = mppr::SolverKind::Neumann;
        options.neumann.tol = 1e-12;
    } else {
        throw mppr::ConfigError("solver must be 'direct' or 'neumann'");
    }
    return options;
}

mppr::ExperimentConfig config_from_dict(const py::dict& settings) {
    mppr::ExperimentConfig config;
    for (const auto& [key, value] : settings) {
        mppr::apply_setting(config, py::str(key).cast<std::string>(), py::str(value).cast<std::string>());
    }
    config.validate();
    return config;
}

}  // namespace

PYBIND11_MODULE(_mppr, m) {
    m.doc() = "Motif-based personalized PageRank propagation";

    // Translators run newest first, so the base class goes first.
    py::register_exception<mppr::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<mppr::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<mppr::DomainError>(m, "DomainError", PyExc_ValueError);

    m.def(
        "motif_adjacency",
        [](std::size_t n, const std::vector<mppr::Edge>& edges, const std::string& motif) {
            const auto a = mppr::to_adjacency(make_graph(n, edges));
            return mppr::motif_adjacency(a, motif_or_throw(motif)).matrix.to_dense();
        },
        py::arg("n"), py::arg("edges"), py::arg("motif"), "Dense motif adjacency matrix of a directed edge list.");

    m.def(
        "ppr_matrix",
        [](std::size_t n, const std::vector<mppr::Edge>& edges, double alpha, const std::string& motif, double tau,
           const std::string& solver) {
            const auto g = make_graph(n, edges);
            std::optional<mppr::MotifId> id;
            if (motif != "none") {
                id = motif_or_throw(motif);
            }
            return mppr::ppr_matrix(mppr::transition_matrix(g, id, tau), alpha, solver_options(solver)).matrix;
        },
        py::arg("n"), py::arg("edges"), py::arg("alpha") = 0.1, py::arg("motif") = "none", py::arg("tau") = 0.0,
        py::arg("solver") = "direct", "Personalized PageRank matrix of the (blended) normalized adjacency.");

    m.def(
        "entrywise_power",
        [](const mppr::DenseMatrix& pi, double beta) { return mppr::entrywise_power(pi, beta); }, py::arg("pi"),
        py::arg("beta"));

    m.def(
        "auc",
        [](const std::vector<double>& scores, const std::vector<double>& labels) {
            return mppr::metric_auc(scores, labels);
        },
        py::arg("scores"), py::arg("labels"));
    m.def(
        "average_precision",
        [](const std::vector<double>& scores, const std::vector<double>& labels) {
            return mppr::metric_ap(scores, labels);
        },
        py::arg("scores"), py::arg("labels"));

    m.def(
        "config_hash", [](const py::dict& settings) { return config_from_dict(settings).hash(); },
        py::arg("settings"), "Hash of the canonical config built from string settings.");

    m.def(
        "train",
        [](const py::dict& settings) {
            const auto config = config_from_dict(settings);
            std::string aggregate;
            {
                py::gil_scoped_release release;
                const auto g = mppr::load_experiment_graph(config);
                aggregate = mppr::run_experiment(g, config).aggregate.dump();
            }
            return aggregate;
        },
        py::arg("settings"), "Runs an experiment and returns the aggregate record as JSON text.");
}
