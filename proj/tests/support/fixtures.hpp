// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

// Test-only graphs and brute-force oracles.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mppr/graph.hpp"
#include "mppr/motif.hpp"
#include "mppr/sparse_matrix.hpp"

namespace mppr::testing {

inline Graph random_digraph(std::size_t n, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(density);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = 0; v < n; ++v) {
            if (u != v && coin(rng)) {
                edges.emplace_back(u, v);
            }
        }
    }
    return Graph(n, std::move(edges));
}

/// The worked example graph with v1..v4 numbered 0..3: v1 <-> v3,
/// v1 -> v2, v3 -> v2, v1 -> v4, v3 -> v4.
inline Graph m7_pair_graph() {
    return Graph(4, {{0, 2}, {2, 0}, {0, 1}, {2, 1}, {0, 3}, {2, 3}});
}

/// Directed edges of each motif on nodes {0, 1, 2}.
inline std::vector<Edge> motif_pattern(MotifId m) {
    switch (m) {
    case MotifId::M1:
        return {{0, 1}, {1, 2}, {2, 0}};
    case MotifId::M2:
        return {{0, 1}, {1, 0}, {1, 2}, {2, 0}};
    case MotifId::M3:
        return {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}};
    case MotifId::M4:
        return {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}};
    case MotifId::M5:
        return {{0, 1}, {1, 2}, {0, 2}};
    case MotifId::M6:
        return {{2, 0}, {2, 1}, {0, 1}, {1, 0}};
    case MotifId::M7:
        return {{0, 2}, {1, 2}, {0, 1}, {1, 0}};
    }
    return {};
}

/// Counts, for every node pair, the 3-node sets whose induced directed
/// subgraph is isomorphic to the motif.
inline DenseMatrix brute_force_motif_adjacency(const Graph& g, MotifId m) {
    const auto n = g.num_nodes();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto& [u, v] : g.edges()) {
        adj[u][v] = true;
    }
    std::array<std::array<bool, 3>, 3> pattern{};
    for (const auto& [a, b] : motif_pattern(m)) {
        pattern[a][b] = true;
    }
    DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            for (NodeId k = j + 1; k < n; ++k) {
                std::array<NodeId, 3> nodes{i, j, k};
                std::array<int, 3> perm{0, 1, 2};
                bool match = false;
                do {
                    bool same = true;
                    for (int a = 0; a < 3 && same; ++a) {
                        for (int b = 0; b < 3 && same; ++b) {
                            if (a != b && adj[nodes[perm[a]]][nodes[perm[b]]] != pattern[a][b]) {
                                same = false;
                            }
                        }
                    }
                    match = same;
                } while (!match && std::next_permutation(perm.begin(), perm.end()));
                if (!match) {
                    continue;
                }
                for (int a = 0; a < 3; ++a) {
                    for (int b = 0; b < 3; ++b) {
                        if (a != b) {
                            out(static_cast<Eigen::Index>(nodes[a]), static_cast<Eigen::Index>(nodes[b])) += 1.0;
                        }
                    }
                }
            }
        }
    }
    return out;
}

/// Two communities with dense directed edges inside, a few across, and
/// Gaussian features centered on a per-class mean.
inline Graph two_cluster_graph(std::size_t per_class, double p_in, double p_out, double feature_noise,
                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 2 * per_class;
    const Eigen::Index f = 8;
    std::vector<int> labels(n);
    for (std::size_t v = 0; v < n; ++v) {
        labels[v] = v < per_class ? 0 : 1;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = 0; v < n; ++v) {
            if (u != v && unit(rng) < (labels[u] == labels[v] ? p_in : p_out)) {
                edges.emplace_back(u, v);
            }
        }
    }
    std::normal_distribution<double> noise(0.0, feature_noise);
    DenseMatrix x(static_cast<Eigen::Index>(n), f);
    for (Eigen::Index v = 0; v < x.rows(); ++v) {
        for (Eigen::Index c = 0; c < f; ++c) {
            const double center = (c % 2 == labels[static_cast<std::size_t>(v)]) ? 1.0 : 0.0;
            x(v, c) = center + noise(rng);
        }
    }
    return Graph(n, std::move(edges), std::move(x), std::move(labels), 2);
}

/// Two directed cliques (both directions) joined by one edge, with
/// one-hot node features.
inline Graph caveman_graph(std::size_t clique) {
    const std::size_t n = 2 * clique;
    std::vector<Edge> edges;
    for (std::size_t c = 0; c < 2; ++c) {
        for (NodeId u = c * clique; u < (c + 1) * clique; ++u) {
            for (NodeId v = c * clique; v < (c + 1) * clique; ++v) {
                if (u != v) {
                    edges.emplace_back(u, v);
                }
            }
        }
    }
    edges.emplace_back(clique - 1, clique);
    edges.emplace_back(clique, clique - 1);
    DenseMatrix x = DenseMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    return Graph(n, std::move(edges), std::move(x));
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace mppr::testing
