// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

#include "mppr/graph.hpp"

namespace mppr {

struct NodeSplit {
    std::vector<NodeId> train;
    std::vector<NodeId> val;
    std::vector<NodeId> test;
    std::uint64_t seed = 0;
};

/// Stratified split of the labeled nodes: `train_per_class` nodes of every
/// class, then `val_size` random nodes, the rest for testing. Unlabeled
/// nodes belong to no set. Throws SplitError when a class is too small.
NodeSplit split_nodes(const Graph& g, std::size_t train_per_class, std::size_t val_size, std::uint64_t seed);

struct EdgeSplit {
    /// Undirected positives {u, v} with u < v.
    std::vector<Edge> train;
    std::vector<Edge> val;
    std::vector<Edge> test;
    /// Non-edges of the original graph, one per positive.
    std::vector<Edge> train_negatives;
    std::vector<Edge> val_negatives;
    std::vector<Edge> test_negatives;
    /// BFS spanning tree edges, all contained in `train`.
    std::vector<Edge> tree;
    std::uint64_t seed = 0;
};

/// Relative weights of train, validation and test edges.
using SplitRatios = std::array<double, 3>;
inline constexpr SplitRatios kDefaultEdgeRatios{5.0, 1.0, 4.0};

/// BFS spanning tree of the undirected graph rooted at node 0, visiting
/// neighbors in ascending id order. Throws SplitError when disconnected.
std::vector<Edge> bfs_spanning_tree(const Graph& g);

/// Splits the undirected edges: the BFS tree goes to training, then the
/// remaining edges are shuffled and dealt to reach the ratio targets.
/// When the tree alone exceeds the training target, the leftover edges
/// are shared between validation and test in their ratio, the fractional
/// remainder decided by a seeded draw.
EdgeSplit split_edges(const Graph& g, SplitRatios ratios, std::uint64_t seed);

struct NegativeOptions {
    /// Sample unordered pairs {u, v} (u < v) that are non-edges in both
    /// directions instead of ordered pairs.
    bool undirected = false;
    /// Extra pairs to avoid, as keys from pair_key().
    const std::unordered_set<std::uint64_t>* exclude = nullptr;
};

inline std::uint64_t pair_key(NodeId u, NodeId v, std::size_t n) {
    return static_cast<std::uint64_t>(u) * n + v;
}

/// `k` distinct uniformly drawn pairs (u != v) that are not edges of `g`.
/// Throws CapacityError when fewer than `k` such pairs exist.
std::vector<Edge> sample_negatives(const Graph& g, std::size_t k, std::mt19937_64& rng, NegativeOptions options = {});
std::vector<Edge> sample_negatives(const Graph& g, std::size_t k, std::uint64_t seed, NegativeOptions options = {});

/// Directed edges of `g` whose undirected version is in `kept`.
Graph restrict_to_edges(const Graph& g, const std::vector<Edge>& kept);

}  // namespace mppr
