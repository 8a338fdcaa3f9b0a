// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/splits.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <fmt/format.h>

#include "mppr/errors.hpp"

namespace mppr {

NodeSplit split_nodes(const Graph& g, std::size_t train_per_class, std::size_t val_size, std::uint64_t seed) {
    if (!g.has_labels()) {
        throw SplitError("node split needs labels");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::vector<NodeId>> by_class(g.num_classes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        const int y = g.labels()[v];
        if (y != kUnlabeled) {
            by_class[static_cast<std::size_t>(y)].push_back(v);
        }
    }

    NodeSplit split;
    split.seed = seed;
    std::vector<NodeId> rest;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& members = by_class[c];
        if (members.size() < train_per_class) {
            throw SplitError(fmt::format("class {} has {} labeled nodes, {} needed for training", c, members.size(),
                                         train_per_class));
        }
        std::shuffle(members.begin(), members.end(), rng);
        split.train.insert(split.train.end(), members.begin(),
                           members.begin() + static_cast<std::ptrdiff_t>(train_per_class));
        rest.insert(rest.end(), members.begin() + static_cast<std::ptrdiff_t>(train_per_class), members.end());
    }
    std::sort(rest.begin(), rest.end());
    if (rest.size() < val_size) {
        throw SplitError(fmt::format("{} labeled nodes remain after training, {} requested for validation",
                                     rest.size(), val_size));
    }
    std::shuffle(rest.begin(), rest.end(), rng);
    split.val.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(val_size));
    split.test.assign(rest.begin() + static_cast<std::ptrdiff_t>(val_size), rest.end());
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.val.begin(), split.val.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::vector<Edge> bfs_spanning_tree(const Graph& g) {
    const auto n = g.num_nodes();
    std::vector<std::vector<NodeId>> neighbors(n);
    for (const auto& [u, v] : undirected_edges(g)) {
        neighbors[u].push_back(v);
        neighbors[v].push_back(u);
    }
    for (auto& list : neighbors) {
        std::sort(list.begin(), list.end());
    }
    std::vector<Edge> tree;
    if (n == 0) {
        return tree;
    }
    std::vector<bool> seen(n, false);
    std::queue<NodeId> frontier;
    seen[0] = true;
    frontier.push(0);
    std::size_t visited = 1;
    while (!frontier.empty()) {
        const auto u = frontier.front();
        frontier.pop();
        for (const auto v : neighbors[u]) {
            if (!seen[v]) {
                seen[v] = true;
                ++visited;
                tree.emplace_back(std::min(u, v), std::max(u, v));
                frontier.push(v);
            }
        }
    }
    if (visited != n) {
        throw SplitError(fmt::format("graph is disconnected: BFS from node 0 reaches {} of {} nodes", visited, n));
    }
    return tree;
}

EdgeSplit split_edges(const Graph& g, SplitRatios ratios, std::uint64_t seed) {
    for (const double r : ratios) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw DomainError("split ratios must be finite and nonnegative");
        }
    }
    const double weight = ratios[0] + ratios[1] + ratios[2];
    if (!(weight > 0.0)) {
        throw DomainError("split ratios must not all be zero");
    }

    EdgeSplit split;
    split.seed = seed;
    split.tree = bfs_spanning_tree(g);
    std::sort(split.tree.begin(), split.tree.end());

    const std::vector<Edge> all = undirected_edges(g);
    std::vector<Edge> rest;
    std::set_difference(all.begin(), all.end(), split.tree.begin(), split.tree.end(), std::back_inserter(rest));

    std::mt19937_64 rng(seed);
    std::shuffle(rest.begin(), rest.end(), rng);

    const auto m = static_cast<double>(all.size());
    const auto train_target = static_cast<std::size_t>(std::llround(m * ratios[0] / weight));
    const auto val_target = static_cast<std::size_t>(std::llround(m * ratios[1] / weight));

    std::size_t extra_train = 0;
    std::size_t val_count = 0;
    if (split.tree.size() <= train_target) {
        extra_train = train_target - split.tree.size();
        val_count = std::min(val_target, rest.size() - std::min(extra_train, rest.size()));
    } else {
        const double held_out_weight = ratios[1] + ratios[2];
        const double share =
            held_out_weight > 0.0 ? static_cast<double>(rest.size()) * ratios[1] / held_out_weight : 0.0;
        val_count = static_cast<std::size_t>(std::floor(share));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        if (unit(rng) < share - std::floor(share)) {
            ++val_count;
        }
    }
    extra_train = std::min(extra_train, rest.size());
    val_count = std::min(val_count, rest.size() - extra_train);

    split.train = split.tree;
    split.train.insert(split.train.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(extra_train));
    split.val.assign(rest.begin() + static_cast<std::ptrdiff_t>(extra_train),
                     rest.begin() + static_cast<std::ptrdiff_t>(extra_train + val_count));
    split.test.assign(rest.begin() + static_cast<std::ptrdiff_t>(extra_train + val_count), rest.end());
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.val.begin(), split.val.end());
    std::sort(split.test.begin(), split.test.end());

    const auto n = g.num_nodes();
    std::unordered_set<std::uint64_t> taken;
    auto draw = [&](std::size_t k) {
        NegativeOptions opts;
        opts.undirected = true;
        opts.exclude = &taken;
        auto pairs = sample_negatives(g, k, rng, opts);
        for (const auto& [u, v] : pairs) {
            taken.insert(pair_key(u, v, n));
        }
        return pairs;
    };
    split.val_negatives = draw(split.val.size());
    split.test_negatives = draw(split.test.size());
    split.train_negatives = draw(split.train.size());
    return split;
}

std::vector<Edge> sample_negatives(const Graph& g, std::size_t k, std::uint64_t seed, NegativeOptions options) {
    std::mt19937_64 rng(seed);
    return sample_negatives(g, k, rng, options);
}

std::vector<Edge> sample_negatives(const Graph& g, std::size_t k, std::mt19937_64& rng, NegativeOptions options) {
    const auto n = g.num_nodes();
    auto key_of = [&](NodeId u, NodeId v) {
        return options.undirected ? pair_key(std::min(u, v), std::max(u, v), n) : pair_key(u, v, n);
    };

    std::unordered_set<std::uint64_t> blocked;
    blocked.reserve(2 * g.num_edges() + (options.exclude ? options.exclude->size() : 0));
    for (const auto& [u, v] : g.edges()) {
        blocked.insert(key_of(u, v));
    }
    if (options.exclude != nullptr) {
        for (const auto key : *options.exclude) {
            const NodeId u = static_cast<NodeId>(key / std::max<std::size_t>(n, 1));
            const NodeId v = static_cast<NodeId>(key % std::max<std::size_t>(n, 1));
            if (u < n && v < n && u != v) {
                blocked.insert(key_of(u, v));
            }
        }
    }

    const std::uint64_t nn = n;
    const std::uint64_t total = options.undirected ? nn * (nn - (n > 0 ? 1 : 0)) / 2 : nn * (nn - (n > 0 ? 1 : 0));
    const std::uint64_t capacity = total - std::min<std::uint64_t>(total, blocked.size());
    if (k > capacity) {
        throw CapacityError(fmt::format("requested {} negative pairs but only {} non-edges exist", k, capacity));
    }

    std::vector<Edge> out;
    out.reserve(k);
    if (k == 0) {
        return out;
    }
    if (2 * k > capacity) {
        std::vector<Edge> candidates;
        candidates.reserve(capacity);
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = options.undirected ? u + 1 : 0; v < n; ++v) {
                if (u != v && !blocked.contains(key_of(u, v))) {
                    candidates.emplace_back(u, v);
                }
            }
        }
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
            std::swap(candidates[i], candidates[pick(rng)]);
            out.push_back(candidates[i]);
        }
        return out;
    }

    std::uniform_int_distribution<NodeId> node(0, n - 1);
    while (out.size() < k) {
        NodeId u = node(rng);
        NodeId v = node(rng);
        if (u == v) {
            continue;
        }
        if (options.undirected && u > v) {
            std::swap(u, v);
        }
        if (blocked.insert(key_of(u, v)).second) {
            out.emplace_back(u, v);
        }
    }
    return out;
}

Graph restrict_to_edges(const Graph& g, const std::vector<Edge>& kept) {
    const auto n = g.num_nodes();
    std::unordered_set<std::uint64_t> keys;
    keys.reserve(kept.size());
    for (const auto& [u, v] : kept) {
        keys.insert(pair_key(std::min(u, v), std::max(u, v), n));
    }
    std::vector<Edge> edges;
    for (const auto& [u, v] : g.edges()) {
        if (keys.contains(pair_key(std::min(u, v), std::max(u, v), n))) {
            edges.emplace_back(u, v);
        }
    }
    return g.with_edges(std::move(edges));
}

}  // namespace mppr
