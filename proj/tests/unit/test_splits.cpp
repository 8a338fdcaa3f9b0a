// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "mppr/errors.hpp"
#include "mppr/splits.hpp"
#include "support/fixtures.hpp"

using mppr::Edge;
using mppr::Graph;
using mppr::NodeId;

namespace {

Graph labeled_graph(std::size_t classes, std::size_t per_class) {
    const std::size_t n = classes * per_class;
    std::vector<int> labels(n);
    for (std::size_t v = 0; v < n; ++v) {
        labels[v] = static_cast<int>(v % classes);
    }
    return Graph(n, {}, mppr::DenseMatrix::Zero(static_cast<Eigen::Index>(n), 1), labels, classes);
}

// Random spanning tree plus extra random edges, some reciprocated.
Graph connected_graph(std::size_t n, std::size_t extra, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    for (NodeId v = 1; v < n; ++v) {
        std::uniform_int_distribution<NodeId> parent(0, v - 1);
        const NodeId p = parent(rng);
        if (rng() % 2 == 0) {
            edges.emplace_back(p, v);
        } else {
            edges.emplace_back(v, p);
        }
    }
    std::uniform_int_distribution<NodeId> node(0, n - 1);
    for (std::size_t i = 0; i < extra; ++i) {
        const NodeId u = node(rng);
        const NodeId v = node(rng);
        if (u != v) {
            edges.emplace_back(u, v);
        }
    }
    return Graph(n, edges);
}

std::set<Edge> as_set(const std::vector<Edge>& edges) {
    return {edges.begin(), edges.end()};
}

bool connected(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<NodeId> parent(n);
    std::iota(parent.begin(), parent.end(), NodeId{0});
    auto find = [&](NodeId x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    std::size_t components = n;
    for (const auto& [u, v] : edges) {
        const NodeId a = find(u);
        const NodeId b = find(v);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == 1;
}

}  // namespace

TEST_CASE("node split sizes and disjointness") {
    const Graph g = labeled_graph(7, 300);
    const auto split = mppr::split_nodes(g, 20, 500, 1);
    CHECK(split.train.size() == 140);
    CHECK(split.val.size() == 500);
    CHECK(split.test.size() == g.num_nodes() - 640);

    std::vector<std::size_t> per_class(7, 0);
    for (const auto v : split.train) {
        ++per_class[static_cast<std::size_t>(g.labels()[v])];
    }
    CHECK(std::all_of(per_class.begin(), per_class.end(), [](std::size_t c) { return c == 20; }));

    std::set<NodeId> seen;
    for (const auto* part : {&split.train, &split.val, &split.test}) {
        for (const auto v : *part) {
            CHECK(seen.insert(v).second);
        }
    }
    CHECK(seen.size() == g.num_nodes());
}

TEST_CASE("node split is seeded") {
    const Graph g = labeled_graph(3, 100);
    const auto a = mppr::split_nodes(g, 5, 50, 9);
    const auto b = mppr::split_nodes(g, 5, 50, 9);
    const auto c = mppr::split_nodes(g, 5, 50, 10);
    CHECK(a.train == b.train);
    CHECK(a.val == b.val);
    CHECK((a.train != c.train || a.val != c.val));
}

TEST_CASE("node split rejects small classes") {
    CHECK_THROWS_AS(mppr::split_nodes(labeled_graph(3, 10), 20, 0, 0), mppr::SplitError);
    CHECK_THROWS_AS(mppr::split_nodes(labeled_graph(3, 10), 5, 100, 0), mppr::SplitError);
}

TEST_CASE("unlabeled nodes are left out") {
    std::vector<int> labels{0, 1, -1, 0, 1, -1, 0, 1};
    const Graph g(8, {}, mppr::DenseMatrix::Zero(8, 1), labels, 2);
    const auto split = mppr::split_nodes(g, 2, 1, 0);
    for (const auto* part : {&split.train, &split.val, &split.test}) {
        for (const auto v : *part) {
            CHECK(labels[v] >= 0);
        }
    }
    CHECK(split.train.size() + split.val.size() + split.test.size() == 6);
}

TEST_CASE("a tree keeps every edge in training") {
    const Graph g = connected_graph(30, 0, 3);
    const auto split = mppr::split_edges(g, mppr::kDefaultEdgeRatios, 3);
    CHECK(split.train.size() == 29);
    CHECK(split.val.empty());
    CHECK(split.test.empty());
}

TEST_CASE("a cycle loses exactly one edge from training") {
    std::vector<Edge> edges;
    for (NodeId v = 0; v < 10; ++v) {
        edges.emplace_back(v, (v + 1) % 10);
    }
    const auto split = mppr::split_edges(Graph(10, edges), mppr::kDefaultEdgeRatios, 4);
    CHECK(split.train.size() == 9);
    CHECK(split.val.size() + split.test.size() == 1);
    CHECK(connected(10, split.train));
}

TEST_CASE("edge split invariants over many seeds") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        CAPTURE(seed);
        const Graph g = connected_graph(60, 240, seed);
        const auto split = mppr::split_edges(g, mppr::kDefaultEdgeRatios, seed);

        CHECK(connected(g.num_nodes(), split.train));
        const auto train = as_set(split.train);
        for (const auto& e : split.tree) {
            CHECK(train.count(e) == 1);
        }

        std::set<Edge> all;
        for (const auto* part : {&split.train, &split.val, &split.test}) {
            for (const auto& [u, v] : *part) {
                CHECK(u < v);
                CHECK((g.has_edge(u, v) || g.has_edge(v, u)));
                CHECK(all.insert({u, v}).second);
            }
        }
        std::set<Edge> undirected;
        for (const auto& [u, v] : g.edges()) {
            undirected.insert({std::min(u, v), std::max(u, v)});
        }
        CHECK(all == undirected);

        CHECK(split.train_negatives.size() == split.train.size());
        CHECK(split.val_negatives.size() == split.val.size());
        CHECK(split.test_negatives.size() == split.test.size());
        std::set<Edge> negatives;
        for (const auto* part : {&split.train_negatives, &split.val_negatives, &split.test_negatives}) {
            for (const auto& [u, v] : *part) {
                CHECK(u != v);
                CHECK_FALSE(g.has_edge(u, v));
                CHECK_FALSE(g.has_edge(v, u));
                CHECK(negatives.insert({std::min(u, v), std::max(u, v)}).second);
            }
        }
    }
}

TEST_CASE("edge split follows the ratios when the tree is small") {
    const Graph g = connected_graph(200, 3000, 8);
    const auto split = mppr::split_edges(g, mppr::kDefaultEdgeRatios, 8);
    const double total = static_cast<double>(split.train.size() + split.val.size() + split.test.size());
    CHECK(std::abs(split.train.size() / total - 0.5) < 0.01);
    CHECK(std::abs(split.val.size() / total - 0.1) < 0.01);
    CHECK(std::abs(split.test.size() / total - 0.4) < 0.01);
}

TEST_CASE("disconnected graphs have no spanning tree") {
    const Graph g(4, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(mppr::bfs_spanning_tree(g), mppr::SplitError);
    CHECK_THROWS_AS(mppr::split_edges(g, mppr::kDefaultEdgeRatios, 0), mppr::SplitError);
}

TEST_CASE("bfs tree visits neighbors in ascending order") {
    const Graph g(5, {{0, 3}, {0, 1}, {1, 2}, {3, 2}, {4, 3}});
    const auto tree = as_set(mppr::bfs_spanning_tree(g));
    CHECK(tree == std::set<Edge>{{0, 1}, {0, 3}, {1, 2}, {3, 4}});
}

TEST_CASE("negative sampling") {
    std::vector<Edge> complete;
    for (NodeId u = 0; u < 5; ++u) {
        for (NodeId v = 0; v < 5; ++v) {
            if (u != v) {
                complete.emplace_back(u, v);
            }
        }
    }
    CHECK_THROWS_AS(mppr::sample_negatives(Graph(5, complete), 1, 0), mppr::CapacityError);

    const Graph sparse = mppr::testing::random_digraph(200, 0.01, 2);
    const auto negatives = mppr::sample_negatives(sparse, 10000, 2);
    CHECK(negatives.size() == 10000);
    CHECK(as_set(negatives).size() == 10000);
    for (const auto& [u, v] : negatives) {
        CHECK(u != v);
        CHECK_FALSE(sparse.has_edge(u, v));
    }

    const Graph one_way(3, {{0, 1}});
    const auto undirected = mppr::sample_negatives(one_way, 2, 0, {.undirected = true});
    CHECK(as_set(undirected) == std::set<Edge>{{0, 2}, {1, 2}});
    CHECK_THROWS_AS(mppr::sample_negatives(one_way, 3, 0, {.undirected = true}), mppr::CapacityError);
    CHECK(as_set(mppr::sample_negatives(one_way, 5, 0)).size() == 5);

    const std::unordered_set<std::uint64_t> exclude{mppr::pair_key(0, 2, 3)};
    const auto kept = mppr::sample_negatives(one_way, 1, 0, {.undirected = true, .exclude = &exclude});
    CHECK(kept == std::vector<Edge>{{1, 2}});
}

TEST_CASE("restrict_to_edges keeps both directions of kept pairs") {
    const Graph g(4, {{0, 1}, {1, 0}, {1, 2}, {3, 2}});
    const Graph r = mppr::restrict_to_edges(g, {{0, 1}, {2, 3}});
    CHECK(r.edges() == std::vector<Edge>{{0, 1}, {1, 0}, {3, 2}});
}
