// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "mppr/sparse_matrix.hpp"

namespace mppr {

using NodeId = std::size_t;
using Edge = std::pair<NodeId, NodeId>;

/// Label value marking an unlabeled node.
inline constexpr int kUnlabeled = -1;

/// Directed unweighted graph with dense node features and optional labels.
///
/// Edges are sorted and unique, and never contain self-loops.
class Graph {
public:
    Graph() = default;

    /// Validates and normalizes the inputs: edges are sorted and
    /// deduplicated. `features` may be empty (0 columns) but must have one
    /// row per node when non-empty. `labels` is either empty or has one
    /// entry per node in [-1, num_classes). When `num_classes` is zero it is
    /// inferred as 1 + max label.
    Graph(std::size_t n, std::vector<Edge> edges, DenseMatrix features = {}, std::vector<int> labels = {},
          std::size_t num_classes = 0);

    std::size_t num_nodes() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const DenseMatrix& features() const noexcept { return features_; }
    std::size_t num_features() const noexcept { return static_cast<std::size_t>(features_.cols()); }
    const std::vector<int>& labels() const noexcept { return labels_; }
    bool has_labels() const noexcept { return !labels_.empty(); }
    std::size_t num_classes() const noexcept { return num_classes_; }

    bool has_edge(NodeId u, NodeId v) const;

    /// Same nodes, features and labels with a different edge set.
    Graph with_edges(std::vector<Edge> edges) const;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    DenseMatrix features_;
    std::vector<int> labels_;
    std::size_t num_classes_ = 0;
};

struct LoadOptions {
    /// Add the reverse of every edge, turning the graph undirected.
    bool symmetrize = false;
};

Graph load_graph(const std::filesystem::path& edge_path, const std::filesystem::path& feature_path,
                 const std::optional<std::filesystem::path>& label_path = std::nullopt, LoadOptions options = {});

/// Edge list parsing on its own. Returns the node count (header or
/// 1 + max id) and the raw edge list.
std::pair<std::size_t, std::vector<Edge>> parse_edge_list(std::istream& in);
DenseMatrix parse_features(std::istream& in);
std::vector<int> parse_labels(std::istream& in);

/// Writes "# n=<count>" followed by one "u\tv" line per edge.
void write_edge_list(std::ostream& out, const Graph& g);
void write_features(std::ostream& out, const DenseMatrix& features);
void write_labels(std::ostream& out, const std::vector<int>& labels);

/// Binary adjacency: A[u][v] = 1 for every directed edge (u, v).
SparseMatrix to_adjacency(const Graph& g);

/// Adds the reverse of every edge.
Graph symmetrize(const Graph& g);

/// Unordered edge set {u, v} with u < v.
std::vector<Edge> undirected_edges(const Graph& g);

/// Node ids of the largest weakly connected component, ascending.
std::vector<NodeId> largest_component(const Graph& g);

/// Induced subgraph on `nodes` (ascending ids), relabelled 0..k-1.
Graph induced_subgraph(const Graph& g, const std::vector<NodeId>& nodes);

struct DegreeNormalization {
    enum class Mode { SymmetricWithSelfLoops, RowStochastic };
    Mode mode = Mode::SymmetricWithSelfLoops;
    /// Guards divisions by zero degree.
    double epsilon = 1e-12;
};

/// D^{-1/2} (A + I) D^{-1/2} with D the row sums of A + I.
SparseMatrix normalize_sym(const SparseMatrix& a, double epsilon = 1e-12);

/// Divides each row by its sum. All-zero rows become the uniform row 1/n.
SparseMatrix row_stochastic(const SparseMatrix& a);

SparseMatrix normalize(const SparseMatrix& a, const DegreeNormalization& how);

}  // namespace mppr
