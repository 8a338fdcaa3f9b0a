// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>
#include <string_view>

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

template <typename T>
bool parse_number(std::string_view token, T& out) {
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split_fields(std::string_view line, std::string_view delims) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const auto next = line.find_first_of(delims, pos);
        const auto len = (next == std::string_view::npos ? line.size() : next) - pos;
        out.push_back(trim(line.substr(pos, len)));
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 1;
    }
    return out;
}

// Parses "# n=<count>"; returns false for any other comment.
bool parse_node_count_header(std::string_view line, std::size_t& n) {
    line = trim(line.substr(1));
    if (line.size() < 2 || line[0] != 'n') {
        return false;
    }
    line = trim(line.substr(1));
    if (line.empty() || line[0] != '=') {
        return false;
    }
    return parse_number(trim(line.substr(1)), n);
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
    return in;
}

}  // namespace

Graph::Graph(std::size_t n, std::vector<Edge> edges, DenseMatrix features, std::vector<int> labels,
             std::size_t num_classes)
    : n_(n), edges_(std::move(edges)), features_(std::move(features)), labels_(std::move(labels)) {
    for (const auto& [u, v] : edges_) {
        if (u >= n_ || v >= n_) {
            throw IndexError(fmt::format("edge ({}, {}) references a node outside [0, {})", u, v, n_));
        }
        if (u == v) {
            throw DomainError(fmt::format("self-loop on node {}", u));
        }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    if (features_.size() == 0) {
        features_.resize(static_cast<Eigen::Index>(n_), 0);
    } else if (static_cast<std::size_t>(features_.rows()) != n_) {
        throw ShapeError(fmt::format("feature matrix has {} rows for {} nodes", features_.rows(), n_));
    }

    if (!labels_.empty()) {
        if (labels_.size() != n_) {
            throw ShapeError(fmt::format("label vector has {} entries for {} nodes", labels_.size(), n_));
        }
        const int max_label = *std::max_element(labels_.begin(), labels_.end());
        num_classes_ = num_classes != 0 ? num_classes : static_cast<std::size_t>(std::max(max_label + 1, 0));
        for (std::size_t v = 0; v < n_; ++v) {
            const int y = labels_[v];
            if (y < kUnlabeled || (y >= 0 && static_cast<std::size_t>(y) >= num_classes_)) {
                throw IndexError(fmt::format("label {} of node {} outside [0, {})", y, v, num_classes_));
            }
        }
    }
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

Graph Graph::with_edges(std::vector<Edge> edges) const {
    return Graph(n_, std::move(edges), features_, labels_, num_classes_);
}

std::pair<std::size_t, std::vector<Edge>> parse_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    std::optional<std::size_t> header_n;
    std::size_t max_id = 0;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            std::size_t n = 0;
            if (parse_node_count_header(line, n)) {
                header_n = n;
            }
            continue;
        }
        const auto sep = line.find_first_of(" \t");
        NodeId u = 0;
        NodeId v = 0;
        if (sep == std::string_view::npos || !parse_number(trim(line.substr(0, sep)), u) ||
            !parse_number(trim(line.substr(sep + 1)), v)) {
            throw ParseError(fmt::format("malformed edge '{}'", line), line_no);
        }
        if (u == v) {
            throw ParseError(fmt::format("self-loop on node {}", u), line_no);
        }
        if (header_n && (u >= *header_n || v >= *header_n)) {
            throw IndexError(fmt::format("edge ({}, {}) exceeds declared node count {} (line {})", u, v, *header_n,
                                         line_no));
        }
        max_id = std::max({max_id, u, v});
        edges.emplace_back(u, v);
    }
    const std::size_t n = header_n ? *header_n : (edges.empty() ? 0 : max_id + 1);
    return {n, std::move(edges)};
}

DenseMatrix parse_features(std::istream& in) {
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line, ",");
        if (rows == 0) {
            cols = fields.size();
        } else if (fields.size() != cols) {
            throw ParseError(fmt::format("expected {} feature columns, found {}", cols, fields.size()), line_no);
        }
        for (const auto field : fields) {
            double x = 0.0;
            if (!parse_number(field, x) || !std::isfinite(x)) {
                throw ParseError(fmt::format("invalid feature value '{}'", field), line_no);
            }
            values.push_back(x);
        }
        ++rows;
    }
    DenseMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::copy(values.begin(), values.end(), out.data());
    return out;
}

std::vector<int> parse_labels(std::istream& in) {
    std::vector<int> labels;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) {
            continue;
        }
        int y = 0;
        if (!parse_number(line, y) || y < kUnlabeled) {
            throw ParseError(fmt::format("invalid label '{}'", line), line_no);
        }
        labels.push_back(y);
    }
    return labels;
}

Graph load_graph(const std::filesystem::path& edge_path, const std::filesystem::path& feature_path,
                 const std::optional<std::filesystem::path>& label_path, LoadOptions options) {
    auto edge_in = open_input(edge_path);
    auto [n, edges] = parse_edge_list(edge_in);

    auto feature_in = open_input(feature_path);
    DenseMatrix features = parse_features(feature_in);
    if (static_cast<std::size_t>(features.rows()) != n) {
        throw ShapeError(fmt::format("'{}' has {} feature rows but '{}' describes {} nodes", feature_path.string(),
                                     features.rows(), edge_path.string(), n));
    }

    std::vector<int> labels;
    if (label_path) {
        auto label_in = open_input(*label_path);
        labels = parse_labels(label_in);
        if (labels.size() != n) {
            throw ShapeError(fmt::format("'{}' has {} labels for {} nodes", label_path->string(), labels.size(), n));
        }
    }

    if (options.symmetrize) {
        const auto count = edges.size();
        for (std::size_t i = 0; i < count; ++i) {
            edges.emplace_back(edges[i].second, edges[i].first);
        }
    }
    return Graph(n, std::move(edges), std::move(features), std::move(labels));
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# n=" << g.num_nodes() << '\n';
    for (const auto& [u, v] : g.edges()) {
        out << u << '\t' << v << '\n';
    }
}

void write_features(std::ostream& out, const DenseMatrix& features) {
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
        for (Eigen::Index c = 0; c < features.cols(); ++c) {
            out << (c == 0 ? "" : ",") << fmt::format("{:.17g}", features(r, c));
        }
        out << '\n';
    }
}

void write_labels(std::ostream& out, const std::vector<int>& labels) {
    for (const int y : labels) {
        out << y << '\n';
    }
}

SparseMatrix to_adjacency(const Graph& g) {
    std::vector<SparseMatrix::Entry> entries;
    entries.reserve(g.num_edges());
    for (const auto& [u, v] : g.edges()) {
        entries.push_back({u, v, 1.0});
    }
    return SparseMatrix::from_triplets(g.num_nodes(), g.num_nodes(), std::move(entries));
}

Graph symmetrize(const Graph& g) {
    std::vector<Edge> edges = g.edges();
    for (const auto& [u, v] : g.edges()) {
        edges.emplace_back(v, u);
    }
    return g.with_edges(std::move(edges));
}

std::vector<Edge> undirected_edges(const Graph& g) {
    std::vector<Edge> out;
    out.reserve(g.num_edges());
    for (const auto& [u, v] : g.edges()) {
        out.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<NodeId> largest_component(const Graph& g) {
    const auto n = g.num_nodes();
    std::vector<NodeId> parent(n);
    std::iota(parent.begin(), parent.end(), NodeId{0});
    auto find = [&parent](NodeId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [u, v] : g.edges()) {
        const auto ru = find(u);
        const auto rv = find(v);
        if (ru != rv) {
            parent[std::max(ru, rv)] = std::min(ru, rv);
        }
    }
    std::vector<std::size_t> size(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        ++size[find(v)];
    }
    if (n == 0) {
        return {};
    }
    // Ties go to the component holding the smallest node id.
    const auto best = static_cast<NodeId>(std::max_element(size.begin(), size.end()) - size.begin());
    std::vector<NodeId> nodes;
    for (NodeId v = 0; v < n; ++v) {
        if (find(v) == best) {
            nodes.push_back(v);
        }
    }
    return nodes;
}

Graph induced_subgraph(const Graph& g, const std::vector<NodeId>& nodes) {
    constexpr auto kAbsent = static_cast<NodeId>(-1);
    std::vector<NodeId> remap(g.num_nodes(), kAbsent);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] >= g.num_nodes()) {
            throw IndexError(fmt::format("node {} outside graph of {} nodes", nodes[i], g.num_nodes()));
        }
        remap[nodes[i]] = i;
    }
    std::vector<Edge> edges;
    for (const auto& [u, v] : g.edges()) {
        if (remap[u] != kAbsent && remap[v] != kAbsent) {
            edges.emplace_back(remap[u], remap[v]);
        }
    }
    DenseMatrix features(static_cast<Eigen::Index>(nodes.size()), g.features().cols());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        features.row(static_cast<Eigen::Index>(i)) = g.features().row(static_cast<Eigen::Index>(nodes[i]));
    }
    std::vector<int> labels;
    if (g.has_labels()) {
        labels.reserve(nodes.size());
        for (const auto v : nodes) {
            labels.push_back(g.labels()[v]);
        }
    }
    return Graph(nodes.size(), std::move(edges), std::move(features), std::move(labels), g.num_classes());
}

SparseMatrix normalize_sym(const SparseMatrix& a, double epsilon) {
    if (!a.is_square()) {
        throw ShapeError(fmt::format("normalization needs a square matrix, got {}x{}", a.rows(), a.cols()));
    }
    if (!a.is_nonnegative()) {
        throw DomainError("normalization needs nonnegative entries");
    }
    const SparseMatrix with_loops = add(a, 1.0, SparseMatrix::identity(a.rows()), 1.0);
    const DenseVector degree = with_loops.row_sums();
    DenseVector inv_sqrt(degree.size());
    for (Eigen::Index i = 0; i < degree.size(); ++i) {
        inv_sqrt[i] = 1.0 / std::sqrt(std::max(degree[i], epsilon));
    }
    std::vector<SparseMatrix::Entry> entries = with_loops.entries();
    for (auto& e : entries) {
        e.value = inv_sqrt[static_cast<Eigen::Index>(e.row)] * e.value * inv_sqrt[static_cast<Eigen::Index>(e.col)];
    }
    return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(entries));
}

SparseMatrix row_stochastic(const SparseMatrix& a) {
    if (!a.is_square()) {
        throw ShapeError(fmt::format("row normalization needs a square matrix, got {}x{}", a.rows(), a.cols()));
    }
    if (!a.is_nonnegative()) {
        throw DomainError("row normalization needs nonnegative entries");
    }
    const auto n = a.rows();
    const DenseVector sums = a.row_sums();
    std::vector<SparseMatrix::Entry> entries;
    entries.reserve(a.nnz());
    for (std::size_t r = 0; r < n; ++r) {
        const double s = sums[static_cast<Eigen::Index>(r)];
        if (s > 0.0) {
            const auto cols = a.row_cols(r);
            const auto vals = a.row_values(r);
            for (std::size_t k = 0; k < cols.size(); ++k) {
                entries.push_back({r, cols[k], vals[k] / s});
            }
        } else {
            for (std::size_t c = 0; c < n; ++c) {
                entries.push_back({r, c, 1.0 / static_cast<double>(n)});
            }
        }
    }
    return SparseMatrix::from_triplets(n, n, std::move(entries));
}

SparseMatrix normalize(const SparseMatrix& a, const DegreeNormalization& how) {
    if (!(how.epsilon > 0.0)) {
        throw DomainError("normalization epsilon must be positive");
    }
    switch (how.mode) {
    case DegreeNormalization::Mode::SymmetricWithSelfLoops:
        return normalize_sym(a, how.epsilon);
    case DegreeNormalization::Mode::RowStochastic:
        return row_stochastic(a);
    }
    return a;
}

}  // namespace mppr
