// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "mppr/sparse_matrix.hpp"

namespace mppr {

/// The seven three-node triangle motifs.
///
///   M1  directed 3-cycle
///   M2  3-cycle with one reciprocated edge
///   M3  two reciprocated edges and one one-way edge
///   M4  all three edges reciprocated
///   M5  feed-forward loop (a->b, b->c, a->c)
///   M6  reciprocated pair, both ends receive from the third node
///   M7  reciprocated pair, both ends point to the third node
///
/// Every motif is simple: all three nodes are anchors.
enum class MotifId { M1, M2, M3, M4, M5, M6, M7 };

inline constexpr std::array<MotifId, 7> kAllMotifs{MotifId::M1, MotifId::M2, MotifId::M3, MotifId::M4,
                                                   MotifId::M5, MotifId::M6, MotifId::M7};

std::string to_string(MotifId m);
/// Accepts "m1".."m7" or "M1".."M7".
std::optional<MotifId> parse_motif(std::string_view s);

struct UniBiSplit {
    SparseMatrix unidirectional;  // U
    SparseMatrix bidirectional;   // B
};

/// Splits a binary zero-diagonal adjacency into its one-way part U and its
/// reciprocated part B, with U + B = A and B symmetric.
UniBiSplit split_uni_bi(const SparseMatrix& a);

struct MotifAdjacency {
    MotifId motif;
    /// Symmetric count of motif instances containing each node pair.
    SparseMatrix matrix;
    /// Intermediate matrix the count is derived from.
    SparseMatrix intermediate;
};

MotifAdjacency motif_adjacency(const SparseMatrix& a, MotifId m);
MotifAdjacency motif_adjacency(const UniBiSplit& split, MotifId m);

struct BlendedAdjacency {
    double tau;
    SparseMatrix matrix;
};

/// (1 - tau) * A + tau * A_M. Throws DomainError for tau outside [0, 1].
BlendedAdjacency blend(const SparseMatrix& a, const MotifAdjacency& am, double tau);
BlendedAdjacency blend(const SparseMatrix& a, const SparseMatrix& am, double tau);

}  // namespace mppr
