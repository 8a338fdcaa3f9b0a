// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/motif.hpp"

#include <fmt/format.h>

#include "mppr/errors.hpp"

namespace mppr {

std::string to_string(MotifId m) {
    return fmt::format("M{}", static_cast<int>(m) + 1);
}

std::optional<MotifId> parse_motif(std::string_view s) {
    if (s.size() != 2 || (s[0] != 'm' && s[0] != 'M') || s[1] < '1' || s[1] > '7') {
        return std::nullopt;
    }
    return static_cast<MotifId>(s[1] - '1');
}

UniBiSplit split_uni_bi(const SparseMatrix& a) {
    if (!a.is_square()) {
        throw ShapeError(fmt::format("adjacency must be square, got {}x{}", a.rows(), a.cols()));
    }
    if (!a.is_binary()) {
        throw DomainError("motif decomposition needs a binary adjacency matrix");
    }
    if (!a.has_zero_diagonal()) {
        throw DomainError("motif decomposition needs a zero diagonal");
    }
    const SparseMatrix reciprocal = hadamard(a, a.transpose());
    return {add(a, 1.0, reciprocal, -1.0), reciprocal};
}

MotifAdjacency motif_adjacency(const SparseMatrix& a, MotifId m) {
    return motif_adjacency(split_uni_bi(a), m);
}

MotifAdjacency motif_adjacency(const UniBiSplit& split, MotifId m) {
    const SparseMatrix& u = split.unidirectional;
    const SparseMatrix& b = split.bidirectional;
    const SparseMatrix ut = u.transpose();

    auto sum = [](const SparseMatrix& x, const SparseMatrix& y, const SparseMatrix& z) {
        return add(add(x, 1.0, y, 1.0), 1.0, z, 1.0);
    };

    SparseMatrix zeta;
    bool symmetrize = true;
    switch (m) {
    case MotifId::M1:
        zeta = masked_product(u, u, ut);
        break;
    case MotifId::M2:
        zeta = sum(masked_product(b, u, ut), masked_product(u, b, ut), masked_product(u, u, b));
        break;
    case MotifId::M3:
        zeta = sum(masked_product(b, b, u), masked_product(b, u, b), masked_product(u, b, b));
        break;
    case MotifId::M4:
        zeta = masked_product(b, b, b);
        symmetrize = false;
        break;
    case MotifId::M5:
        zeta = sum(masked_product(u, u, u), masked_product(u, ut, u), masked_product(ut, u, u));
        break;
    case MotifId::M6:
        zeta = sum(masked_product(u, b, u), masked_product(b, ut, ut), masked_product(ut, u, b));
        symmetrize = false;
        break;
    case MotifId::M7:
        zeta = sum(masked_product(ut, b, ut), masked_product(b, u, u), masked_product(u, ut, b));
        symmetrize = false;
        break;
    }
    SparseMatrix counts = symmetrize ? add(zeta, 1.0, zeta.transpose(), 1.0) : zeta;
    return {m, std::move(counts), std::move(zeta)};
}

BlendedAdjacency blend(const SparseMatrix& a, const MotifAdjacency& am, double tau) {
    return blend(a, am.matrix, tau);
}

BlendedAdjacency blend(const SparseMatrix& a, const SparseMatrix& am, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw DomainError(fmt::format("tau must lie in [0, 1], got {}", tau));
    }
    if (a.rows() != am.rows() || a.cols() != am.cols()) {
        throw ShapeError(fmt::format("cannot blend {}x{} with {}x{}", a.rows(), a.cols(), am.rows(), am.cols()));
    }
    return {tau, add(a, 1.0 - tau, am, tau)};
}

}  // namespace mppr
