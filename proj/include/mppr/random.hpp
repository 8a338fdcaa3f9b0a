// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mppr {

/// Bernoulli keep/drop draws at 16-bit resolution, four per 64-bit word.
class KeepSampler {
public:
    KeepSampler(double drop_rate, std::mt19937_64& rng)
        : threshold_(static_cast<std::uint32_t>(std::lround(drop_rate * 65536.0))), rng_(rng) {}

    /// True with probability 1 - drop_rate.
    bool next() {
        if (left_ == 0) {
            bits_ = rng_();
            left_ = 4;
        }
        const auto chunk = static_cast<std::uint32_t>(bits_ & 0xFFFFu);
        bits_ >>= 16;
        --left_;
        return chunk >= threshold_;
    }

private:
    std::uint32_t threshold_;
    std::mt19937_64& rng_;
    std::uint64_t bits_ = 0;
    int left_ = 0;
};

/// Derives an independent stream seed from a base seed and a stream index
/// (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace mppr
