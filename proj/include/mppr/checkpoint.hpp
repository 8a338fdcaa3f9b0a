// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <cstdint>
#include <iosfwd>

#include <nlohmann/json.hpp>

#include "mppr/neural.hpp"

namespace mppr {

/// Binary checkpoint layout (little-endian host order):
///   "MPPRCKPT" | u32 version | u64 f, h, c | f64 dropout, input dropout, l2
///   | W0 (f*h, row-major) | W1 (h*c) | u64 adam step | f64 beta1, beta2, eps
///   | m0 | v0 | m1 | v1
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
    MlpModel model;
    AdamState optimizer;
};

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);

/// Writes `path` and a JSON sidecar `path` + ".json" holding `hyper_params`.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt, const nlohmann::json& hyper_params);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mppr
