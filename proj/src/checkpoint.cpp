// Copyright 2026 The mppr Authors
// SPDX-License-Identifier: Apache-2.0

#include "mppr/checkpoint.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "mppr/errors.hpp"

namespace mppr {

namespace {

constexpr std::array<char, 8> kMagic{'M', 'P', 'P', 'R', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T value{};
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
        throw ParseError("truncated checkpoint");
    }
    return value;
}

void put_matrix(std::ostream& out, const DenseMatrix& m) {
    out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
}

DenseMatrix get_matrix(std::istream& in, std::uint64_t rows, std::uint64_t cols) {
    DenseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    if (!in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)))) {
        throw ParseError("truncated checkpoint");
    }
    return m;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
    const auto& model = ckpt.model;
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint64_t>(out, model.num_features());
    put<std::uint64_t>(out, model.hidden());
    put<std::uint64_t>(out, model.num_outputs());
    put<double>(out, model.dropout_rate);
    put<double>(out, model.input_dropout_rate);
    put<double>(out, model.l2_lambda);
    put_matrix(out, model.w0);
    put_matrix(out, model.w1);

    AdamState opt = ckpt.optimizer;
    if (opt.m0.size() == 0) {
        const auto zeros = AdamState::zeros_like(model);
        opt.m0 = zeros.m0;
        opt.v0 = zeros.v0;
        opt.m1 = zeros.m1;
        opt.v1 = zeros.v1;
    }
    put<std::uint64_t>(out, opt.step);
    put<double>(out, opt.beta1);
    put<double>(out, opt.beta2);
    put<double>(out, opt.epsilon);
    put_matrix(out, opt.m0);
    put_matrix(out, opt.v0);
    put_matrix(out, opt.m1);
    put_matrix(out, opt.v1);
}

Checkpoint read_checkpoint(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw ParseError("not a checkpoint (bad magic bytes)");
    }
    const auto version = get<std::uint32_t>(in);
    if (version != kCheckpointVersion) {
        throw ParseError(fmt::format("unsupported checkpoint version {}", version));
    }
    const auto f = get<std::uint64_t>(in);
    const auto h = get<std::uint64_t>(in);
    const auto c = get<std::uint64_t>(in);
    Checkpoint ckpt;
    ckpt.model.dropout_rate = get<double>(in);
    ckpt.model.input_dropout_rate = get<double>(in);
    ckpt.model.l2_lambda = get<double>(in);
    ckpt.model.w0 = get_matrix(in, f, h);
    ckpt.model.w1 = get_matrix(in, h, c);
    ckpt.optimizer.step = get<std::uint64_t>(in);
    ckpt.optimizer.beta1 = get<double>(in);
    ckpt.optimizer.beta2 = get<double>(in);
    ckpt.optimizer.epsilon = get<double>(in);
    ckpt.optimizer.m0 = get_matrix(in, f, h);
    ckpt.optimizer.v0 = get_matrix(in, f, h);
    ckpt.optimizer.m1 = get_matrix(in, h, c);
    ckpt.optimizer.v1 = get_matrix(in, h, c);
    return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt, const nlohmann::json& hyper_params) {
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw IoError(fmt::format("cannot write '{}'", path.string()));
        }
        write_checkpoint(out, ckpt);
    }
    const auto sidecar = path.string() + ".json";
    std::ofstream meta(sidecar);
    if (!meta) {
        throw IoError(fmt::format("cannot write '{}'", sidecar));
    }
    meta << hyper_params.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}'", path.string()));
    }
    return read_checkpoint(in);
}

}  // namespace mppr
