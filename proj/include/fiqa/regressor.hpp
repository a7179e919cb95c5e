// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "fiqa/types.hpp"

namespace fiqa::regressor {

// Layer widths of the quality regressor. The chain is
// input_dim -> hidden_dims... -> head_dims..., every layer affine, rectifier
// on all but the last, and the last head width must be 1 (scalar score).
struct ArchSpec {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_dims;
  std::vector<std::size_t> head_dims{128, 1};

  // Full output-width chain: hidden_dims followed by head_dims.
  std::vector<std::size_t> layer_widths() const;
};

void validate_arch(const ArchSpec& arch);

// One affine layer, weights row-major [out_dim x in_dim]. Also reused as the
// per-layer tensor shape for gradients and optimizer moments.
struct LayerTensors {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  static LayerTensors zeros(std::size_t in_dim, std::size_t out_dim);
};

struct RegressorParams {
  ArchSpec arch;
  std::vector<LayerTensors> layers;
  ScoreNorm norm;
};

struct GradientSet {
  std::vector<LayerTensors> layers;
};

// Per-layer inputs and pre-activations from one forward pass; required by
// backward and only valid for the params/batch it was produced from.
struct ForwardCache {
  std::vector<Matrix> inputs;    // inputs[l] feeds layer l
  std::vector<Matrix> preacts;   // affine outputs before the rectifier
};

// Weights uniform on (-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero,
// bit-reproducible for a fixed seed.
RegressorParams init(const ArchSpec& arch, std::uint64_t seed);

// batch is [N x input_dim]; returns one score per row. Pass a cache to
// enable backward.
std::vector<double> forward(const RegressorParams& params, const Matrix& batch,
                            ForwardCache* cache = nullptr);

// dLoss/d(theta) for every weight and bias given dLoss/d(predictions).
GradientSet backward(const RegressorParams& params, const ForwardCache& cache,
                     std::span<const double> grad_predictions);

std::uint64_t count_params(const ArchSpec& arch);
std::uint64_t count_params(const RegressorParams& params);

// Per-sample multiply-add count, a multiply-add counted as 2 FLOPs.
std::uint64_t estimate_flops(const ArchSpec& arch);
std::uint64_t estimate_flops(const RegressorParams& params);

}  // namespace fiqa::regressor
