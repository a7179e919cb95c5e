// SPDX-License-Identifier: Apache-2.0
#include "fiqa/regressor.hpp"

#include <cmath>
#include <span>

#include "fiqa/error.hpp"
#include "fiqa/rng.hpp"

namespace fiqa::regressor {

std::vector<std::size_t> ArchSpec::layer_widths() const {
  std::vector<std::size_t> widths = hidden_dims;
  widths.insert(widths.end(), head_dims.begin(), head_dims.end());
  return widths;
}

void validate_arch(const ArchSpec& arch) {
  if (arch.input_dim == 0) throw Error(Errc::invalid_argument, "input_dim must be positive");
  for (std::size_t d : arch.hidden_dims) {
    if (d == 0) throw Error(Errc::invalid_argument, "hidden dims must be positive");
  }
  if (arch.head_dims.empty() || arch.head_dims.back() != 1) {
    throw Error(Errc::invalid_argument, "head must end in a single output neuron");
  }
  for (std::size_t d : arch.head_dims) {
    if (d == 0) throw Error(Errc::invalid_argument, "head dims must be positive");
  }
}

LayerTensors LayerTensors::zeros(std::size_t in_dim, std::size_t out_dim) {
  LayerTensors t;
  t.in_dim = in_dim;
  t.out_dim = out_dim;
  t.weights.assign(in_dim * out_dim, 0.0);
  t.bias.assign(out_dim, 0.0);
  return t;
}

RegressorParams init(const ArchSpec& arch, std::uint64_t seed) {
  validate_arch(arch);
  RegressorParams params;
  params.arch = arch;

  std::size_t in_dim = arch.input_dim;
  std::size_t layer_index = 0;
  for (std::size_t out_dim : arch.layer_widths()) {
    LayerTensors layer = LayerTensors::zeros(in_dim, out_dim);
    double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
    rng::Stream stream(rng::mix(seed, rng::mix(rng::hash_str("init"), layer_index)));
    for (double& w : layer.weights) w = stream.uniform(-bound, bound);
    params.layers.push_back(std::move(layer));
    in_dim = out_dim;
    ++layer_index;
  }
  return params;
}

std::vector<double> forward(const RegressorParams& params, const Matrix& batch,
                            ForwardCache* cache) {
  if (batch.cols != params.arch.input_dim) {
    throw Error(Errc::shape_mismatch, "batch width does not match input_dim");
  }
  const std::size_t n = batch.rows;
  const std::size_t num_layers = params.layers.size();
  if (cache) {
    cache->inputs.clear();
    cache->preacts.clear();
    cache->inputs.reserve(num_layers);
    cache->preacts.reserve(num_layers);
  }

  Matrix activ = batch;
  Matrix preact;
  for (std::size_t l = 0; l < num_layers; ++l) {
    const LayerTensors& layer = params.layers[l];
    preact = Matrix(n, layer.out_dim);
    for (std::size_t r = 0; r < n; ++r) {
      const double* in_row = activ.row(r);
      double* out_row = preact.row(r);
      for (std::size_t o = 0; o < layer.out_dim; ++o) {
        const double* w = layer.weights.data() + o * layer.in_dim;
        double acc = layer.bias[o];
        for (std::size_t i = 0; i < layer.in_dim; ++i) acc += w[i] * in_row[i];
        out_row[o] = acc;
      }
    }
    if (cache) {
      cache->inputs.push_back(std::move(activ));
      cache->preacts.push_back(preact);
    }
    if (l + 1 < num_layers) {
      // rectifier on every layer but the last
      for (double& v : preact.values) v = v > 0.0 ? v : 0.0;
    }
    activ = std::move(preact);
  }

  std::vector<double> predictions(n);
  for (std::size_t r = 0; r < n; ++r) predictions[r] = activ.at(r, 0);
  return predictions;
}

GradientSet backward(const RegressorParams& params, const ForwardCache& cache,
                     std::span<const double> grad_predictions) {
  const std::size_t num_layers = params.layers.size();
  if (cache.inputs.size() != num_layers || cache.preacts.size() != num_layers) {
    throw Error(Errc::stale_cache, "cache layer count does not match params");
  }
  for (std::size_t l = 0; l < num_layers; ++l) {
    if (cache.inputs[l].cols != params.layers[l].in_dim ||
        cache.preacts[l].cols != params.layers[l].out_dim) {
      throw Error(Errc::stale_cache, "cache shapes do not match params");
    }
  }
  const std::size_t n = cache.inputs.front().rows;
  if (grad_predictions.size() != n) {
    throw Error(Errc::stale_cache, "gradient length does not match cached batch");
  }

  GradientSet grads;
  grads.layers.resize(num_layers);

  // dZ for the output layer is just the prediction gradient (no activation).
  Matrix dz(n, 1);
  for (std::size_t r = 0; r < n; ++r) dz.at(r, 0) = grad_predictions[r];

  for (std::size_t l = num_layers; l-- > 0;) {
    const LayerTensors& layer = params.layers[l];
    const Matrix& input = cache.inputs[l];
    LayerTensors grad = LayerTensors::zeros(layer.in_dim, layer.out_dim);

    for (std::size_t r = 0; r < n; ++r) {
      const double* dz_row = dz.row(r);
      const double* in_row = input.row(r);
      for (std::size_t o = 0; o < layer.out_dim; ++o) {
        double g = dz_row[o];
        if (g == 0.0) continue;
        grad.bias[o] += g;
        double* wg = grad.weights.data() + o * layer.in_dim;
        for (std::size_t i = 0; i < layer.in_dim; ++i) wg[i] += g * in_row[i];
      }
    }

    if (l > 0) {
      // dX = dZ * W, then gate through the previous layer's rectifier.
      Matrix dx(n, layer.in_dim);
      for (std::size_t r = 0; r < n; ++r) {
        const double* dz_row = dz.row(r);
        double* dx_row = dx.row(r);
        for (std::size_t o = 0; o < layer.out_dim; ++o) {
          double g = dz_row[o];
          if (g == 0.0) continue;
          const double* w = layer.weights.data() + o * layer.in_dim;
          for (std::size_t i = 0; i < layer.in_dim; ++i) dx_row[i] += g * w[i];
        }
      }
      const Matrix& prev_preact = cache.preacts[l - 1];
      for (std::size_t k = 0; k < dx.values.size(); ++k) {
        if (prev_preact.values[k] <= 0.0) dx.values[k] = 0.0;
      }
      dz = std::move(dx);
    }
    grads.layers[l] = std::move(grad);
  }
  return grads;
}

std::uint64_t count_params(const ArchSpec& arch) {
  validate_arch(arch);
  std::uint64_t total = 0;
  std::size_t in_dim = arch.input_dim;
  for (std::size_t out_dim : arch.layer_widths()) {
    total += static_cast<std::uint64_t>(out_dim) * in_dim + out_dim;
    in_dim = out_dim;
  }
  return total;
}

std::uint64_t count_params(const RegressorParams& params) { return count_params(params.arch); }

std::uint64_t estimate_flops(const ArchSpec& arch) {
  validate_arch(arch);
  std::uint64_t total = 0;
  std::size_t in_dim = arch.input_dim;
  for (std::size_t out_dim : arch.layer_widths()) {
    total += 2ULL * out_dim * in_dim;
    in_dim = out_dim;
  }
  return total;
}

std::uint64_t estimate_flops(const RegressorParams& params) { return estimate_flops(params.arch); }

}  // namespace fiqa::regressor
