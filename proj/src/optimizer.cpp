// SPDX-License-Identifier: Apache-2.0
#include "fiqa/optimizer.hpp"

#include <cmath>

#include "fiqa/error.hpp"

namespace fiqa::optimizer {

OptimState init_state(const regressor::RegressorParams& params) {
  OptimState state;
  for (const auto& layer : params.layers) {
    state.m.push_back(regressor::LayerTensors::zeros(layer.in_dim, layer.out_dim));
    state.v.push_back(regressor::LayerTensors::zeros(layer.in_dim, layer.out_dim));
  }
  return state;
}

double lr_at_epoch(const OptimConfig& cfg, std::size_t epoch) {
  std::size_t k = cfg.decay_every_epochs > 0 ? epoch / cfg.decay_every_epochs : 0;
  if (k == 0) return cfg.lr0;
  return std::pow(10.0, std::log10(cfg.lr0) +
                            static_cast<double>(k) * std::log10(cfg.decay_factor));
}

namespace {

void check_congruent(const regressor::RegressorParams& params,
                     const regressor::GradientSet& grads, const OptimState& state) {
  if (grads.layers.size() != params.layers.size() || state.m.size() != params.layers.size() ||
      state.v.size() != params.layers.size()) {
    throw Error(Errc::shape_mismatch, "gradient/state layer count mismatch");
  }
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& p = params.layers[l];
    const auto& g = grads.layers[l];
    if (g.in_dim != p.in_dim || g.out_dim != p.out_dim ||
        g.weights.size() != p.weights.size() || g.bias.size() != p.bias.size()) {
      throw Error(Errc::shape_mismatch, "gradient shape mismatch");
    }
    for (double v : g.weights) {
      if (!std::isfinite(v)) throw Error(Errc::non_finite_gradient, "non-finite weight gradient");
    }
    for (double v : g.bias) {
      if (!std::isfinite(v)) throw Error(Errc::non_finite_gradient, "non-finite bias gradient");
    }
  }
}

}  // namespace

void step(regressor::RegressorParams& params, const regressor::GradientSet& grads,
          OptimState& state, double lr, const OptimConfig& cfg) {
  check_congruent(params, grads, state);
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);

  auto update = [&](double& param, double grad, double& m, double& v, bool decay) {
    if (decay) param *= 1.0 - lr * cfg.weight_decay;
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad * grad;
    double m_hat = m / bc1;
    double v_hat = v / bc2;
    param -= lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  };

  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    auto& p = params.layers[l];
    const auto& g = grads.layers[l];
    auto& m = state.m[l];
    auto& v = state.v[l];
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
      update(p.weights[i], g.weights[i], m.weights[i], v.weights[i], true);
    }
    for (std::size_t i = 0; i < p.bias.size(); ++i) {
      // biases are excluded from weight decay
      update(p.bias[i], g.bias[i], m.bias[i], v.bias[i], false);
    }
  }
}

}  // namespace fiqa::optimizer
