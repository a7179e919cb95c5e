// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "fiqa/regressor.hpp"

namespace fiqa::optimizer {

struct OptimConfig {
  double lr0 = 1e-4;
  double weight_decay = 1e-6;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double decay_factor = 0.1;
  std::size_t decay_every_epochs = 10;
};

// First/second moment accumulators, shaped like the parameters they track.
struct OptimState {
  std::uint64_t step_count = 0;
  std::vector<regressor::LayerTensors> m;
  std::vector<regressor::LayerTensors> v;
};

OptimState init_state(const regressor::RegressorParams& params);

// lr0 * decay_factor^floor(epoch / decay_every_epochs). Computed in the
// exponent domain so decimal-decade schedules land exactly on their decimal
// values (1e-4 -> 1e-5 -> 1e-6).
double lr_at_epoch(const OptimConfig& cfg, std::size_t epoch);

// One bias-corrected adaptive update with decoupled weight decay (applied to
// weights only, scaled by lr, never mixed into the gradient).
void step(regressor::RegressorParams& params, const regressor::GradientSet& grads,
          OptimState& state, double lr, const OptimConfig& cfg);

}  // namespace fiqa::optimizer
