// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace fiqa::losses {

struct LossConfig {
  double lambda = 1.0;  // weight of the correlation term
};

struct LossResult {
  double value = 0.0;
  std::vector<double> grad_predictions;  // dL/dy_hat, same length as predictions
};

// Mean squared error over the batch: (1/N) sum (y_i - y_hat_i)^2.
LossResult mse_loss(std::span<const double> predictions, std::span<const double> targets);

// Correlation loss (1 - rho)/2 with rho the batch Pearson correlation.
// Strict: throws on N < 2 or constant predictions/targets.
LossResult plcc_loss(std::span<const double> predictions, std::span<const double> targets);

// mse + lambda * plcc_loss. The correlation term is silently dropped when the
// batch is degenerate for it (N < 2, constant predictions, or constant
// targets) so training survives early flat batches.
LossResult total_loss(std::span<const double> predictions, std::span<const double> targets,
                      const LossConfig& cfg);

}  // namespace fiqa::losses
