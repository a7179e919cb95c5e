// SPDX-License-Identifier: Apache-2.0
#include "fiqa/losses.hpp"

#include <cmath>
#include <numeric>

#include "fiqa/error.hpp"

namespace fiqa::losses {

namespace {

void check_lengths(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size()) {
    throw Error(Errc::length_mismatch, "predictions and targets differ in length");
  }
  if (predictions.empty()) {
    throw Error(Errc::empty_batch, "loss over an empty batch");
  }
}

double centered(std::span<const double> x, std::vector<double>& out) {
  double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  out.resize(x.size());
  double sumsq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = x[i] - mean;
    sumsq += out[i] * out[i];
  }
  return sumsq;
}

// Shared core; returns false instead of throwing when the batch is
// degenerate, so total_loss can drop the term.
bool plcc_loss_core(std::span<const double> predictions, std::span<const double> targets,
                    LossResult& result, bool strict) {
  if (predictions.size() < 2) {
    if (strict) throw Error(Errc::batch_too_small, "correlation loss requires N >= 2");
    return false;
  }
  std::vector<double> u, v;
  double su = centered(predictions, u);  // sum u^2
  double sv = centered(targets, v);
  if (su == 0.0) {
    if (strict) throw Error(Errc::constant_predictions, "constant predictions in batch");
    return false;
  }
  if (sv == 0.0) {
    if (strict) throw Error(Errc::constant_targets, "constant targets in batch");
    return false;
  }
  double norm_u = std::sqrt(su);
  double norm_v = std::sqrt(sv);
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
  double rho = dot / (norm_u * norm_v);

  result.value = (1.0 - rho) / 2.0;
  result.grad_predictions.resize(predictions.size());
  // dL/dy_hat_i = -(1/2) (v_i/(|u||v|) - rho u_i/|u|^2); already zero-mean, so
  // no extra centering projection is needed.
  for (std::size_t i = 0; i < u.size(); ++i) {
    result.grad_predictions[i] = -0.5 * (v[i] / (norm_u * norm_v) - rho * u[i] / su);
  }
  return true;
}

}  // namespace

LossResult mse_loss(std::span<const double> predictions, std::span<const double> targets) {
  check_lengths(predictions, targets);
  const double n = static_cast<double>(predictions.size());
  LossResult result;
  result.grad_predictions.resize(predictions.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    double diff = targets[i] - predictions[i];
    sum += diff * diff;
    result.grad_predictions[i] = (2.0 / n) * (predictions[i] - targets[i]);
  }
  result.value = sum / n;
  return result;
}

LossResult plcc_loss(std::span<const double> predictions, std::span<const double> targets) {
  check_lengths(predictions, targets);
  LossResult result;
  plcc_loss_core(predictions, targets, result, /*strict=*/true);
  return result;
}

LossResult total_loss(std::span<const double> predictions, std::span<const double> targets,
                      const LossConfig& cfg) {
  check_lengths(predictions, targets);
  LossResult result = mse_loss(predictions, targets);
  if (cfg.lambda == 0.0) return result;

  LossResult corr;
  if (plcc_loss_core(predictions, targets, corr, /*strict=*/false)) {
    result.value += cfg.lambda * corr.value;
    for (std::size_t i = 0; i < result.grad_predictions.size(); ++i) {
      result.grad_predictions[i] += cfg.lambda * corr.grad_predictions[i];
    }
  }
  return result;
}

}  // namespace fiqa::losses
