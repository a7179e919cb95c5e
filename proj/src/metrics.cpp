// SPDX-License-Identifier: Apache-2.0
#include "fiqa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fiqa/error.hpp"

namespace fiqa::metrics {

namespace {

void check_pairs(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size()) {
    throw Error(Errc::length_mismatch, "predictions and targets differ in length");
  }
  if (predictions.size() < 2) {
    throw Error(Errc::too_few_samples, "correlation requires at least 2 pairs");
  }
  for (double v : predictions) {
    if (!std::isfinite(v)) throw Error(Errc::non_finite_value, "non-finite prediction");
  }
  for (double v : targets) {
    if (!std::isfinite(v)) throw Error(Errc::non_finite_value, "non-finite target");
  }
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
  double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double da = a[i] - mean_a;
    double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    throw Error(Errc::constant_sequence, "zero variance in correlation input");
  }
  double rho = cov / std::sqrt(var_a * var_b);
  return std::clamp(rho, -1.0, 1.0);
}

}  // namespace

double plcc(std::span<const double> predictions, std::span<const double> targets) {
  check_pairs(predictions, targets);
  return pearson(predictions, targets);
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the average of 1-based ranks i+1..j+1
    double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double srcc(std::span<const double> predictions, std::span<const double> targets) {
  check_pairs(predictions, targets);
  std::vector<double> rp = fractional_ranks(predictions);
  std::vector<double> rt = fractional_ranks(targets);
  return pearson(rp, rt);
}

EvalReport challenge_score(std::span<const double> predictions, std::span<const double> targets) {
  EvalReport report;
  report.srcc = srcc(predictions, targets);
  report.plcc = plcc(predictions, targets);
  report.score = (report.srcc + report.plcc) / 2.0;
  return report;
}

}  // namespace fiqa::metrics
