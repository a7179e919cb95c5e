// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fiqa::metrics {

// Evaluation summary for one model on one dataset. `score` is the challenge
// ranking value, the arithmetic mean of SRCC and PLCC.
struct EvalReport {
  double srcc = 0.0;
  double plcc = 0.0;
  double score = 0.0;
  std::uint64_t param_count = 0;
  std::uint64_t flops = 0;
};

// Pearson linear correlation, clamped to [-1, 1] to absorb rounding.
// Throws ConstantSequence when either argument has zero variance.
double plcc(std::span<const double> predictions, std::span<const double> targets);

// Spearman rank correlation: Pearson correlation of fractional ranks.
double srcc(std::span<const double> predictions, std::span<const double> targets);

// 1-based ranks; ties receive the average of the positions they span.
std::vector<double> fractional_ranks(std::span<const double> values);

// SRCC, PLCC and their mean. param_count/flops are left zero.
EvalReport challenge_score(std::span<const double> predictions, std::span<const double> targets);

}  // namespace fiqa::metrics
