// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace fiqa {

// Dense row-major matrix of doubles. All model math runs in 64-bit.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double* row(std::size_t r) { return values.data() + r * cols; }
  const double* row(std::size_t r) const { return values.data() + r * cols; }
};

// Min-max constants mapping raw MOS values onto [0, 1]. They travel inside
// checkpoints so inference can denormalize without the training data.
struct ScoreNorm {
  double mos_min = 0.0;
  double mos_max = 1.0;
};

inline double normalize_score(double mos, const ScoreNorm& norm) {
  return (mos - norm.mos_min) / (norm.mos_max - norm.mos_min);
}

inline double denormalize_score(double value, const ScoreNorm& norm) {
  return norm.mos_min + value * (norm.mos_max - norm.mos_min);
}

}  // namespace fiqa
