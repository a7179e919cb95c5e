// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>

#include "fiqa/optimizer.hpp"
#include "fiqa/regressor.hpp"

namespace fiqa::checkpoint {

inline constexpr int kFormatVersion = 1;

struct Checkpoint {
  regressor::RegressorParams params;
  std::optional<optimizer::OptimState> optim_state;  // present for resumable training
};

// Plain-text format, fixed field order, decimal literals that round-trip
// bit-exactly. Rejects unknown format versions.
void save(const Checkpoint& ckpt, const std::filesystem::path& path);
void save(const regressor::RegressorParams& params, const std::filesystem::path& path);
Checkpoint load(const std::filesystem::path& path);

}  // namespace fiqa::checkpoint
