// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "fiqa/dataset.hpp"
#include "fiqa/losses.hpp"
#include "fiqa/optimizer.hpp"
#include "fiqa/preprocess.hpp"
#include "fiqa/regressor.hpp"

namespace fiqa::config {

struct StageResolution {
  std::size_t short_side = 448;
  std::size_t crop = 448;
};

struct DataPaths {
  std::string labeled;
  std::string pool1;
  std::string pool2;
};

// The full training recipe. Defaults are the published ones: AdamW at 1e-4
// with 1e-6 decoupled decay, x0.1 every 10 epochs, 30 epochs, batch 32,
// lambda 1, 80/20 split, 448/352 train crops and 288 inference.
struct TrainConfig {
  std::uint64_t seed = 1;
  std::size_t epochs = 30;
  std::size_t batch_size = 32;

  regressor::ArchSpec teacher_arch{64, {256, 128}, {128, 1}};
  regressor::ArchSpec student_arch{64, {16}, {128, 1}};

  losses::LossConfig loss;
  optimizer::OptimConfig optim;
  double train_fraction = 0.8;

  StageResolution teacher_res{448, 448};
  StageResolution student_res{352, 352};
  StageResolution inference_res{288, 288};

  std::optional<dataset::SyntheticSpec> synthetic;  // seed field mirrors `seed`
  std::optional<DataPaths> data_paths;

  bool warm_start_enhanced = false;
};

// Built-in defaults with the synthetic benchmark enabled.
TrainConfig default_config();

// Strict section/key parser; any unknown section or key is an error.
TrainConfig parse_config_text(const std::string& text);
TrainConfig load_config(const std::filesystem::path& path);

// Fixed-order serialization; equal configs produce byte-equal text.
std::string canonical_text(const TrainConfig& cfg);

// FNV-1a hash of the canonical text, as 16 hex digits.
std::string digest(const TrainConfig& cfg);

}  // namespace fiqa::config
