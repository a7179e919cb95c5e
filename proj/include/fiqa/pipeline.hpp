// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fiqa/checkpoint.hpp"
#include "fiqa/config.hpp"
#include "fiqa/dataset.hpp"
#include "fiqa/metrics.hpp"
#include "fiqa/regressor.hpp"

namespace fiqa::pipeline {

// The five stages, in their only legal order: train the teacher, label pool
// one, retrain the teacher on labeled + pool one, label pool two, distill
// the student from all three sources.
enum class StageId {
  train_teacher,
  pseudo_label1,
  enhance_teacher,
  pseudo_label2,
  distill_student,
};

inline constexpr std::array<StageId, 5> kStageOrder = {
    StageId::train_teacher, StageId::pseudo_label1, StageId::enhance_teacher,
    StageId::pseudo_label2, StageId::distill_student};

const char* stage_name(StageId stage) noexcept;
std::optional<StageId> stage_from_name(std::string_view name) noexcept;

struct TrainReport {
  std::vector<double> train_loss;  // mean summed-source loss per epoch
  std::vector<double> val_srcc;
  std::vector<double> val_plcc;
  std::optional<std::size_t> selected_epoch;  // maximizes (srcc+plcc)/2
  std::optional<metrics::EvalReport> final_eval;
};

struct TrainedModel {
  regressor::RegressorParams params;
  TrainReport report;
};

// Stage 1: fit the teacher on the 80% train split, select the epoch with
// the best validation (srcc+plcc)/2.
TrainedModel train_teacher(const dataset::DatasetHandle& labeled, const config::TrainConfig& cfg);

// Stages 2/4: deterministic inference over an unlabeled pool, optionally
// sharded over disjoint index ranges and merged in id order.
dataset::DatasetHandle pseudo_label(const regressor::RegressorParams& model,
                                    const dataset::DatasetHandle& pool,
                                    dataset::Provenance provenance,
                                    const config::TrainConfig& cfg, std::size_t shards = 1);

// Stage 3: fresh teacher retrained with one labeled and one pseudo batch per
// step, gradients summed. Pass the stage-1 teacher for warm starts.
TrainedModel enhance_teacher(const dataset::DatasetHandle& labeled,
                             const dataset::DatasetHandle& pseudo1, const config::TrainConfig& cfg,
                             const regressor::RegressorParams* warm_start = nullptr);

// Stage 5: student trained with one batch per available source per step.
TrainedModel distill_student(const dataset::DatasetHandle& labeled,
                             const dataset::DatasetHandle& pseudo1,
                             const dataset::DatasetHandle& pseudo2,
                             const config::TrainConfig& cfg);

// Deterministic evaluation (center crops for image payloads) plus the
// model's parameter/FLOP accounting.
metrics::EvalReport evaluate(const regressor::RegressorParams& model,
                             const dataset::DatasetHandle& data,
                             const config::StageResolution& res);

struct PipelineState {
  std::string config_digest;
  std::map<StageId, std::string> artifacts;  // completed stage -> file name

  bool is_complete(StageId stage) const { return artifacts.count(stage) != 0; }
};

void save_state(const PipelineState& state, const std::filesystem::path& path);
PipelineState load_state(const std::filesystem::path& path);

// Throws StageDependencyViolation unless every predecessor of `stage` is
// recorded complete.
void require_predecessors(const PipelineState& state, StageId stage);

// Labeled data plus the two unlabeled pools, either loaded from configured
// paths or produced by the seeded generator (materialized under out_dir the
// first time, loaded back afterwards).
struct DataBundle {
  dataset::DatasetHandle labeled_raw;  // labels still on their original scale
  dataset::DatasetHandle pool1;
  dataset::DatasetHandle pool2;
};

DataBundle load_or_generate_data(const config::TrainConfig& cfg,
                                 const std::filesystem::path& out_dir, std::ostream* log = nullptr);

struct RunResult {
  PipelineState state;
  std::vector<StageId> executed;  // stages actually run by this invocation
  metrics::EvalReport teacher_eval;
  metrics::EvalReport enhanced_eval;
  metrics::EvalReport student_eval;
};

// Executes all five stages in order, persisting one artifact per stage plus
// the state file; reruns skip completed stages while the config digest
// matches (pass force=true to discard a stale state).
RunResult run_all(const config::TrainConfig& cfg, const std::filesystem::path& out_dir,
                  bool force = false, std::ostream* log = nullptr);

// Flat key-value report document, one pair per line.
void write_kv_report(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, std::string>>& entries);

// Artifact file names inside an output directory.
const char* artifact_name(StageId stage) noexcept;

}  // namespace fiqa::pipeline
