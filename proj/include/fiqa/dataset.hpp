// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fiqa/types.hpp"

namespace fiqa::dataset {

// Where a label came from. Human labels are never overwritten by model
// predictions; pseudo labels record which teacher round produced them.
enum class Provenance { human, teacher_v1, teacher_v2 };

const char* provenance_name(Provenance p) noexcept;
std::optional<Provenance> provenance_from_name(std::string_view name) noexcept;

struct Sample {
  std::string id;
  std::variant<std::vector<double>, std::string> payload;  // features or image path
  std::optional<double> mos;
  Provenance provenance = Provenance::human;

  bool has_features() const { return std::holds_alternative<std::vector<double>>(payload); }
  const std::vector<double>& features() const { return std::get<std::vector<double>>(payload); }
  const std::string& image_path() const { return std::get<std::string>(payload); }
};

// Immutable ordered collection of samples with unique ids.
class DatasetHandle {
 public:
  DatasetHandle() = default;
  explicit DatasetHandle(std::vector<Sample> samples, std::optional<ScoreNorm> norm = std::nullopt);

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const std::optional<ScoreNorm>& norm() const { return norm_; }

  bool all_labeled() const;
  bool all_unlabeled() const;
  std::vector<double> labels() const;  // requires all_labeled

 private:
  std::vector<Sample> samples_;
  std::optional<ScoreNorm> norm_;
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

struct SplitResult {
  DatasetHandle train;
  DatasetHandle val;
};

// Disjoint exhaustive partition; train size = round(train_fraction * n),
// permutation determined solely by the seed.
SplitResult split(const DatasetHandle& data, const SplitSpec& spec);

struct Batch {
  Matrix features;
  std::vector<double> targets;
  std::vector<std::size_t> sample_indices;
};

// Index sets of one epoch: a seeded per-epoch shuffle chopped into
// batch_size chunks, final short chunk included.
std::vector<std::vector<std::size_t>> batch_index_sets(std::size_t n_samples,
                                                       std::size_t batch_size, std::uint64_t seed,
                                                       std::size_t epoch);

// Materialized feature/target batches; requires labeled feature payloads.
std::vector<Batch> batches(const DatasetHandle& data, std::size_t batch_size, std::uint64_t seed,
                           std::size_t epoch);

struct NormalizeResult {
  DatasetHandle data;
  ScoreNorm norm;
};

// Min-max map of all labels onto [0, 1]; the constants are kept for
// checkpoint storage.
NormalizeResult normalize_scores(const DatasetHandle& data);

// Labels an unlabeled pool with clamp(prediction, 0, 1) and the given
// teacher provenance. Every pool id must be covered.
DatasetHandle attach_pseudo_labels(const DatasetHandle& pool,
                                   const std::map<std::string, double>& predictions,
                                   Provenance provenance);

struct SyntheticSpec {
  std::size_t n_labeled = 2000;
  std::size_t n_pool1 = 10000;
  std::size_t n_pool2 = 10000;
  std::size_t feature_dim = 64;
  double noise_sigma = 0.02;
  std::uint64_t seed = 1;
};

struct SyntheticBundle {
  DatasetHandle labeled;
  DatasetHandle pool1;
  DatasetHandle pool2;
  // Ground-truth scores g(x), in dataset order; pools carry them only here
  // (and in the hidden answer files), never in the sample records.
  std::vector<std::pair<std::string, double>> labeled_truth;
  std::vector<std::pair<std::string, double>> pool1_truth;
  std::vector<std::pair<std::string, double>> pool2_truth;
};

// Seeded benchmark: standard-normal features scored by a fixed hidden
// two-layer rectifier network squashed through a logistic, labels perturbed
// by gaussian noise and clamped to [0, 1].
SyntheticBundle generate_synthetic(const SyntheticSpec& spec);

// Line-delimited JSON records; round trip preserves everything bit-exactly.
void save_dataset(const DatasetHandle& data, const std::filesystem::path& path);
DatasetHandle load_dataset(const std::filesystem::path& path);

// Hidden answer files: lines of "id value".
void save_answers(const std::vector<std::pair<std::string, double>>& answers,
                  const std::filesystem::path& path);
std::vector<std::pair<std::string, double>> load_answers(const std::filesystem::path& path);

}  // namespace fiqa::dataset
