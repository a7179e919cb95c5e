// SPDX-License-Identifier: Apache-2.0
#include "fiqa/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "fiqa/error.hpp"
#include "fiqa/rng.hpp"
#include "strnum.hpp"

namespace fiqa::dataset {

using nlohmann::json;

const char* provenance_name(Provenance p) noexcept {
  switch (p) {
    case Provenance::human: return "human";
    case Provenance::teacher_v1: return "teacher_v1";
    case Provenance::teacher_v2: return "teacher_v2";
  }
  return "human";
}

std::optional<Provenance> provenance_from_name(std::string_view name) noexcept {
  if (name == "human") return Provenance::human;
  if (name == "teacher_v1") return Provenance::teacher_v1;
  if (name == "teacher_v2") return Provenance::teacher_v2;
  return std::nullopt;
}

DatasetHandle::DatasetHandle(std::vector<Sample> samples, std::optional<ScoreNorm> norm)
    : samples_(std::move(samples)), norm_(norm) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(samples_.size());
  for (const Sample& s : samples_) {
    if (!seen.insert(s.id).second) {
      throw Error(Errc::duplicate_id, "duplicate sample id: " + s.id);
    }
    if (s.mos && !std::isfinite(*s.mos)) {
      throw Error(Errc::non_finite_value, "non-finite label on sample " + s.id);
    }
  }
}

bool DatasetHandle::all_labeled() const {
  return std::all_of(samples_.begin(), samples_.end(),
                     [](const Sample& s) { return s.mos.has_value(); });
}

bool DatasetHandle::all_unlabeled() const {
  return std::none_of(samples_.begin(), samples_.end(),
                      [](const Sample& s) { return s.mos.has_value(); });
}

std::vector<double> DatasetHandle::labels() const {
  std::vector<double> out;
  out.reserve(samples_.size());
  for (const Sample& s : samples_) {
    if (!s.mos) throw Error(Errc::invalid_argument, "labels() on unlabeled sample " + s.id);
    out.push_back(*s.mos);
  }
  return out;
}

SplitResult split(const DatasetHandle& data, const SplitSpec& spec) {
  if (data.size() < 2) throw Error(Errc::too_few_samples, "split needs at least 2 samples");
  if (!data.all_labeled()) throw Error(Errc::invalid_argument, "split requires a labeled dataset");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw Error(Errc::invalid_argument, "train_fraction must lie in (0, 1)");
  }

  const std::size_t n = data.size();
  auto perm = rng::permutation(n, rng::mix(spec.seed, rng::hash_str("split")));
  auto train_size = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(n)));

  std::vector<Sample> train_samples, val_samples;
  train_samples.reserve(train_size);
  val_samples.reserve(n - train_size);
  for (std::size_t i = 0; i < n; ++i) {
    const Sample& s = data.samples()[perm[i]];
    if (i < train_size) {
      train_samples.push_back(s);
    } else {
      val_samples.push_back(s);
    }
  }
  return SplitResult{DatasetHandle(std::move(train_samples), data.norm()),
                     DatasetHandle(std::move(val_samples), data.norm())};
}

std::vector<std::vector<std::size_t>> batch_index_sets(std::size_t n_samples,
                                                       std::size_t batch_size, std::uint64_t seed,
                                                       std::size_t epoch) {
  if (batch_size == 0) throw Error(Errc::invalid_argument, "batch_size must be positive");
  auto perm = rng::permutation(n_samples, rng::mix(rng::mix(seed, rng::hash_str("batches")), epoch));
  std::vector<std::vector<std::size_t>> sets;
  for (std::size_t start = 0; start < n_samples; start += batch_size) {
    std::size_t end = std::min(start + batch_size, n_samples);
    sets.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(start),
                      perm.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return sets;
}

std::vector<Batch> batches(const DatasetHandle& data, std::size_t batch_size, std::uint64_t seed,
                           std::size_t epoch) {
  if (!data.all_labeled()) throw Error(Errc::invalid_argument, "batches require labeled data");
  std::size_t dim = 0;
  for (const Sample& s : data.samples()) {
    if (!s.has_features()) {
      throw Error(Errc::invalid_argument,
                  "feature batches require feature payloads (sample " + s.id + ")");
    }
    if (dim == 0) dim = s.features().size();
  }

  std::vector<Batch> out;
  for (auto& indices : batch_index_sets(data.size(), batch_size, seed, epoch)) {
    Batch b;
    b.features = Matrix(indices.size(), dim);
    b.targets.reserve(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
      const Sample& s = data.samples()[indices[r]];
      if (s.features().size() != dim) {
        throw Error(Errc::shape_mismatch, "inconsistent feature dim on sample " + s.id);
      }
      std::copy(s.features().begin(), s.features().end(), b.features.row(r));
      b.targets.push_back(*s.mos);
    }
    b.sample_indices = std::move(indices);
    out.push_back(std::move(b));
  }
  return out;
}

NormalizeResult normalize_scores(const DatasetHandle& data) {
  if (!data.all_labeled() || data.empty()) {
    throw Error(Errc::invalid_argument, "normalize_scores requires a labeled dataset");
  }
  auto labels = data.labels();
  auto [lo_it, hi_it] = std::minmax_element(labels.begin(), labels.end());
  if (*lo_it == *hi_it) {
    throw Error(Errc::degenerate_scale, "all labels equal; cannot normalize");
  }
  ScoreNorm norm{*lo_it, *hi_it};
  std::vector<Sample> samples = data.samples();
  for (Sample& s : samples) s.mos = normalize_score(*s.mos, norm);
  return NormalizeResult{DatasetHandle(std::move(samples), norm), norm};
}

DatasetHandle attach_pseudo_labels(const DatasetHandle& pool,
                                   const std::map<std::string, double>& predictions,
                                   Provenance provenance) {
  if (provenance == Provenance::human) {
    throw Error(Errc::invalid_argument, "pseudo labels cannot carry human provenance");
  }
  std::vector<Sample> samples = pool.samples();
  for (Sample& s : samples) {
    if (s.mos) throw Error(Errc::already_labeled, "pool sample already labeled: " + s.id);
    auto it = predictions.find(s.id);
    if (it == predictions.end()) {
      throw Error(Errc::missing_prediction, "no prediction for pool sample " + s.id);
    }
    s.mos = std::clamp(it->second, 0.0, 1.0);
    s.provenance = provenance;
  }
  return DatasetHandle(std::move(samples), pool.norm());
}

namespace {

// The hidden scoring function: d -> 8 rectifier units -> 1, squashed by a
// logistic. Weights depend only on the generator seed.
struct OracleNet {
  std::size_t dim;
  std::vector<double> w1, b1, w2;
  double b2;

  explicit OracleNet(std::size_t feature_dim, std::uint64_t seed) : dim(feature_dim) {
    rng::Stream stream(rng::mix(seed, rng::hash_str("oracle")));
    const std::size_t hidden = 8;
    double bound1 = 1.0 / std::sqrt(static_cast<double>(dim));
    w1.resize(hidden * dim);
    b1.resize(hidden);
    w2.resize(hidden);
    for (double& w : w1) w = stream.uniform(-bound1, bound1);
    for (double& b : b1) b = stream.uniform(-0.5, 0.5);
    for (double& w : w2) w = stream.uniform(-1.8, 1.8);
    b2 = stream.uniform(-0.25, 0.25);
  }

  double score(const std::vector<double>& x) const {
    double s = b2;
    for (std::size_t j = 0; j < w2.size(); ++j) {
      double pre = b1[j];
      const double* row = w1.data() + j * dim;
      for (std::size_t i = 0; i < dim; ++i) pre += row[i] * x[i];
      if (pre > 0.0) s += w2[j] * pre;
    }
    return 1.0 / (1.0 + std::exp(-s));
  }
};

std::string make_id(const char* prefix, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%06zu", prefix, index);
  return buf;
}

}  // namespace

SyntheticBundle generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_labeled == 0 || spec.n_pool1 == 0 || spec.n_pool2 == 0 || spec.feature_dim == 0) {
    throw Error(Errc::invalid_argument, "synthetic sizes must be positive");
  }
  OracleNet oracle(spec.feature_dim, spec.seed);
  rng::Stream noise(rng::mix(spec.seed, rng::hash_str("noise")));

  auto draw_set = [&](const char* prefix, std::size_t count, bool labeled, const char* salt,
                      std::vector<std::pair<std::string, double>>& truth) {
    rng::Stream features(rng::mix(spec.seed, rng::hash_str(salt)));
    std::vector<Sample> samples;
    samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      Sample s;
      s.id = make_id(prefix, i);
      std::vector<double> x(spec.feature_dim);
      for (double& v : x) v = features.normal();
      double g = oracle.score(x);
      truth.emplace_back(s.id, g);
      if (labeled) {
        s.mos = std::clamp(g + spec.noise_sigma * noise.normal(), 0.0, 1.0);
      }
      s.payload = std::move(x);
      samples.push_back(std::move(s));
    }
    return DatasetHandle(std::move(samples));
  };

  SyntheticBundle bundle;
  bundle.labeled = draw_set("lab", spec.n_labeled, true, "features:lab", bundle.labeled_truth);
  bundle.pool1 = draw_set("p1", spec.n_pool1, false, "features:p1", bundle.pool1_truth);
  bundle.pool2 = draw_set("p2", spec.n_pool2, false, "features:p2", bundle.pool2_truth);
  return bundle;
}

void save_dataset(const DatasetHandle& data, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::io_error, "cannot open dataset for writing: " + path.string());
  for (const Sample& s : data.samples()) {
    json record;
    record["id"] = s.id;
    record["provenance"] = provenance_name(s.provenance);
    if (s.has_features()) {
      record["features"] = s.features();
    } else {
      record["image"] = s.image_path();
    }
    if (s.mos) record["mos"] = *s.mos;
    os << record.dump() << '\n';
  }
  if (!os) throw Error(Errc::io_error, "write failed: " + path.string());
}

DatasetHandle load_dataset(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::io_error, "cannot open dataset: " + path.string());

  auto fail = [](std::size_t line, const std::string& why) -> void {
    throw Error(Errc::parse_error, "line " + std::to_string(line) + ": " + why);
  };

  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(line_no, e.what());
    }
    if (!record.is_object()) fail(line_no, "record is not a key-value document");

    for (const auto& [key, _] : record.items()) {
      if (key != "id" && key != "provenance" && key != "features" && key != "image" &&
          key != "mos") {
        fail(line_no, "unknown key '" + key + "'");
      }
    }

    Sample s;
    if (!record.contains("id") || !record["id"].is_string()) fail(line_no, "missing id");
    s.id = record["id"].get<std::string>();

    if (!record.contains("provenance") || !record["provenance"].is_string()) {
      fail(line_no, "missing provenance");
    }
    auto prov = provenance_from_name(record["provenance"].get<std::string>());
    if (!prov) fail(line_no, "unknown provenance '" + record["provenance"].get<std::string>() + "'");
    s.provenance = *prov;

    bool has_features = record.contains("features");
    bool has_image = record.contains("image");
    if (has_features == has_image) fail(line_no, "need exactly one of features/image");
    if (has_features) {
      if (!record["features"].is_array()) fail(line_no, "features must be an array");
      std::vector<double> x;
      for (const auto& v : record["features"]) {
        if (!v.is_number()) fail(line_no, "features must be numeric");
        x.push_back(v.get<double>());
      }
      s.payload = std::move(x);
    } else {
      if (!record["image"].is_string()) fail(line_no, "image must be a path string");
      s.payload = record["image"].get<std::string>();
    }

    if (record.contains("mos")) {
      if (!record["mos"].is_number()) fail(line_no, "mos must be numeric");
      s.mos = record["mos"].get<double>();
    }
    samples.push_back(std::move(s));
  }
  return DatasetHandle(std::move(samples));
}

void save_answers(const std::vector<std::pair<std::string, double>>& answers,
                  const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::io_error, "cannot open answer file for writing: " + path.string());
  for (const auto& [id, value] : answers) {
    os << id << ' ' << detail::format_double(value) << '\n';
  }
  if (!os) throw Error(Errc::io_error, "write failed: " + path.string());
}

std::vector<std::pair<std::string, double>> load_answers(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::io_error, "cannot open answer file: " + path.string());
  std::vector<std::pair<std::string, double>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto space = line.find(' ');
    double value = 0.0;
    if (space == std::string::npos ||
        !detail::parse_double(std::string_view(line).substr(space + 1), value)) {
      throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": expected 'id value'");
    }
    out.emplace_back(line.substr(0, space), value);
  }
  return out;
}

}  // namespace fiqa::dataset
