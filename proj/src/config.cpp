// SPDX-License-Identifier: Apache-2.0
#include "fiqa/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fiqa/error.hpp"
#include "fiqa/rng.hpp"
#include "strnum.hpp"

namespace fiqa::config {

namespace {

using detail::format_double;
using detail::parse_double;
using detail::parse_u64;

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::config_error, what); }

double want_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  if (!parse_double(value, v)) bad("bad real for " + key + ": '" + value + "'");
  return v;
}

std::uint64_t want_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  if (!parse_u64(value, v)) bad("bad integer for " + key + ": '" + value + "'");
  return v;
}

bool want_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  bad("bad boolean for " + key + ": '" + value + "'");
}

std::vector<std::size_t> want_dims(const std::string& key, const std::string& value) {
  std::vector<std::size_t> dims;
  std::istringstream ss(value);
  std::string tok;
  while (ss >> tok) dims.push_back(static_cast<std::size_t>(want_uint(key, tok)));
  return dims;
}

}  // namespace

TrainConfig default_config() {
  TrainConfig cfg;
  cfg.synthetic = dataset::SyntheticSpec{};
  cfg.synthetic->seed = cfg.seed;
  return cfg;
}

TrainConfig parse_config_text(const std::string& text) {
  TrainConfig cfg;
  bool saw_synthetic = false;
  bool saw_paths = false;
  dataset::SyntheticSpec synthetic;
  DataPaths paths;

  std::istringstream is(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') bad("line " + std::to_string(line_no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"loss",
                                    "optim",
                                    "split",
                                    "arch.teacher",
                                    "arch.student",
                                    "preprocess.teacher",
                                    "preprocess.student",
                                    "preprocess.inference",
                                    "data.synthetic",
                                    "data.paths",
                                    "pipeline"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) bad("unknown section [" + section + "]");
      if (section == "data.synthetic") saw_synthetic = true;
      if (section == "data.paths") saw_paths = true;
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) bad("line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) bad("line " + std::to_string(line_no) + ": empty key");
    std::string qualified = section.empty() ? key : section + "." + key;

    if (qualified == "seed") {
      cfg.seed = want_uint(qualified, value);
    } else if (qualified == "epochs") {
      cfg.epochs = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "batch_size") {
      cfg.batch_size = static_cast<std::size_t>(want_uint(qualified, value));
      if (cfg.batch_size == 0) bad("batch_size must be positive");
    } else if (qualified == "loss.lambda") {
      cfg.loss.lambda = want_real(qualified, value);
      if (cfg.loss.lambda < 0) bad("loss.lambda must be nonnegative");
    } else if (qualified == "optim.lr0") {
      cfg.optim.lr0 = want_real(qualified, value);
      if (cfg.optim.lr0 <= 0) bad("optim.lr0 must be positive");
    } else if (qualified == "optim.weight_decay") {
      cfg.optim.weight_decay = want_real(qualified, value);
      if (cfg.optim.weight_decay < 0) bad("optim.weight_decay must be nonnegative");
    } else if (qualified == "optim.beta1") {
      cfg.optim.beta1 = want_real(qualified, value);
    } else if (qualified == "optim.beta2") {
      cfg.optim.beta2 = want_real(qualified, value);
    } else if (qualified == "optim.eps") {
      cfg.optim.eps = want_real(qualified, value);
    } else if (qualified == "optim.decay_factor") {
      cfg.optim.decay_factor = want_real(qualified, value);
    } else if (qualified == "optim.decay_every_epochs") {
      cfg.optim.decay_every_epochs = static_cast<std::size_t>(want_uint(qualified, value));
      if (cfg.optim.decay_every_epochs == 0) bad("optim.decay_every_epochs must be positive");
    } else if (qualified == "split.train_fraction") {
      cfg.train_fraction = want_real(qualified, value);
      if (!(cfg.train_fraction > 0 && cfg.train_fraction < 1)) {
        bad("split.train_fraction must lie in (0, 1)");
      }
    } else if (qualified == "arch.teacher.input_dim") {
      cfg.teacher_arch.input_dim = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "arch.teacher.hidden") {
      cfg.teacher_arch.hidden_dims = want_dims(qualified, value);
    } else if (qualified == "arch.teacher.head") {
      cfg.teacher_arch.head_dims = want_dims(qualified, value);
    } else if (qualified == "arch.student.input_dim") {
      cfg.student_arch.input_dim = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "arch.student.hidden") {
      cfg.student_arch.hidden_dims = want_dims(qualified, value);
    } else if (qualified == "arch.student.head") {
      cfg.student_arch.head_dims = want_dims(qualified, value);
    } else if (qualified == "preprocess.teacher.short_side") {
      cfg.teacher_res.short_side = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "preprocess.teacher.crop") {
      cfg.teacher_res.crop = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "preprocess.student.short_side") {
      cfg.student_res.short_side = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "preprocess.student.crop") {
      cfg.student_res.crop = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "preprocess.inference.short_side") {
      cfg.inference_res.short_side = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "preprocess.inference.crop") {
      cfg.inference_res.crop = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "data.synthetic.n_labeled") {
      synthetic.n_labeled = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "data.synthetic.n_pool1") {
      synthetic.n_pool1 = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "data.synthetic.n_pool2") {
      synthetic.n_pool2 = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "data.synthetic.feature_dim") {
      synthetic.feature_dim = static_cast<std::size_t>(want_uint(qualified, value));
    } else if (qualified == "data.synthetic.noise_sigma") {
      synthetic.noise_sigma = want_real(qualified, value);
      if (synthetic.noise_sigma < 0) bad("noise_sigma must be nonnegative");
    } else if (qualified == "data.paths.labeled") {
      paths.labeled = value;
    } else if (qualified == "data.paths.pool1") {
      paths.pool1 = value;
    } else if (qualified == "data.paths.pool2") {
      paths.pool2 = value;
    } else if (qualified == "pipeline.warm_start_enhanced") {
      cfg.warm_start_enhanced = want_bool(qualified, value);
    } else {
      bad("unknown key '" + qualified + "'");
    }
  }

  if (saw_synthetic && saw_paths) bad("config declares both data.synthetic and data.paths");
  if (saw_paths) {
    if (paths.labeled.empty() || paths.pool1.empty() || paths.pool2.empty()) {
      bad("data.paths needs labeled, pool1 and pool2");
    }
    cfg.data_paths = paths;
  } else {
    synthetic.seed = cfg.seed;
    cfg.synthetic = synthetic;
  }

  auto bad_res = [](const StageResolution& r) { return r.crop == 0 || r.crop > r.short_side; };
  if (bad_res(cfg.teacher_res) || bad_res(cfg.student_res) || bad_res(cfg.inference_res)) {
    bad("crop must be positive and no larger than short_side");
  }
  regressor::validate_arch(cfg.teacher_arch);
  regressor::validate_arch(cfg.student_arch);
  return cfg;
}

TrainConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::config_error, "cannot open config: " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config_text(buf.str());
}

std::string canonical_text(const TrainConfig& cfg) {
  std::ostringstream os;
  auto dims = [](const std::vector<std::size_t>& d) {
    std::string s;
    for (std::size_t v : d) {
      if (!s.empty()) s += ' ';
      s += std::to_string(v);
    }
    return s;
  };
  os << "seed=" << cfg.seed << '\n';
  os << "epochs=" << cfg.epochs << '\n';
  os << "batch_size=" << cfg.batch_size << '\n';
  os << "loss.lambda=" << format_double(cfg.loss.lambda) << '\n';
  os << "optim.lr0=" << format_double(cfg.optim.lr0) << '\n';
  os << "optim.weight_decay=" << format_double(cfg.optim.weight_decay) << '\n';
  os << "optim.beta1=" << format_double(cfg.optim.beta1) << '\n';
  os << "optim.beta2=" << format_double(cfg.optim.beta2) << '\n';
  os << "optim.eps=" << format_double(cfg.optim.eps) << '\n';
  os << "optim.decay_factor=" << format_double(cfg.optim.decay_factor) << '\n';
  os << "optim.decay_every_epochs=" << cfg.optim.decay_every_epochs << '\n';
  os << "split.train_fraction=" << format_double(cfg.train_fraction) << '\n';
  os << "arch.teacher.input_dim=" << cfg.teacher_arch.input_dim << '\n';
  os << "arch.teacher.hidden=" << dims(cfg.teacher_arch.hidden_dims) << '\n';
  os << "arch.teacher.head=" << dims(cfg.teacher_arch.head_dims) << '\n';
  os << "arch.student.input_dim=" << cfg.student_arch.input_dim << '\n';
  os << "arch.student.hidden=" << dims(cfg.student_arch.hidden_dims) << '\n';
  os << "arch.student.head=" << dims(cfg.student_arch.head_dims) << '\n';
  os << "preprocess.teacher=" << cfg.teacher_res.short_side << ' ' << cfg.teacher_res.crop << '\n';
  os << "preprocess.student=" << cfg.student_res.short_side << ' ' << cfg.student_res.crop << '\n';
  os << "preprocess.inference=" << cfg.inference_res.short_side << ' ' << cfg.inference_res.crop
     << '\n';
  if (cfg.synthetic) {
    os << "data.synthetic=" << cfg.synthetic->n_labeled << ' ' << cfg.synthetic->n_pool1 << ' '
       << cfg.synthetic->n_pool2 << ' ' << cfg.synthetic->feature_dim << ' '
       << format_double(cfg.synthetic->noise_sigma) << '\n';
  }
  if (cfg.data_paths) {
    os << "data.paths=" << cfg.data_paths->labeled << ' ' << cfg.data_paths->pool1 << ' '
       << cfg.data_paths->pool2 << '\n';
  }
  os << "pipeline.warm_start_enhanced=" << (cfg.warm_start_enhanced ? "true" : "false") << '\n';
  return os.str();
}

std::string digest(const TrainConfig& cfg) {
  std::uint64_t h = rng::hash_str(canonical_text(cfg));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fiqa::config
