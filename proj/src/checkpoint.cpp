// SPDX-License-Identifier: Apache-2.0
#include "fiqa/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fiqa/error.hpp"
#include "strnum.hpp"

namespace fiqa::checkpoint {

namespace {

using detail::format_double;
using detail::parse_double;
using detail::parse_u64;

void write_values(std::ostream& os, const std::vector<double>& values) {
  for (double v : values) os << ' ' << format_double(v);
  os << '\n';
}

void write_dims(std::ostream& os, const std::vector<std::size_t>& dims) {
  for (std::size_t d : dims) os << ' ' << d;
  os << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  // Next non-empty line split on spaces; throws CorruptCheckpoint at EOF.
  std::vector<std::string> next(const char* what) {
    std::string line;
    while (std::getline(is_, line)) {
      if (line.empty()) continue;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (!tokens.empty()) return tokens;
    }
    throw Error(Errc::corrupt_checkpoint, std::string("unexpected end of file, expected ") + what);
  }

 private:
  std::istream& is_;
};

std::vector<double> parse_values(const std::vector<std::string>& tokens, std::size_t skip,
                                 std::size_t expected, const char* what) {
  if (tokens.size() != skip + expected) {
    throw Error(Errc::corrupt_checkpoint,
                std::string(what) + ": expected " + std::to_string(expected) + " values, got " +
                    std::to_string(tokens.size() - skip));
  }
  std::vector<double> values(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    if (!parse_double(tokens[skip + i], values[i])) {
      throw Error(Errc::corrupt_checkpoint, std::string(what) + ": bad decimal literal");
    }
  }
  return values;
}

std::vector<std::size_t> parse_dims(const std::vector<std::string>& tokens, const char* what) {
  std::vector<std::size_t> dims;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    std::uint64_t d = 0;
    if (!parse_u64(tokens[i], d)) {
      throw Error(Errc::corrupt_checkpoint, std::string(what) + ": bad dimension");
    }
    dims.push_back(static_cast<std::size_t>(d));
  }
  return dims;
}

void expect_key(const std::vector<std::string>& tokens, const char* key) {
  if (tokens.empty() || tokens[0] != key) {
    throw Error(Errc::corrupt_checkpoint, std::string("expected field ") + key);
  }
}

double parse_scalar(const std::vector<std::string>& tokens, const char* key) {
  expect_key(tokens, key);
  double v = 0.0;
  if (tokens.size() != 2 || !parse_double(tokens[1], v)) {
    throw Error(Errc::corrupt_checkpoint, std::string(key) + ": bad value");
  }
  return v;
}

}  // namespace

void save(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::io_error, "cannot open checkpoint for writing: " + path.string());

  const auto& params = ckpt.params;
  os << "format_version " << kFormatVersion << '\n';
  os << "input_dim " << params.arch.input_dim << '\n';
  os << "hidden_dims";
  write_dims(os, params.arch.hidden_dims);
  os << "head_dims";
  write_dims(os, params.arch.head_dims);
  os << "mos_min " << format_double(params.norm.mos_min) << '\n';
  os << "mos_max " << format_double(params.norm.mos_max) << '\n';
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    os << "layer " << l << " weights";
    write_values(os, params.layers[l].weights);
    os << "layer " << l << " bias";
    write_values(os, params.layers[l].bias);
  }
  if (ckpt.optim_state) {
    const auto& state = *ckpt.optim_state;
    os << "optim step_count " << state.step_count << '\n';
    for (std::size_t l = 0; l < state.m.size(); ++l) {
      os << "optim " << l << " m_weights";
      write_values(os, state.m[l].weights);
      os << "optim " << l << " m_bias";
      write_values(os, state.m[l].bias);
      os << "optim " << l << " v_weights";
      write_values(os, state.v[l].weights);
      os << "optim " << l << " v_bias";
      write_values(os, state.v[l].bias);
    }
  }
  os << "end\n";
  if (!os) throw Error(Errc::io_error, "write failed: " + path.string());
}

void save(const regressor::RegressorParams& params, const std::filesystem::path& path) {
  save(Checkpoint{params, std::nullopt}, path);
}

Checkpoint load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::io_error, "cannot open checkpoint: " + path.string());
  LineReader reader(is);

  auto tokens = reader.next("format_version");
  expect_key(tokens, "format_version");
  std::uint64_t version = 0;
  if (tokens.size() != 2 || !parse_u64(tokens[1], version)) {
    throw Error(Errc::corrupt_checkpoint, "format_version: bad value");
  }
  if (version != static_cast<std::uint64_t>(kFormatVersion)) {
    throw Error(Errc::unsupported_version,
                "checkpoint format_version " + std::to_string(version) + " is not supported");
  }

  Checkpoint ckpt;
  auto& params = ckpt.params;

  tokens = reader.next("input_dim");
  expect_key(tokens, "input_dim");
  std::uint64_t input_dim = 0;
  if (tokens.size() != 2 || !parse_u64(tokens[1], input_dim)) {
    throw Error(Errc::corrupt_checkpoint, "input_dim: bad value");
  }
  params.arch.input_dim = static_cast<std::size_t>(input_dim);

  tokens = reader.next("hidden_dims");
  expect_key(tokens, "hidden_dims");
  params.arch.hidden_dims = parse_dims(tokens, "hidden_dims");

  tokens = reader.next("head_dims");
  expect_key(tokens, "head_dims");
  params.arch.head_dims = parse_dims(tokens, "head_dims");

  try {
    regressor::validate_arch(params.arch);
  } catch (const Error& e) {
    throw Error(Errc::corrupt_checkpoint, std::string("invalid arch: ") + e.what());
  }

  params.norm.mos_min = parse_scalar(reader.next("mos_min"), "mos_min");
  params.norm.mos_max = parse_scalar(reader.next("mos_max"), "mos_max");
  if (!(params.norm.mos_max > params.norm.mos_min)) {
    throw Error(Errc::corrupt_checkpoint, "mos_max must exceed mos_min");
  }

  std::size_t in_dim = params.arch.input_dim;
  std::size_t layer_index = 0;
  for (std::size_t out_dim : params.arch.layer_widths()) {
    auto layer = regressor::LayerTensors::zeros(in_dim, out_dim);
    auto label = std::to_string(layer_index);

    tokens = reader.next("layer weights");
    if (tokens.size() < 3 || tokens[0] != "layer" || tokens[1] != label || tokens[2] != "weights") {
      throw Error(Errc::corrupt_checkpoint, "expected weights for layer " + label);
    }
    layer.weights = parse_values(tokens, 3, in_dim * out_dim, "layer weights");

    tokens = reader.next("layer bias");
    if (tokens.size() < 3 || tokens[0] != "layer" || tokens[1] != label || tokens[2] != "bias") {
      throw Error(Errc::corrupt_checkpoint, "expected bias for layer " + label);
    }
    layer.bias = parse_values(tokens, 3, out_dim, "layer bias");

    params.layers.push_back(std::move(layer));
    in_dim = out_dim;
    ++layer_index;
  }

  tokens = reader.next("end");
  if (tokens[0] == "optim") {
    if (tokens.size() != 3 || tokens[1] != "step_count") {
      throw Error(Errc::corrupt_checkpoint, "expected optim step_count");
    }
    optimizer::OptimState state;
    if (!parse_u64(tokens[2], state.step_count)) {
      throw Error(Errc::corrupt_checkpoint, "optim step_count: bad value");
    }
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
      const auto& shape = params.layers[l];
      auto m = regressor::LayerTensors::zeros(shape.in_dim, shape.out_dim);
      auto v = regressor::LayerTensors::zeros(shape.in_dim, shape.out_dim);
      auto label = std::to_string(l);
      const char* names[4] = {"m_weights", "m_bias", "v_weights", "v_bias"};
      std::vector<double>* slots[4] = {&m.weights, &m.bias, &v.weights, &v.bias};
      std::size_t counts[4] = {shape.weights.size(), shape.bias.size(), shape.weights.size(),
                               shape.bias.size()};
      for (int f = 0; f < 4; ++f) {
        tokens = reader.next(names[f]);
        if (tokens.size() < 3 || tokens[0] != "optim" || tokens[1] != label ||
            tokens[2] != names[f]) {
          throw Error(Errc::corrupt_checkpoint,
                      std::string("expected optim ") + names[f] + " for layer " + label);
        }
        *slots[f] = parse_values(tokens, 3, counts[f], names[f]);
      }
      state.m.push_back(std::move(m));
      state.v.push_back(std::move(v));
    }
    ckpt.optim_state = std::move(state);
    tokens = reader.next("end");
  }
  if (tokens.size() != 1 || tokens[0] != "end") {
    throw Error(Errc::corrupt_checkpoint, "missing end marker");
  }
  return ckpt;
}

}  // namespace fiqa::checkpoint
