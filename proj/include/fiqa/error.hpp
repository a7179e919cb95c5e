// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fiqa {

// Every failure mode the library reports. The CLI maps these onto its
// exit-code classes, so new values must be added to cli.cpp as well.
enum class Errc {
  // metrics
  constant_sequence,
  // losses
  length_mismatch,
  empty_batch,
  constant_predictions,
  constant_targets,
  batch_too_small,
  // regressor / optimizer
  shape_mismatch,
  stale_cache,
  unsupported_version,
  corrupt_checkpoint,
  non_finite_gradient,
  // dataset
  too_few_samples,
  degenerate_scale,
  missing_prediction,
  already_labeled,
  parse_error,
  duplicate_id,
  // preprocess
  malformed_header,
  truncated_pixel_data,
  unsupported_magic,
  image_too_small,
  bad_feature_dim,
  // pipeline
  diverged_training,
  stage_dependency_violation,
  config_digest_mismatch,
  // plumbing
  config_error,
  io_error,
  non_finite_value,
  invalid_argument,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fiqa
