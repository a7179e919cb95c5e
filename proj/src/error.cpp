// SPDX-License-Identifier: Apache-2.0
#include "fiqa/error.hpp"

namespace fiqa {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::constant_sequence: return "ConstantSequence";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::empty_batch: return "EmptyBatch";
    case Errc::constant_predictions: return "ConstantPredictions";
    case Errc::constant_targets: return "ConstantTargets";
    case Errc::batch_too_small: return "BatchTooSmall";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::stale_cache: return "StaleCache";
    case Errc::unsupported_version: return "UnsupportedVersion";
    case Errc::corrupt_checkpoint: return "CorruptCheckpoint";
    case Errc::non_finite_gradient: return "NonFiniteGradient";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::degenerate_scale: return "DegenerateScale";
    case Errc::missing_prediction: return "MissingPrediction";
    case Errc::already_labeled: return "AlreadyLabeled";
    case Errc::parse_error: return "ParseError";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::malformed_header: return "MalformedHeader";
    case Errc::truncated_pixel_data: return "TruncatedPixelData";
    case Errc::unsupported_magic: return "UnsupportedMagic";
    case Errc::image_too_small: return "ImageTooSmall";
    case Errc::bad_feature_dim: return "BadFeatureDim";
    case Errc::diverged_training: return "DivergedTraining";
    case Errc::stage_dependency_violation: return "StageDependencyViolation";
    case Errc::config_digest_mismatch: return "ConfigDigestMismatch";
    case Errc::config_error: return "ConfigError";
    case Errc::io_error: return "IoError";
    case Errc::non_finite_value: return "NonFiniteValue";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace fiqa
