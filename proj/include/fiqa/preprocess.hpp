// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fiqa::preprocess {

// Row-major interleaved intensities in [0, 1].
struct RasterImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;  // 1 or 3
  std::vector<double> pixels;

  double at(std::size_t y, std::size_t x, std::size_t c) const {
    return pixels[(y * width + x) * channels + c];
  }
};

enum class CropMode { random, center };

struct PreprocessConfig {
  std::size_t short_side = 448;
  std::size_t crop = 448;
  CropMode mode = CropMode::center;
  std::uint64_t seed = 0;
};

// Portable pixmap/graymap reader: P2/P3 (ASCII) and P5/P6 (binary),
// maxval up to 65535, header comments allowed.
RasterImage parse_pixmap(std::string_view bytes);
RasterImage load_pixmap(const std::filesystem::path& path);

// Encoder counterpart; binary=false selects the ASCII variants.
std::string write_pixmap(const RasterImage& img, std::uint32_t maxval = 255, bool binary = true);

// Aspect-preserving resize so the shorter side equals target exactly; the
// longer side rounds half away from zero. Bilinear, half-pixel centers.
RasterImage resize_short_side(const RasterImage& img, std::size_t target);

// crop x crop cutout; random offsets come from a stream keyed by
// (cfg.seed, sample_id) with draw_index advancing it per visit.
RasterImage crop(const RasterImage& img, const PreprocessConfig& cfg, std::string_view sample_id,
                 std::uint64_t draw_index = 0);

// Luma conversion, average-pool onto a sqrt(dim) x sqrt(dim) grid, then
// standardization to zero mean / unit variance (variance floor 1e-8).
std::vector<double> to_features(const RasterImage& img, std::size_t feature_dim);

}  // namespace fiqa::preprocess
