// SPDX-License-Identifier: Apache-2.0
#include "fiqa/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fiqa/error.hpp"
#include "fiqa/rng.hpp"

namespace fiqa::preprocess {

namespace {

struct Cursor {
  std::string_view bytes;
  std::size_t pos = 0;

  bool eof() const { return pos >= bytes.size(); }
  char peek() const { return bytes[pos]; }

  void skip_space_and_comments() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
        ++pos;
      } else {
        return;
      }
    }
  }

  // Unsigned decimal token; returns false at EOF or non-digit.
  bool read_uint(std::uint64_t& out) {
    skip_space_and_comments();
    if (eof() || peek() < '0' || peek() > '9') return false;
    out = 0;
    while (!eof() && peek() >= '0' && peek() <= '9') {
      out = out * 10 + static_cast<std::uint64_t>(peek() - '0');
      if (out > 0xffffffffULL) return false;
      ++pos;
    }
    return true;
  }
};

}  // namespace

RasterImage parse_pixmap(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw Error(Errc::unsupported_magic, "not a portable pixmap/graymap");
  }
  char kind = bytes[1];
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
    throw Error(Errc::unsupported_magic, std::string("unsupported magic P") + kind);
  }
  bool binary = kind == '5' || kind == '6';
  std::size_t channels = (kind == '3' || kind == '6') ? 3 : 1;

  Cursor cur{bytes, 2};
  std::uint64_t width = 0, height = 0, maxval = 0;
  if (!cur.read_uint(width) || !cur.read_uint(height) || !cur.read_uint(maxval)) {
    throw Error(Errc::malformed_header, "missing width/height/maxval");
  }
  if (width == 0 || height == 0) throw Error(Errc::malformed_header, "zero image dimension");
  if (maxval == 0 || maxval > 65535) {
    throw Error(Errc::malformed_header, "maxval out of range [1, 65535]");
  }

  RasterImage img;
  img.width = static_cast<std::size_t>(width);
  img.height = static_cast<std::size_t>(height);
  img.channels = channels;
  const std::size_t count = img.width * img.height * channels;
  img.pixels.resize(count);
  const double scale = 1.0 / static_cast<double>(maxval);

  if (binary) {
    // exactly one whitespace byte separates maxval from the raster
    if (cur.eof()) throw Error(Errc::truncated_pixel_data, "no raster data");
    if (!std::isspace(static_cast<unsigned char>(cur.peek()))) {
      throw Error(Errc::malformed_header, "missing separator before raster");
    }
    ++cur.pos;
    const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    if (bytes.size() - cur.pos < count * bytes_per_sample) {
      throw Error(Errc::truncated_pixel_data, "raster shorter than header promises");
    }
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data()) + cur.pos;
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t v;
      if (bytes_per_sample == 2) {
        v = static_cast<std::uint32_t>(raw[2 * i]) << 8 | raw[2 * i + 1];
      } else {
        v = raw[i];
      }
      img.pixels[i] = static_cast<double>(v) * scale;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t v = 0;
      if (!cur.read_uint(v)) {
        throw Error(Errc::truncated_pixel_data, "raster shorter than header promises");
      }
      img.pixels[i] = static_cast<double>(v) * scale;
    }
  }
  return img;
}

RasterImage load_pixmap(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::io_error, "cannot open image: " + path.string());
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_pixmap(buf.str());
}

std::string write_pixmap(const RasterImage& img, std::uint32_t maxval, bool binary) {
  if (img.channels != 1 && img.channels != 3) {
    throw Error(Errc::invalid_argument, "images must have 1 or 3 channels");
  }
  if (maxval == 0 || maxval > 65535) {
    throw Error(Errc::invalid_argument, "maxval out of range [1, 65535]");
  }
  char magic = img.channels == 3 ? (binary ? '6' : '3') : (binary ? '5' : '2');
  std::ostringstream os;
  os << 'P' << magic << '\n' << img.width << ' ' << img.height << '\n' << maxval << '\n';

  auto quantize = [&](double p) {
    auto v = static_cast<long long>(std::llround(p * static_cast<double>(maxval)));
    return static_cast<std::uint32_t>(std::clamp<long long>(v, 0, maxval));
  };

  if (binary) {
    for (double p : img.pixels) {
      std::uint32_t v = quantize(p);
      if (maxval > 255) os.put(static_cast<char>(v >> 8));
      os.put(static_cast<char>(v & 0xff));
    }
  } else {
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      os << quantize(img.pixels[i]);
      os << ((i + 1) % 12 == 0 ? '\n' : ' ');
    }
    os << '\n';
  }
  return os.str();
}

RasterImage resize_short_side(const RasterImage& img, std::size_t target) {
  if (target == 0) throw Error(Errc::invalid_argument, "resize target must be positive");
  std::size_t out_h, out_w;
  if (img.height <= img.width) {
    out_h = target;
    out_w = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(img.width) *
                                                 static_cast<double>(target) /
                                                 static_cast<double>(img.height))));
  } else {
    out_w = target;
    out_h = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(img.height) *
                                                 static_cast<double>(target) /
                                                 static_cast<double>(img.width))));
  }

  RasterImage out;
  out.width = out_w;
  out.height = out_h;
  out.channels = img.channels;
  out.pixels.resize(out_w * out_h * img.channels);

  const double scale_y = static_cast<double>(img.height) / static_cast<double>(out_h);
  const double scale_x = static_cast<double>(img.width) / static_cast<double>(out_w);
  const auto last_y = static_cast<double>(img.height - 1);
  const auto last_x = static_cast<double>(img.width - 1);

  for (std::size_t y = 0; y < out_h; ++y) {
    double src_y = (static_cast<double>(y) + 0.5) * scale_y - 0.5;
    src_y = std::clamp(src_y, 0.0, last_y);
    auto y0 = static_cast<std::size_t>(src_y);
    std::size_t y1 = std::min(y0 + 1, img.height - 1);
    double fy = src_y - static_cast<double>(y0);
    for (std::size_t x = 0; x < out_w; ++x) {
      double src_x = (static_cast<double>(x) + 0.5) * scale_x - 0.5;
      src_x = std::clamp(src_x, 0.0, last_x);
      auto x0 = static_cast<std::size_t>(src_x);
      std::size_t x1 = std::min(x0 + 1, img.width - 1);
      double fx = src_x - static_cast<double>(x0);
      for (std::size_t c = 0; c < img.channels; ++c) {
        double top = (1.0 - fx) * img.at(y0, x0, c) + fx * img.at(y0, x1, c);
        double bottom = (1.0 - fx) * img.at(y1, x0, c) + fx * img.at(y1, x1, c);
        out.pixels[(y * out_w + x) * img.channels + c] = (1.0 - fy) * top + fy * bottom;
      }
    }
  }
  return out;
}

RasterImage crop(const RasterImage& img, const PreprocessConfig& cfg, std::string_view sample_id,
                 std::uint64_t draw_index) {
  const std::size_t size = cfg.crop;
  if (size == 0) throw Error(Errc::invalid_argument, "crop size must be positive");
  if (img.width < size || img.height < size) {
    throw Error(Errc::image_too_small, "image smaller than crop window");
  }

  std::size_t off_x, off_y;
  if (cfg.mode == CropMode::center) {
    off_x = (img.width - size) / 2;
    off_y = (img.height - size) / 2;
  } else {
    rng::Stream stream(rng::mix(rng::mix(cfg.seed, rng::hash_str(sample_id)),
                                rng::mix(rng::hash_str("crop"), draw_index)));
    off_x = static_cast<std::size_t>(stream.below(img.width - size + 1));
    off_y = static_cast<std::size_t>(stream.below(img.height - size + 1));
  }

  RasterImage out;
  out.width = size;
  out.height = size;
  out.channels = img.channels;
  out.pixels.resize(size * size * img.channels);
  for (std::size_t y = 0; y < size; ++y) {
    const double* src = &img.pixels[((y + off_y) * img.width + off_x) * img.channels];
    double* dst = &out.pixels[y * size * img.channels];
    std::copy(src, src + size * img.channels, dst);
  }
  return out;
}

std::vector<double> to_features(const RasterImage& img, std::size_t feature_dim) {
  auto grid = static_cast<std::size_t>(std::sqrt(static_cast<double>(feature_dim)));
  while (grid * grid < feature_dim) ++grid;
  if (grid * grid != feature_dim) {
    throw Error(Errc::bad_feature_dim, "feature_dim must be a perfect square");
  }
  if (img.height < grid || img.width < grid) {
    throw Error(Errc::bad_feature_dim, "image smaller than the pooling grid");
  }

  std::vector<double> pooled(feature_dim, 0.0);
  for (std::size_t gy = 0; gy < grid; ++gy) {
    std::size_t y0 = gy * img.height / grid;
    std::size_t y1 = (gy + 1) * img.height / grid;
    for (std::size_t gx = 0; gx < grid; ++gx) {
      std::size_t x0 = gx * img.width / grid;
      std::size_t x1 = (gx + 1) * img.width / grid;
      double sum = 0.0;
      for (std::size_t y = y0; y < y1; ++y) {
        for (std::size_t x = x0; x < x1; ++x) {
          if (img.channels == 3) {
            sum += 0.299 * img.at(y, x, 0) + 0.587 * img.at(y, x, 1) + 0.114 * img.at(y, x, 2);
          } else {
            sum += img.at(y, x, 0);
          }
        }
      }
      pooled[gy * grid + gx] = sum / static_cast<double>((y1 - y0) * (x1 - x0));
    }
  }

  double mean = 0.0;
  for (double v : pooled) mean += v;
  mean /= static_cast<double>(feature_dim);
  double var = 0.0;
  for (double v : pooled) var += (v - mean) * (v - mean);
  var /= static_cast<double>(feature_dim);
  double inv_std = 1.0 / std::sqrt(std::max(var, 1e-8));
  for (double& v : pooled) v = (v - mean) * inv_std;
  return pooled;
}

}  // namespace fiqa::preprocess
