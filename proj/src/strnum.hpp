// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace fiqa::detail {

// Shortest-length decimal that still round-trips the exact double.
inline std::string format_double(double v) {
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    int len = std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    double back = 0.0;
    auto [ptr, ec] = std::from_chars(buf, buf + len, back);
    if (ec == std::errc() && ptr == buf + len && back == v) return std::string(buf, len);
  }
  int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, len);
}

inline bool parse_double(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace fiqa::detail
