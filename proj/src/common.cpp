#include "acgd/common.hpp"

#include <charconv>
#include <cstdio>

namespace acgd {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_u64_hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("bad floating-point value for " + std::string(what) + ": '" +
                     std::string(text) + "'");
  }
  return v;
}

int64_t parse_i64(std::string_view text, std::string_view what) {
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("bad integer value for " + std::string(what) + ": '" +
                     std::string(text) + "'");
  }
  return v;
}

uint64_t parse_u64_hex(std::string_view text, std::string_view what) {
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 16);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("bad hex value for " + std::string(what) + ": '" +
                     std::string(text) + "'");
  }
  return v;
}

}  // namespace acgd
