#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace acgd {

// Invalid configuration or arguments (bad hyperparameter, missing registry
// entry, output directory conflicts, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed file content (demo stores, checkpoints, CSV).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API misuse, e.g. stepping a finished episode.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite values where finite ones are required.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// I/O failures (open/read/write).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr uint64_t kFnvBasis = 0xcbf29ce484222325ull;

inline uint64_t fnv1a64(std::string_view bytes, uint64_t h = kFnvBasis) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Shortest round-trip decimal representation (std::to_chars), locale-free.
std::string format_double(double v);
std::string format_u64_hex(uint64_t v);

// Exact parse; throws ParseError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);
int64_t parse_i64(std::string_view text, std::string_view what);
uint64_t parse_u64_hex(std::string_view text, std::string_view what);

}  // namespace acgd
