#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <vector>

#include "acgd/rl/trainer.hpp"

namespace acgd {

// Append-only metrics stream: one `# config_hash=... seed=...` comment line,
// a CSV header, then one row per iteration. Floats use shortest round-trip
// formatting, newlines are '\n'; identical runs produce identical bytes.
class MetricsWriter {
 public:
  MetricsWriter(const std::filesystem::path& path, uint64_t config_hash, uint64_t seed);

  void append(const IterationMetrics& m);
  void flush();

  static const char* header();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

struct MetricsRow {
  IterationMetrics m;
};

struct MetricsFile {
  uint64_t config_hash = 0;
  uint64_t seed = 0;
  std::vector<IterationMetrics> rows;
};

MetricsFile read_metrics(const std::filesystem::path& path);

// Drops rows past `keep_rows` (used on resume so the stream matches the
// checkpointed iteration exactly).
void truncate_metrics(const std::filesystem::path& path, int64_t keep_rows);

}  // namespace acgd
