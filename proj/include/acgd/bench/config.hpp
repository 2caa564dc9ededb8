#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "acgd/baselines.hpp"
#include "acgd/rl/trainer.hpp"

namespace acgd {

// One fully-specified experiment: environment, method, seeds and every
// hyperparameter. Serializes to versioned JSON; the content hash (out_dir
// excluded) is embedded in all outputs.
struct ExperimentConfig {
  int schema_version = 1;
  std::string env_id = "block_stack_2d";
  MethodSpec method = MethodSpec::kAcgd;
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string demo_file;     // required by demo-reset methods
  std::string bc_demo_file;  // required by BC / BCInitPPO
  std::string out_dir = "runs/experiment";
  PpoConfig ppo;
  CurriculumConfig curriculum;
  EvalConfig eval;
  ShapedConfig shaped;
  BcConfig bc;
  int checkpoint_every = 1;  // iterations between checkpoints
  std::vector<TaskParam> params;  // empty -> environment defaults

  void validate() const;
};

std::string to_json_string(const ExperimentConfig& cfg);
ExperimentConfig config_from_json_string(const std::string& text);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

// FNV-1a over the canonical JSON with out_dir removed, so the same
// experiment hashes identically wherever its outputs land.
uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace acgd
