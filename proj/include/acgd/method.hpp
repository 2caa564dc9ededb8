#pragma once

#include <string>

#include "acgd/common.hpp"

namespace acgd {

// Training methods: the adaptive curriculum, the curriculum-free PPO
// baselines, behavior cloning, the non-adaptive curricula and the two
// scheduler ablations.
enum class MethodSpec {
  kAcgd,
  kSparsePpo,
  kShapedPpo,
  kBc,
  kBcInitPpo,
  kUniformDemoCurriculum,
  kLinearDemoCurriculum,
  kLinearWithRegularResets,
  kSharedDelta,
  kConstantMaxDifficulty,
};

struct MethodTraits {
  bool demo_resets = false;
  bool regular_resets = false;
  bool adaptive = false;      // feedback-controlled deltas
  bool linear_delta = false;  // delta follows i/N
  bool shared_delta = false;  // pooled tracker, delta_r == delta_d
  bool params_pinned_max = false;  // H sampled at delta = 1 throughout
  bool shaped_reward = false;
  bool bc_pretrain = false;
  bool offline_only = false;  // no environment training at all
};

MethodTraits method_traits(MethodSpec method);

// Accepts both the canonical names ("ACGD", "SparsePPO", ...) and
// lower_snake aliases ("acgd", "sparse_ppo", ...).
MethodSpec parse_method(const std::string& name);
std::string method_name(MethodSpec method);

}  // namespace acgd
