#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "acgd/params.hpp"
#include "acgd/rng.hpp"

namespace acgd {

// Per-step command. Components are clamped to [-1, 1] before scaling by the
// per-step action range; dgrip > 0 closes the gripper, dgrip <= 0 opens it.
struct Action {
  double dx = 0.0;
  double dy = 0.0;
  double dgrip = 0.0;

  static constexpr int kDim = 3;
};

using Obs = std::vector<double>;

struct StepResult {
  Obs obs;
  double reward = 0.0;
  bool done = false;
  bool success = false;
  std::map<std::string, double> info;
};

// Full environment state. `reals` holds continuous state, `words` holds
// counters, flags and the episode rng; `params` is the assignment bound to
// the episode. Restoring a snapshot reproduces observations bit-identically.
struct EnvSnapshot {
  std::string env_id;
  uint32_t version = 1;
  std::vector<double> reals;
  std::vector<uint64_t> words;
  ParamAssignment params;
};

enum class RewardMode { kSparse, kShaped };

// Weights for the shaped-reward baseline: distance-to-object before grasp,
// object-to-target after grasp, one-time grasp bonus, success bonus.
struct ShapedConfig {
  double w_reach = 1.0;
  double w_place = 1.0;
  double bonus_grasp = 2.0;
  double bonus_place = 5.0;
};

// r = -w1*d(gripper,object) before grasp, -w2*d(object,target) while
// carrying, +bonus_grasp on the first attach of the episode, +bonus_place
// plus the sparse reward at success.
double shaped_step_reward(const ShapedConfig& cfg, double dist_reach, double dist_place,
                          bool carrying, bool grasp_event, bool success_event,
                          double sparse_reward);

// 2D kinematic manipulation environment with full state save/restore.
// Observations are a pure function of state (noise is hash-indexed by the
// episode key and step counter), so observe() may be called repeatedly and
// after a restore without perturbing anything.
class Env {
 public:
  virtual ~Env() = default;

  virtual const std::string& id() const = 0;
  virtual int obs_dim() const = 0;
  virtual int max_steps() const = 0;

  // Places the scene according to the assignment; placement randomness and
  // the episode noise key are drawn from `rng`.
  virtual void reset_regular(const ParamAssignment& assignment, Rng& rng) = 0;

  // Restores a recorded state, then applies the demo-compatible subset of
  // `demo_overrides` on top of the snapshot's own parameters.
  virtual void reset_from_state(const EnvSnapshot& snapshot,
                                const ParamAssignment& demo_overrides) = 0;

  virtual StepResult step(const Action& action) = 0;
  virtual Obs observe() const = 0;
  virtual EnvSnapshot save_state() const = 0;

  virtual bool success() const = 0;
  virtual bool done() const = 0;
  virtual int64_t step_count() const = 0;

  // Scripted closed-loop controller with privileged state access; stands in
  // for a human demonstrator.
  virtual Action expert_action() const = 0;

  virtual void set_reward_mode(RewardMode mode) { reward_mode_ = mode; }
  RewardMode reward_mode() const { return reward_mode_; }

  virtual void set_shaped_config(const ShapedConfig& cfg) { shaped_ = cfg; }

 protected:
  RewardMode reward_mode_ = RewardMode::kSparse;
  ShapedConfig shaped_;
};

}  // namespace acgd
