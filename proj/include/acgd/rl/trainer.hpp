#pragma once

#include <memory>
#include <optional>

#include "acgd/binio.hpp"
#include "acgd/demos.hpp"
#include "acgd/env.hpp"
#include "acgd/envs/registry.hpp"
#include "acgd/method.hpp"
#include "acgd/rl/adam.hpp"
#include "acgd/rl/losses.hpp"
#include "acgd/rl/policy.hpp"
#include "acgd/sched.hpp"

namespace acgd {

struct PpoConfig {
  double lr = 2.5e-4;
  double adam_eps = 1e-5;
  double gamma = 0.99;
  double gae_tau = 0.95;
  double entropy_coef = 0.01;
  double value_coef = 0.5;
  double max_grad_norm = 0.5;
  int actors = 8;
  int steps_per_actor = 512;
  int minibatch = 4096;  // 8 x 512
  int epochs = 4;
  double clip = 0.1;
  int64_t total_steps = 500000;
  bool advantage_norm = true;
  bool value_clip = false;
  double value_clip_eps = 0.2;
  bool lr_decay = true;
  std::vector<int> hidden = {64, 64};
  double log_std_init = -0.7;

  void validate() const;
  int64_t batch_size() const { return static_cast<int64_t>(actors) * steps_per_actor; }
};

struct CurriculumConfig {
  double alpha = 0.4;
  double beta = 0.6;
  double increment = 0.002;
  double smoothing = 0.05;
  ModeGranularity granularity = ModeGranularity::kPerEpisode;
};

struct EvalConfig {
  int every_iters = 10;
  int episodes = 50;
  double delta = 1.0;  // evaluation difficulty; 1 = maximum
};

struct EvalResult {
  double success_rate = 0.0;
  double mean_success_length = 0.0;
};

// Deterministic-policy evaluation: regular resets at the given difficulty,
// actions are the Gaussian mean.
EvalResult evaluate(PolicyNetwork& policy, Env& env, std::span<const TaskParam> registry,
                    int episodes, uint64_t seed, double delta = 1.0);

struct IterationMetrics {
  int64_t iter = 0;
  int64_t env_steps = 0;
  double delta_d = 0.0;
  double delta_r = 0.0;
  double sr_d = 0.0;
  double sr_r = 0.0;
  double loss_policy = 0.0;
  double loss_value = 0.0;
  double entropy = 0.0;
  double mean_episode_length = 0.0;
  std::optional<EvalResult> eval;
};

// On-policy training loop: lockstep parallel actors with per-worker rng
// streams, reset-mode mixing through the curriculum scheduler, batched GAE
// and clipped-surrogate updates. Fully deterministic for a fixed setup.
class Trainer {
 public:
  struct Setup {
    std::string env_id = "block_stack_2d";
    MethodSpec method = MethodSpec::kAcgd;
    uint64_t seed = 1;
    PpoConfig ppo;
    CurriculumConfig curriculum;
    EvalConfig eval;
    ShapedConfig shaped;
    std::vector<TaskParam> registry;
    const DemoStore* demos = nullptr;  // required when the method uses demo resets
  };

  explicit Trainer(Setup setup);

  IterationMetrics train_iteration();

  int64_t iteration() const { return state_.iteration; }
  int64_t total_iterations() const { return state_.total_iterations; }
  int64_t env_steps() const { return env_steps_; }
  bool finished() const { return state_.iteration >= state_.total_iterations; }

  PolicyNetwork& policy() { return *policy_; }
  const CurriculumState& curriculum() const { return state_; }
  const Setup& setup() const { return setup_; }

  void serialize(BinWriter& w) const;
  void deserialize(BinReader& r);

 private:
  struct Worker {
    std::unique_ptr<Env> env;
    Rng rng;
    Obs pending_obs;
    ResetMode mode = ResetMode::kDemonstration;
  };

  ResetMode pick_mode(const CurriculumState& snap, Rng& rng) const;
  double window_delta(const CurriculumState& snap) const;
  double param_delta(ResetMode mode, const CurriculumState& snap) const;
  void reset_worker(Worker& worker, const CurriculumState& snap, ResetMode mode);
  void apply_curriculum_update(std::span<const EpisodeOutcome> outcomes);
  double value_of(const Obs& obs);
  void ensure_workers_initialized(const CurriculumState& snap);

  Setup setup_;
  MethodTraits traits_;
  std::unique_ptr<PolicyNetwork> policy_;
  AdamOptimizer adam_;
  CurriculumState state_;
  std::vector<Worker> workers_;
  bool workers_initialized_ = false;
  std::unique_ptr<Env> eval_env_;
  Rng trainer_rng_;      // minibatch shuffling
  Rng coordinator_rng_;  // per-iteration mode choice
  ResetMode iter_mode_ = ResetMode::kDemonstration;
  int64_t env_steps_ = 0;
};

}  // namespace acgd
