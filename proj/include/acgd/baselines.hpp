#pragma once

#include "acgd/demos.hpp"
#include "acgd/method.hpp"
#include "acgd/rl/adam.hpp"
#include "acgd/rl/policy.hpp"

namespace acgd {

// Uniform trajectory, uniform index over the full range; identical in
// distribution (and, sharing the rng stream, identical draw-for-draw) to
// sample_demo_restart with delta_d = 1.
DemoRestart uniform_demo_sampler(const DemoStore& store, Rng& rng);

// Non-adaptive schedule delta(i) = i/N.
double linear_schedule(int64_t i, int64_t n_total);

struct BcConfig {
  int epochs = 40;
  int minibatch = 256;
  double lr = 1e-3;
  double holdout_fraction = 0.1;
  uint64_t seed = 1;
};

struct BcReport {
  std::vector<double> train_loss_per_epoch;  // Gaussian NLL
  double holdout_loss = 0.0;
  double train_action_mse = 0.0;  // mean squared error of the policy mean
  int64_t train_samples = 0;
  int64_t holdout_samples = 0;
};

// Supervised Gaussian negative log-likelihood of the demonstrated actions.
// The store must have been recorded with actions. Observations are rebuilt
// by restoring each recorded state into `scratch_env`.
BcReport behavior_cloning_train(const DemoStore& store, PolicyNetwork& policy, Env& scratch_env,
                                const BcConfig& cfg);

}  // namespace acgd
