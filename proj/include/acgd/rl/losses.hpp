#pragma once

#include <span>
#include <vector>

#include "acgd/common.hpp"

namespace acgd {

// R = sum_i gamma^(i-t) r_i over one episode's rewards.
double discounted_return(std::span<const double> rewards, double gamma);

// delta_t = r_t + gamma*V_{t+1}*(1-done_t) - V_t
// A_t     = delta_t + gamma*tau*(1-done_t)*A_{t+1}
// returns = A + V. V_{T} is `bootstrap_value` past the last step.
// Throws on length mismatches.
void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const uint8_t> dones, double bootstrap_value, double gamma, double tau,
                 std::vector<double>& advantages, std::vector<double>& returns);

// Per-sample clipped surrogate: -min(ratio*A, clamp(ratio, 1-clip, 1+clip)*A).
double ppo_policy_loss(double ratio, double advantage, double clip);

double total_loss(double policy_loss, double value_loss, double entropy, double value_coef,
                  double entropy_coef);

// lr(step) = lr0 * (1 - step/total_steps), floored at 0.
double linear_lr(double lr0, int64_t step, int64_t total_steps);

}  // namespace acgd
