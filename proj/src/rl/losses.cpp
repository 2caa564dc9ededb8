#include "acgd/rl/losses.hpp"

#include <algorithm>

namespace acgd {

double discounted_return(std::span<const double> rewards, double gamma) {
  double r = 0.0;
  for (auto it = rewards.rbegin(); it != rewards.rend(); ++it) {
    r = *it + gamma * r;
  }
  return r;
}

void compute_gae(std::span<const double> rewards, std::span<const double> values,
                 std::span<const uint8_t> dones, double bootstrap_value, double gamma, double tau,
                 std::vector<double>& advantages, std::vector<double>& returns) {
  const size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) {
    throw ConfigError("compute_gae: rewards, values and dones must have equal length");
  }
  advantages.assign(n, 0.0);
  returns.assign(n, 0.0);
  double next_advantage = 0.0;
  double next_value = bootstrap_value;
  for (size_t i = n; i-- > 0;) {
    const double not_done = dones[i] ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * next_value * not_done - values[i];
    next_advantage = delta + gamma * tau * not_done * next_advantage;
    advantages[i] = next_advantage;
    returns[i] = advantages[i] + values[i];
    next_value = values[i];
  }
}

double ppo_policy_loss(double ratio, double advantage, double clip) {
  const double unclipped = ratio * advantage;
  const double clipped = std::clamp(ratio, 1.0 - clip, 1.0 + clip) * advantage;
  return -std::min(unclipped, clipped);
}

double total_loss(double policy_loss, double value_loss, double entropy, double value_coef,
                  double entropy_coef) {
  return policy_loss + value_coef * value_loss - entropy_coef * entropy;
}

double linear_lr(double lr0, int64_t step, int64_t total_steps) {
  if (total_steps <= 0) throw ConfigError("linear_lr: total_steps must be > 0");
  const double frac = std::clamp(
      1.0 - static_cast<double>(step) / static_cast<double>(total_steps), 0.0, 1.0);
  return lr0 * frac;
}

}  // namespace acgd
