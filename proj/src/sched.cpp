#include "acgd/sched.hpp"

#include <algorithm>

namespace acgd {

double mixing_probability(double sr_r, int64_t i, int64_t n_total) {
  if (n_total <= 0) throw ConfigError("mixing_probability: total iterations must be > 0");
  const double p = 0.5 * (sr_r + static_cast<double>(i) / static_cast<double>(n_total));
  return std::clamp(p, 0.0, 1.0);
}

ResetMode choose_reset_mode(const CurriculumState& state, Rng& rng) {
  const double p =
      mixing_probability(state.regular.tracker.sr, state.iteration, state.total_iterations);
  return rng.uniform() < p ? ResetMode::kRegular : ResetMode::kDemonstration;
}

double step_delta(double delta, double sr, double alpha, double beta, double eps) {
  if (sr > beta) delta += eps;
  if (sr < alpha) delta -= eps;
  return std::clamp(delta, 0.0, 1.0);
}

DifficultyCoefficient update_difficulty(const DifficultyCoefficient& coef,
                                        const CurriculumState& state) {
  DifficultyCoefficient out = coef;
  out.delta = step_delta(coef.delta, coef.tracker.sr, state.alpha, state.beta, state.increment);
  return out;
}

void curriculum_step(CurriculumState& state, std::span<const EpisodeOutcome> outcomes) {
  int64_t n_demo = 0;
  int64_t n_regular = 0;
  for (const auto& ep : outcomes) {
    if (ep.mode == ResetMode::kDemonstration) {
      state.demo.tracker.record(ep.success ? 1.0 : 0.0);
      ++n_demo;
    } else {
      state.regular.tracker.record(ep.success ? 1.0 : 0.0);
      ++n_regular;
    }
  }
  if (n_demo > 0 && state.demo.tracker.episodes_seen > 0) {
    state.demo = update_difficulty(state.demo, state);
  }
  if (n_regular > 0 && state.regular.tracker.episodes_seen > 0) {
    state.regular = update_difficulty(state.regular, state);
  }
  ++state.iteration;
}

void validate(const CurriculumState& state) {
  if (!(state.alpha >= 0.0 && state.alpha < state.beta && state.beta <= 1.0)) {
    throw ConfigError("curriculum interval requires 0 <= alpha < beta <= 1");
  }
  if (state.total_iterations <= 0) throw ConfigError("total_iterations must be > 0");
  if (state.iteration > state.total_iterations) {
    throw ConfigError("iteration exceeds total_iterations");
  }
  if (state.increment < 0.0) throw ConfigError("increment must be >= 0");
  if (!(state.demo.tracker.smoothing > 0.0 && state.demo.tracker.smoothing <= 1.0) ||
      !(state.regular.tracker.smoothing > 0.0 && state.regular.tracker.smoothing <= 1.0)) {
    throw ConfigError("EMA smoothing must be in (0, 1]");
  }
}

}  // namespace acgd
