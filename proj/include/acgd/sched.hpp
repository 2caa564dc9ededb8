#pragma once

#include <cstdint>
#include <span>

#include "acgd/common.hpp"
#include "acgd/rng.hpp"

namespace acgd {

enum class ResetMode { kRegular, kDemonstration };

// Exponential moving average of episode outcomes, one per reset mode.
struct SuccessRateTracker {
  double sr = 0.0;
  double smoothing = 0.05;  // EMA coefficient lambda
  int64_t episodes_seen = 0;

  void record(double success) {
    sr = (1.0 - smoothing) * sr + smoothing * success;
    ++episodes_seen;
  }
};

// A difficulty coefficient delta in [0,1] paired with the success-rate
// tracker that drives it.
struct DifficultyCoefficient {
  double delta = 0.0;
  SuccessRateTracker tracker;
};

enum class ModeGranularity { kPerEpisode, kPerIteration };

struct CurriculumState {
  DifficultyCoefficient demo;     // delta_d, sr_d
  DifficultyCoefficient regular;  // delta_r, sr_r
  int64_t iteration = 0;          // i
  int64_t total_iterations = 1;   // N
  double alpha = 0.4;
  double beta = 0.6;
  double increment = 0.002;  // epsilon
};

struct EpisodeOutcome {
  ResetMode mode = ResetMode::kRegular;
  bool success = false;
  int64_t length = 0;
};

// Probability of choosing a regular reset: clamp(0.5 * (sr_r + i/N), 0, 1).
// Throws ConfigError when N == 0.
double mixing_probability(double sr_r, int64_t i, int64_t n_total);

// Draws exactly one uniform variate; regular with mixing probability,
// demonstration otherwise.
ResetMode choose_reset_mode(const CurriculumState& state, Rng& rng);

// delta' = clamp(delta + eps*[sr > beta] - eps*[sr < alpha], 0, 1).
double step_delta(double delta, double sr, double alpha, double beta, double eps);

// Applies step_delta to a coefficient using its own tracker and the state's
// interval and increment.
DifficultyCoefficient update_difficulty(const DifficultyCoefficient& coef,
                                        const CurriculumState& state);

// One controller update at the end of a training iteration: feed each
// tracker its own episodes, adapt both coefficients, advance the iteration
// counter. A mode with no completed episodes this iteration keeps both its
// tracker and its delta unchanged, and a tracker that has never seen an
// episode never moves its delta (cold start).
void curriculum_step(CurriculumState& state, std::span<const EpisodeOutcome> outcomes);

void validate(const CurriculumState& state);

}  // namespace acgd
