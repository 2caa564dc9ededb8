#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acgd/common.hpp"
#include "acgd/rng.hpp"
#include "acgd/sched.hpp"

namespace acgd {

// Demo-compatible parameters may be re-randomized when an episode starts
// from a demonstration state; regular-only parameters are fixed by the
// recorded state and are sampled for regular resets only.
enum class ResetClass { kDemoCompatible, kRegularOnly };

// One difficulty knob: easy endpoint distribution (mu_init, sigma_init),
// hard endpoint (mu_end, sigma_end), hard bounds on the sampled value.
struct TaskParam {
  std::string name;
  double mu_init = 0.0;
  double sigma_init = 0.0;
  double mu_end = 0.0;
  double sigma_end = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  ResetClass reset_class = ResetClass::kDemoCompatible;
};

// Concrete values drawn for one episode. The ordered map gives canonical
// serialization order.
struct ParamAssignment {
  std::map<std::string, double> values;
  double delta_used = 0.0;
  ResetMode reset_mode = ResetMode::kRegular;

  bool has(const std::string& name) const { return values.count(name) != 0; }
  double at(const std::string& name) const;
};

enum class SampleFamily { kTruncatedNormal, kUniform };

// Linear interpolation of both moments between the easy and hard endpoints.
std::pair<double, double> interpolate(const TaskParam& param, double delta);

// Draws one value per parameter legal for the reset mode. sigma == 0 yields
// the mean exactly with no rng consumption; otherwise resample-then-clamp
// with at most 8 resamples against the bounds. The uniform family matches
// the normal's mean and standard deviation.
ParamAssignment sample_assignment(std::span<const TaskParam> registry, double delta,
                                  ResetMode mode, Rng& rng,
                                  SampleFamily family = SampleFamily::kTruncatedNormal);

void validate(const TaskParam& param);

}  // namespace acgd
