#include "acgd/params.hpp"

#include <algorithm>
#include <cmath>

namespace acgd {

namespace {
constexpr int kMaxResamples = 8;
constexpr double kSqrt3 = 1.7320508075688772935;
}  // namespace

double ParamAssignment::at(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) {
    throw ConfigError("parameter assignment is missing '" + name + "'");
  }
  return it->second;
}

std::pair<double, double> interpolate(const TaskParam& param, double delta) {
  const double mu = param.mu_init + delta * (param.mu_end - param.mu_init);
  const double sigma = param.sigma_init + delta * (param.sigma_end - param.sigma_init);
  return {mu, sigma};
}

ParamAssignment sample_assignment(std::span<const TaskParam> registry, double delta,
                                  ResetMode mode, Rng& rng, SampleFamily family) {
  ParamAssignment out;
  out.delta_used = delta;
  out.reset_mode = mode;
  for (const TaskParam& param : registry) {
    if (mode == ResetMode::kDemonstration && param.reset_class == ResetClass::kRegularOnly) {
      continue;
    }
    const auto [mu, sigma] = interpolate(param, delta);
    double value;
    if (sigma <= 0.0) {
      value = std::clamp(mu, param.lo, param.hi);
    } else {
      value = param.lo - 1.0;  // force at least one draw
      for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        value = family == SampleFamily::kTruncatedNormal
                    ? rng.normal(mu, sigma)
                    : rng.uniform(mu - kSqrt3 * sigma, mu + kSqrt3 * sigma);
        if (value >= param.lo && value <= param.hi) break;
      }
      value = std::clamp(value, param.lo, param.hi);
    }
    out.values[param.name] = value;
  }
  return out;
}

void validate(const TaskParam& param) {
  if (param.name.empty()) throw ConfigError("task parameter must have a name");
  if (param.sigma_init < 0.0 || param.sigma_end < 0.0) {
    throw ConfigError("task parameter '" + param.name + "': sigma must be >= 0");
  }
  if (param.lo > param.hi) {
    throw ConfigError("task parameter '" + param.name + "': lo > hi");
  }
}

}  // namespace acgd
