#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acgd/params.hpp"

using namespace acgd;

namespace {
TaskParam make_param(const char* name, double mi, double si, double me, double se, double lo,
                     double hi, ResetClass rc = ResetClass::kDemoCompatible) {
  return {name, mi, si, me, se, lo, hi, rc};
}
}  // namespace

TEST_CASE("interpolate hits both endpoints and the midpoint") {
  const TaskParam p = make_param("d", 0.0, 0.0, 2.0, 0.4, -10, 10);
  auto [mu0, s0] = interpolate(p, 0.0);
  CHECK(mu0 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s0 == doctest::Approx(0.0).epsilon(1e-12));
  auto [mu1, s1] = interpolate(p, 1.0);
  CHECK(mu1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s1 == doctest::Approx(0.4).epsilon(1e-12));
  auto [muh, sh] = interpolate(p, 0.5);
  CHECK(muh == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sh == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("zero-variance easiest configuration is exact") {
  std::vector<TaskParam> reg = {make_param("a", 0.25, 0.0, 1.0, 0.3, 0.0, 2.0),
                                make_param("b", -1.5, 0.0, 0.0, 0.2, -2.0, 0.0)};
  Rng rng(3);
  const auto assignment = sample_assignment(reg, 0.0, ResetMode::kRegular, rng);
  CHECK(assignment.at("a") == 0.25);
  CHECK(assignment.at("b") == -1.5);
  CHECK(assignment.delta_used == 0.0);
}

TEST_CASE("demonstration mode drops regular-only parameters") {
  std::vector<TaskParam> reg = {
      make_param("dyn", 0.0, 0.0, 1.0, 0.1, 0.0, 2.0, ResetClass::kDemoCompatible),
      make_param("geom", 0.1, 0.01, 0.5, 0.1, 0.0, 1.0, ResetClass::kRegularOnly)};
  Rng rng(4);
  const auto demo = sample_assignment(reg, 0.5, ResetMode::kDemonstration, rng);
  CHECK(demo.has("dyn"));
  CHECK_FALSE(demo.has("geom"));
  CHECK_THROWS_AS(demo.at("geom"), ConfigError);
  const auto regular = sample_assignment(reg, 0.5, ResetMode::kRegular, rng);
  CHECK(regular.has("dyn"));
  CHECK(regular.has("geom"));
}

TEST_CASE("class closure: demo keys are a subset of regular keys") {
  std::vector<TaskParam> reg;
  Rng gen(11);
  for (int i = 0; i < 12; ++i) {
    reg.push_back(make_param(("p" + std::to_string(i)).c_str(), gen.uniform(), 0.1,
                             gen.uniform(), 0.2, -5.0, 5.0,
                             i % 3 == 0 ? ResetClass::kRegularOnly
                                        : ResetClass::kDemoCompatible));
  }
  Rng rng(12);
  const auto demo = sample_assignment(reg, 0.7, ResetMode::kDemonstration, rng);
  const auto regular = sample_assignment(reg, 0.7, ResetMode::kRegular, rng);
  for (const auto& [name, value] : demo.values) {
    CHECK(regular.has(name));
  }
}

TEST_CASE("sampled moments match the hard endpoint") {
  std::vector<TaskParam> reg = {make_param("x", 0.0, 0.0, 1.0, 0.05, -10.0, 10.0)};
  Rng rng(7, 7);
  const int n = 10000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto a = sample_assignment(reg, 1.0, ResetMode::kRegular, rng);
    sum += a.at("x");
    sq += a.at("x") * a.at("x");
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(mean - 1.0) <= 3.0 * 0.05 / std::sqrt(static_cast<double>(n)) * 10.0);
  CHECK(std::abs(mean - 1.0) <= 3.0 * 0.05 / 100.0);  // spec bound: 3*sigma_end/100
  CHECK(std::abs(stddev - 0.05) <= 0.1 * 0.05);
}

TEST_CASE("samples always respect bounds") {
  std::vector<TaskParam> reg = {make_param("tight", 0.5, 0.0, 0.5, 3.0, 0.4, 0.6)};
  Rng rng(8);
  for (int k = 0; k < 2000; ++k) {
    const auto a = sample_assignment(reg, 1.0, ResetMode::kRegular, rng);
    CHECK(a.at("tight") >= 0.4);
    CHECK(a.at("tight") <= 0.6);
  }
}

TEST_CASE("uniform family matches the requested moments") {
  std::vector<TaskParam> reg = {make_param("u", 0.0, 0.0, 2.0, 0.1, -10.0, 10.0)};
  Rng rng(9);
  const int n = 20000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const auto a =
        sample_assignment(reg, 1.0, ResetMode::kRegular, rng, SampleFamily::kUniform);
    sum += a.at("u");
    sq += a.at("u") * a.at("u");
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sq / n - mean * mean);
  CHECK(mean == doctest::Approx(2.0).epsilon(0.01));
  CHECK(stddev == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("support width grows with delta when sigma_end >= sigma_init") {
  const TaskParam p = make_param("w", 0.0, 0.05, 0.0, 0.4, -100.0, 100.0);
  double prev_width = -1.0;
  for (double delta = 0.0; delta <= 1.0; delta += 0.1) {
    auto [mu, sigma] = interpolate(p, delta);
    (void)mu;
    const double width = 6.0 * sigma;
    CHECK(width >= prev_width);
    prev_width = width;
  }
}

TEST_CASE("sampling is deterministic given registry, delta, mode and seed") {
  std::vector<TaskParam> reg = {make_param("a", 0.0, 0.1, 1.0, 0.3, -5.0, 5.0),
                                make_param("b", 2.0, 0.0, 3.0, 0.5, 0.0, 6.0)};
  for (int trial = 0; trial < 3; ++trial) {
    Rng r1(77, 3), r2(77, 3);
    for (int k = 0; k < 50; ++k) {
      const auto a1 = sample_assignment(reg, 0.6, ResetMode::kRegular, r1);
      const auto a2 = sample_assignment(reg, 0.6, ResetMode::kRegular, r2);
      CHECK(a1.values == a2.values);
    }
  }
}

TEST_CASE("empty registry yields an empty assignment") {
  Rng rng(1);
  const auto a = sample_assignment({}, 0.5, ResetMode::kRegular, rng);
  CHECK(a.values.empty());
}

TEST_CASE("parameter validation rejects bad shapes") {
  TaskParam bad_sigma = make_param("s", 0.0, -0.1, 1.0, 0.1, 0.0, 1.0);
  CHECK_THROWS_AS(validate(bad_sigma), ConfigError);
  TaskParam bad_bounds = make_param("b", 0.0, 0.1, 1.0, 0.1, 2.0, 1.0);
  CHECK_THROWS_AS(validate(bad_bounds), ConfigError);
}
