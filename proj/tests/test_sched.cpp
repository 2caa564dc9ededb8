#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acgd/sched.hpp"

using namespace acgd;

namespace {
CurriculumState make_state(double sr_r, int64_t i, int64_t n) {
  CurriculumState s;
  s.regular.tracker.sr = sr_r;
  s.iteration = i;
  s.total_iterations = n;
  return s;
}
}  // namespace

TEST_CASE("mixing probability formula") {
  CHECK(mixing_probability(0.0, 0, 100) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mixing_probability(1.0, 100, 100) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mixing_probability(0.4, 50, 100) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK_THROWS_AS(mixing_probability(0.5, 0, 0), ConfigError);
}

TEST_CASE("mixing probability is monotone and bounded") {
  double prev = -1.0;
  for (int i = 0; i <= 100; i += 5) {
    const double p = mixing_probability(0.3, i, 100);
    CHECK(p >= prev);
    prev = p;
  }
  prev = -1.0;
  for (double sr = 0.0; sr <= 1.0; sr += 0.05) {
    const double p = mixing_probability(sr, 40, 100);
    CHECK(p >= prev);
    prev = p;
  }
  CHECK(mixing_probability(0.0, 0, 50) == 0.0);
  for (double sr : {0.0, 0.3, 1.0}) {
    CHECK(mixing_probability(sr, 50, 50) >= 0.5);
  }
}

TEST_CASE("choose_reset_mode degenerate branches") {
  Rng rng(1);
  const CurriculumState never = make_state(0.0, 0, 100);  // p = 0
  for (int k = 0; k < 200; ++k) {
    CHECK(choose_reset_mode(never, rng) == ResetMode::kDemonstration);
  }
  const CurriculumState always = make_state(1.0, 100, 100);  // p = 1
  for (int k = 0; k < 200; ++k) {
    CHECK(choose_reset_mode(always, rng) == ResetMode::kRegular);
  }
}

TEST_CASE("choose_reset_mode matches its probability empirically") {
  Rng rng(42, 7);
  const CurriculumState state = make_state(0.4, 50, 100);  // p = 0.45
  const int n = 100000;
  int regular = 0;
  for (int k = 0; k < n; ++k) {
    if (choose_reset_mode(state, rng) == ResetMode::kRegular) ++regular;
  }
  const double fraction = static_cast<double>(regular) / n;
  CHECK(fraction == doctest::Approx(0.45).epsilon(0.0).scale(0.0).epsilon(0.025));
  CHECK(std::abs(fraction - 0.45) < 0.01);
}

TEST_CASE("update_difficulty follows the three-branch rule") {
  CurriculumState state;
  state.alpha = 0.4;
  state.beta = 0.6;
  state.increment = 0.002;

  DifficultyCoefficient coef;
  coef.delta = 0.100;
  coef.tracker.sr = 0.7;
  CHECK(update_difficulty(coef, state).delta == doctest::Approx(0.102).epsilon(1e-12));

  coef.delta = 0.5;
  coef.tracker.sr = 0.5;
  CHECK(update_difficulty(coef, state).delta == doctest::Approx(0.5).epsilon(1e-12));

  coef.delta = 1.0;
  coef.tracker.sr = 0.9;
  CHECK(update_difficulty(coef, state).delta == doctest::Approx(1.0).epsilon(1e-12));

  coef.delta = 0.0;
  coef.tracker.sr = 0.1;
  CHECK(update_difficulty(coef, state).delta == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("delta stays in [0,1] under arbitrary update sequences") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    CurriculumState state;
    state.increment = rng.uniform(0.0, 0.3);
    DifficultyCoefficient coef;
    coef.delta = rng.uniform();
    for (int k = 0; k < 500; ++k) {
      coef.tracker.sr = rng.uniform();
      coef = update_difficulty(coef, state);
      CHECK(coef.delta >= 0.0);
      CHECK(coef.delta <= 1.0);
      const double move = std::abs(coef.delta);
      (void)move;
    }
  }
}

TEST_CASE("dead zone keeps both coefficients constant") {
  CurriculumState state;
  state.total_iterations = 100;
  Rng rng(5);
  state.demo.delta = 0.33;
  state.regular.delta = 0.71;
  // seed the trackers into the dead zone and keep every EMA value inside it
  state.demo.tracker.sr = 0.5;
  state.regular.tracker.sr = 0.5;
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<EpisodeOutcome> outcomes;
    for (int e = 0; e < 10; ++e) {
      // alternating outcomes hold the EMA near 0.5
      outcomes.push_back({e % 2 == 0 ? ResetMode::kDemonstration : ResetMode::kRegular,
                          e % 4 < 2, 100});
    }
    curriculum_step(state, outcomes);
    CHECK(state.demo.tracker.sr >= state.alpha);
    CHECK(state.demo.tracker.sr <= state.beta);
    CHECK(state.demo.delta == doctest::Approx(0.33).epsilon(1e-12));
    CHECK(state.regular.delta == doctest::Approx(0.71).epsilon(1e-12));
  }
}

TEST_CASE("success-rate tracker EMA") {
  SuccessRateTracker t;
  t.sr = 0.5;
  t.smoothing = 0.05;
  t.record(1.0);
  CHECK(t.sr == doctest::Approx(0.525).epsilon(1e-12));
  t.sr = 0.5;
  t.record(0.0);
  CHECK(t.sr == doctest::Approx(0.475).epsilon(1e-12));
  CHECK(t.episodes_seen == 2);
}

TEST_CASE("EMA converges geometrically under constant success") {
  SuccessRateTracker t;
  t.smoothing = 0.05;
  // oracle: 1 - (1-lambda)^n <= 0.01 after n = ceil(ln 0.01 / ln(1-lambda))
  const auto needed =
      static_cast<int64_t>(std::ceil(std::log(0.01) / std::log(1.0 - t.smoothing)));
  CHECK(needed == 90);
  double prev = 0.0;
  for (int64_t k = 0; k < needed; ++k) {
    t.record(1.0);
    CHECK(t.sr >= prev);  // monotone from below
    CHECK(t.sr >= 0.0);
    CHECK(t.sr <= 1.0);
    prev = t.sr;
  }
  CHECK(1.0 - t.sr <= 0.01);
}

TEST_CASE("curriculum_step with no completed episodes only advances the iteration") {
  CurriculumState state;
  state.total_iterations = 10;
  state.demo.delta = 0.4;
  state.regular.delta = 0.2;
  state.demo.tracker.sr = 0.9;
  state.regular.tracker.sr = 0.9;
  const CurriculumState before = state;
  curriculum_step(state, {});
  CHECK(state.iteration == before.iteration + 1);
  CHECK(state.demo.delta == before.demo.delta);
  CHECK(state.regular.delta == before.regular.delta);
  CHECK(state.demo.tracker.sr == before.demo.tracker.sr);
}

TEST_CASE("only the matching coefficient moves") {
  CurriculumState state;
  state.total_iterations = 100;
  state.increment = 0.002;
  state.demo.tracker.sr = 0.9;
  state.demo.tracker.episodes_seen = 50;
  state.demo.delta = 0.3;
  state.regular.delta = 0.1;
  std::vector<EpisodeOutcome> outcomes(8, {ResetMode::kDemonstration, true, 80});
  curriculum_step(state, outcomes);
  CHECK(state.demo.delta == doctest::Approx(0.302).epsilon(1e-12));
  CHECK(state.regular.delta == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(state.regular.tracker.episodes_seen == 0);
}

TEST_CASE("cold-start coefficient never moves without evidence") {
  CurriculumState state;
  state.total_iterations = 100;
  // no episodes of either kind over many iterations
  for (int k = 0; k < 20; ++k) curriculum_step(state, {});
  CHECK(state.demo.delta == 0.0);
  CHECK(state.regular.delta == 0.0);
  CHECK(state.demo.tracker.episodes_seen == 0);
}

TEST_CASE("scheduler decisions are deterministic given state and seed") {
  const CurriculumState state = make_state(0.37, 21, 60);
  for (int trial = 0; trial < 3; ++trial) {
    Rng a(123, 9);
    Rng b(123, 9);
    for (int k = 0; k < 1000; ++k) {
      CHECK(choose_reset_mode(state, a) == choose_reset_mode(state, b));
    }
  }
}

TEST_CASE("controller confines a synthetic success curve") {
  // success probability s(delta) = 1 - 0.8*delta, one episode per update
  CurriculumState state;
  state.total_iterations = 3000;
  state.increment = 0.002;
  Rng rng(2024, 1);
  DifficultyCoefficient coef;
  coef.tracker.smoothing = 0.05;
  int confined = 0;
  int counted = 0;
  const int warmup = 500;
  const int total = 3000;
  for (int ep = 0; ep < total; ++ep) {
    const double p = 1.0 - 0.8 * coef.delta;
    coef.tracker.record(rng.uniform() < p ? 1.0 : 0.0);
    coef = update_difficulty(coef, state);
    if (ep >= warmup) {
      ++counted;
      if (coef.tracker.sr >= state.alpha - 0.1 && coef.tracker.sr <= state.beta + 0.1) {
        ++confined;
      }
    }
  }
  CHECK(static_cast<double>(confined) / counted >= 0.8);
  CHECK(coef.delta > 0.3);
}
