#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "acgd/env.hpp"

namespace acgd {

// Recorded demonstration: full state snapshots s_0..s_T (the final one
// satisfies the success predicate), optionally the expert actions a_0..a_{T-1}
// for the behavior-cloning store. The curriculum path reads only the states.
struct Trajectory {
  std::string env_id;
  std::vector<EnvSnapshot> states;
  std::vector<std::array<double, 3>> actions;  // empty unless recorded with actions
  ParamAssignment params;                      // assignment used at recording
  std::string recorder = "scripted-expert";
  uint64_t seed = 0;

  int64_t length() const { return static_cast<int64_t>(states.size()); }
};

struct DemoStore {
  std::string env_id;
  bool with_actions = false;
  std::vector<Trajectory> trajectories;
};

struct RecordOptions {
  int max_retries = 20;
  bool with_actions = false;
};

// Raised when the expert exhausts its retry budget without a success.
struct ExpertFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using StepPolicy = std::function<Action(const Env&)>;

// Runs the expert (or a supplied policy) from fresh easiest-difficulty
// regular resets until an episode ends in success; returns that trajectory.
Trajectory record_demonstration(Env& env, std::span<const TaskParam> registry, Rng& rng,
                                const RecordOptions& opts = {},
                                const StepPolicy& policy = nullptr);

DemoStore record_demo_store(Env& env, std::span<const TaskParam> registry, int count,
                            uint64_t seed, const RecordOptions& opts = {});

// Inclusive index window over a trajectory of T states:
// { ceil((1-delta_d)*(T-1)), ..., T-1 }.
struct IndexRange {
  int64_t first = 0;
  int64_t last = 0;
  int64_t size() const { return last - first + 1; }
  bool contains(int64_t i) const { return i >= first && i <= last; }
};

IndexRange sample_window(int64_t num_states, double delta_d);

struct DemoRestart {
  const Trajectory* trajectory = nullptr;
  int64_t traj_index = 0;
  int64_t state_index = 0;
};

// Uniform trajectory, uniform index within the delta_d window.
DemoRestart sample_demo_restart(const DemoStore& store, double delta_d, Rng& rng);

// Versioned, checksummed, line-delimited store files. Serialization is
// canonical so save(load(f)) == f byte-for-byte.
void save_store(const DemoStore& store, const std::filesystem::path& path);
DemoStore load_store(const std::filesystem::path& path);

}  // namespace acgd
