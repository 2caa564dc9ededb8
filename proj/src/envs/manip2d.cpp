#include "acgd/envs/manip2d.hpp"

#include <algorithm>
#include <cmath>

namespace acgd {

double shaped_step_reward(const ShapedConfig& cfg, double dist_reach, double dist_place,
                          bool carrying, bool grasp_event, bool success_event,
                          double sparse_reward) {
  double r = carrying ? -cfg.w_place * dist_place : -cfg.w_reach * dist_reach;
  if (grasp_event) r += cfg.bonus_grasp;
  if (success_event) r += cfg.bonus_place + sparse_reward;
  return r;
}

void Manip2dEnv::refresh_cached_params() {
  gripper_speed_ = params_.at("gripper_speed");
  ctrl_noise_ = params_.at("ctrl_noise");
  obs_noise_ = params_.at("obs_noise");
  bounciness_ = params_.at("bounciness");
  hold_required_ = std::max<int64_t>(1, std::llround(params_.at("success_hold_steps")));
  vel_threshold_ = params_.at("final_vel_threshold");
  block_size_ = params_.at("block_size");
}

void Manip2dEnv::begin_episode_counters() {
  step_count_ = 0;
  hold_count_ = 0;
  done_ = false;
  success_ = false;
  first_grasp_done_ = false;
  carried_ = false;
  grip_closed_ = false;
  block_speed_ = 0.0;
}

void Manip2dEnv::reset_regular(const ParamAssignment& assignment, Rng& rng) {
  for (const auto& name : required_params()) {
    if (!assignment.has(name)) {
      throw ConfigError("environment '" + id() + "' requires parameter '" + name + "'");
    }
  }
  params_ = assignment;
  begin_episode_counters();
  noise_key_ = rng.next_u64();
  rng_ = Rng(rng.next_u64());
  place_scene(assignment, rng);
  refresh_cached_params();
}

void Manip2dEnv::reset_from_state(const EnvSnapshot& snapshot,
                                  const ParamAssignment& demo_overrides) {
  if (snapshot.env_id != id()) {
    throw UsageError("snapshot from environment '" + snapshot.env_id +
                     "' cannot restore environment '" + id() + "'");
  }
  if (snapshot.version != kSnapshotVersion) {
    throw ParseError("unsupported snapshot version " + std::to_string(snapshot.version) +
                     " for environment '" + id() + "'");
  }
  const size_t base_reals = 5;
  const size_t base_words = 10;
  if (snapshot.reals.size() != base_reals + task_real_count() ||
      snapshot.words.size() != base_words + task_word_count()) {
    throw ParseError("snapshot payload size mismatch for environment '" + id() + "'");
  }
  params_ = snapshot.params;
  // Only the demo-compatible subset may be re-randomized; everything else is
  // pre-determined by the recorded state.
  for (const auto& [name, value] : demo_overrides.values) {
    if (name == "bounciness" || name == "success_hold_steps" || name == "gripper_speed" ||
        name == "ctrl_noise" || name == "obs_noise") {
      params_.values[name] = value;
    }
  }

  gx_ = snapshot.reals[0];
  gy_ = snapshot.reals[1];
  block_x_ = snapshot.reals[2];
  block_y_ = snapshot.reals[3];
  block_speed_ = snapshot.reals[4];

  rng_.set_state({snapshot.words[0], snapshot.words[1], snapshot.words[2], snapshot.words[3]});
  noise_key_ = snapshot.words[4];
  step_count_ = static_cast<int64_t>(snapshot.words[5]);
  hold_count_ = static_cast<int64_t>(snapshot.words[6]);
  grip_closed_ = snapshot.words[7] != 0;
  carried_ = snapshot.words[8] != 0;
  first_grasp_done_ = snapshot.words[9] != 0;
  // Restoring starts a fresh episode from this state: termination latches
  // are not part of the snapshot.
  done_ = false;
  success_ = false;

  unpack_task(snapshot.reals, snapshot.words, base_reals, base_words);
  refresh_cached_params();
}

EnvSnapshot Manip2dEnv::save_state() const {
  EnvSnapshot snap;
  snap.env_id = id();
  snap.version = kSnapshotVersion;
  snap.reals = {gx_, gy_, block_x_, block_y_, block_speed_};
  const auto s = rng_.state();
  snap.words = {s[0],
                s[1],
                s[2],
                s[3],
                noise_key_,
                static_cast<uint64_t>(step_count_),
                static_cast<uint64_t>(hold_count_),
                grip_closed_ ? 1ull : 0ull,
                carried_ ? 1ull : 0ull,
                first_grasp_done_ ? 1ull : 0ull};
  pack_task(snap.reals, snap.words);
  snap.params = params_;
  return snap;
}

Obs Manip2dEnv::observe() const {
  Obs obs(8, 0.0);
  obs[0] = gx_;
  obs[1] = gy_;
  obs[2] = grip_closed_ ? 0.0 : 1.0;
  obs[3] = static_cast<double>(opts_.t_max - std::min<int64_t>(step_count_, opts_.t_max)) /
           static_cast<double>(opts_.t_max);
  obs[4] = block_x_ - gx_;
  obs[5] = block_y_ - gy_;
  obs[6] = goal_x() - gx_;
  obs[7] = goal_y() - gy_;
  if (obs_noise_ > 0.0) {
    for (int k = 0; k < 4; ++k) {
      obs[4 + k] += obs_noise_ * hashed_normal(noise_key_, static_cast<uint64_t>(step_count_) * 8 +
                                                               static_cast<uint64_t>(k));
    }
  }
  return obs;
}

StepResult Manip2dEnv::step(const Action& action) {
  if (done_) throw UsageError("step() called on a finished episode of '" + id() + "'");

  const bool was_carrying = carried_;
  const double prev_block_x = block_x_;
  const double prev_block_y = block_y_;

  double ax = std::clamp(action.dx, -1.0, 1.0);
  double ay = std::clamp(action.dy, -1.0, 1.0);
  double dx = ax * gripper_speed_;
  double dy = ay * gripper_speed_;
  if (ctrl_noise_ > 0.0) {
    dx += ctrl_noise_ * rng_.normal();
    dy += ctrl_noise_ * rng_.normal();
  }
  gx_ = std::clamp(gx_ + dx, -kWorkspaceX, kWorkspaceX);
  gy_ = std::clamp(gy_ + dy, kGripperMinY, kWorkspaceY);

  grip_closed_ = action.dgrip > 0.0;

  bool grasp_event = false;
  if (carried_) {
    if (grip_closed_) {
      block_x_ = gx_;
      block_y_ = gy_;
    } else {
      carried_ = false;
      land_block(gx_, gy_);
    }
  } else if (grip_closed_) {
    const double tol = 0.75 * block_size_;
    if (std::abs(gx_ - block_x_) <= tol && std::abs(gy_ - block_y_) <= tol) {
      carried_ = true;
      block_x_ = gx_;
      block_y_ = gy_;
      if (!first_grasp_done_) {
        first_grasp_done_ = true;
        grasp_event = true;
      }
    }
  }

  block_speed_ = std::hypot(block_x_ - prev_block_x, block_y_ - prev_block_y);
  task_step_update();

  ++step_count_;

  if (raw_success()) {
    ++hold_count_;
  } else {
    hold_count_ = 0;
  }

  double sparse_reward = 0.0;
  bool success_event = false;
  if (hold_count_ >= hold_required_) {
    success_ = true;
    done_ = true;
    success_event = true;
    sparse_reward = 1.0 - std::min(0.5, phi());
  } else if (step_count_ >= opts_.t_max) {
    done_ = true;
  }

  StepResult result;
  result.success = success_;
  result.done = done_;
  if (reward_mode_ == RewardMode::kSparse) {
    result.reward = sparse_reward;
  } else {
    result.reward = shaped_step_reward(shaped_, dist_reach(), dist_place(), was_carrying,
                                       grasp_event, success_event, sparse_reward);
  }
  result.info["phi"] = std::min(0.5, phi());
  result.info["carrying"] = carried_ ? 1.0 : 0.0;
  result.info["grasped_once"] = first_grasp_done_ ? 1.0 : 0.0;
  result.obs = observe();
  return result;
}

double Manip2dEnv::dist_reach() const { return std::hypot(block_x_ - gx_, block_y_ - gy_); }

double Manip2dEnv::dist_place() const {
  const double ty = goal_y() + block_size_ + 0.02;
  return std::hypot(block_x_ - goal_x(), block_y_ - ty);
}

Action Manip2dEnv::expert_move_to(double tx, double ty, bool close_grip) const {
  Action a;
  const double ex = tx - gx_;
  const double ey = ty - gy_;
  // x first, then y: deliberate single-axis motion
  if (std::abs(ex) > kExpertAlign) {
    a.dx = std::clamp(ex / gripper_speed_, -kExpertCap, kExpertCap);
  } else if (std::abs(ey) > kExpertAlign) {
    a.dy = std::clamp(ey / gripper_speed_, -kExpertCap, kExpertCap);
  }
  a.dgrip = close_grip ? 1.0 : -1.0;
  return a;
}

}  // namespace acgd
