#pragma once

#include <optional>

#include "acgd/env.hpp"

namespace acgd {

// Shared 2D kinematic world: a point gripper moving in the vertical plane
// (x lateral, y height above the table at y=0), one movable square block,
// proximity+closed-gripper grasping, instant settling on release. Tasks
// supply the landing rule, the success predicate and the penalty term.
//
// Observation layout (fixed length 8):
//   [gx, gy, open_width, time_remaining,
//    rel_block_x, rel_block_y, rel_goal_x, rel_goal_y]
// with additive hash-indexed noise on the relative features.
class Manip2dEnv : public Env {
 public:
  struct Options {
    int t_max = 250;
    double k_phi = 5.0;  // penalty slope, phi = min(0.5, k_phi * measure)
  };

  int obs_dim() const override { return 8; }
  int max_steps() const override { return opts_.t_max; }

  void reset_regular(const ParamAssignment& assignment, Rng& rng) override;
  void reset_from_state(const EnvSnapshot& snapshot,
                        const ParamAssignment& demo_overrides) override;

  StepResult step(const Action& action) override;
  Obs observe() const override;
  EnvSnapshot save_state() const override;

  bool success() const override { return success_; }
  bool done() const override { return done_; }
  int64_t step_count() const override { return step_count_; }

  // Privileged accessors (experts, shaped reward, tests).
  double gripper_x() const { return gx_; }
  double gripper_y() const { return gy_; }
  bool gripper_closed() const { return grip_closed_; }
  bool carrying() const { return carried_; }
  double block_x() const { return block_x_; }
  double block_y() const { return block_y_; }
  double block_size() const { return block_size_; }
  const ParamAssignment& episode_params() const { return params_; }

  static constexpr double kWorkspaceX = 0.5;
  static constexpr double kWorkspaceY = 0.45;
  static constexpr double kGripperMinY = 0.01;

 protected:
  // Task hooks.
  virtual void place_scene(const ParamAssignment& assignment, Rng& rng) = 0;
  // Block released at (x, y); must set block_x_/block_y_ to the settled pose.
  virtual void land_block(double x, double y) = 0;
  // Per-step task bookkeeping after kinematics (e.g. wall contacts).
  virtual void task_step_update() {}
  virtual bool raw_success() const = 0;
  virtual double phi() const = 0;
  // Goal reference point for the observation and the shaped placement term.
  virtual double goal_x() const = 0;
  virtual double goal_y() const = 0;
  // Extra task state appended to the snapshot.
  virtual void pack_task(std::vector<double>& reals, std::vector<uint64_t>& words) const = 0;
  virtual void unpack_task(const std::vector<double>& reals, const std::vector<uint64_t>& words,
                           size_t real_off, size_t word_off) = 0;
  virtual size_t task_real_count() const = 0;
  virtual size_t task_word_count() const = 0;
  // Names the task requires in a regular-reset assignment.
  virtual std::vector<std::string> required_params() const = 0;

  void refresh_cached_params();
  void begin_episode_counters();
  double dist_reach() const;
  double dist_place() const;

  // Proportional waypoint move used by the scripted experts; axis-sequential
  // (x first, then y) with a conservative action cap for teleop-like pacing.
  Action expert_move_to(double tx, double ty, bool close_grip) const;
  static constexpr double kExpertCap = 0.35;
  static constexpr double kExpertAlign = 0.004;

  Options opts_;
  ParamAssignment params_;
  Rng rng_;  // episode rng: control noise, settling
  uint64_t noise_key_ = 0;

  // cached per-episode parameter values
  double gripper_speed_ = 0.03;
  double ctrl_noise_ = 0.0;
  double obs_noise_ = 0.0;
  double bounciness_ = 0.0;
  int64_t hold_required_ = 1;
  double vel_threshold_ = 0.05;
  double block_size_ = 0.05;

  double gx_ = 0.0, gy_ = 0.2;
  bool grip_closed_ = false;
  bool carried_ = false;
  double block_x_ = 0.0, block_y_ = 0.025;
  double block_speed_ = 0.0;

  int64_t step_count_ = 0;
  int64_t hold_count_ = 0;
  bool done_ = false;
  bool success_ = false;
  bool first_grasp_done_ = false;

 private:
  static constexpr uint32_t kSnapshotVersion = 1;
};

}  // namespace acgd
