#include "acgd/envs/pick_and_stow.hpp"

#include <algorithm>
#include <cmath>

namespace acgd {

std::vector<std::string> PickAndStow2dEnv::required_params() const {
  return {"bounciness",         "success_hold_steps",   "gripper_speed",
          "ctrl_noise",         "obs_noise",            "block_box_distance",
          "block_size",         "gripper_start_height", "gripper_start_offset",
          "wall_height",        "final_vel_threshold"};
}

void PickAndStow2dEnv::place_scene(const ParamAssignment& assignment, Rng& rng) {
  (void)rng;
  const double size = assignment.at("block_size");
  wall_height_ = assignment.at("wall_height");
  contact_steps_ = 0;

  block_x_ = std::clamp(kBoxX - kBoxHalf - kWallThickness - assignment.at("block_box_distance"),
                        -0.45, 0.45);
  block_y_ = 0.5 * size;

  gx_ = std::clamp(block_x_ + assignment.at("gripper_start_offset"), -0.48, 0.48);
  gy_ = std::clamp(assignment.at("gripper_start_height"), kGripperMinY, kWorkspaceY);
}

bool PickAndStow2dEnv::touches_wall(double x, double y, double halfwidth) const {
  for (double wall_x : {kBoxX - kBoxHalf - 0.5 * kWallThickness,
                        kBoxX + kBoxHalf + 0.5 * kWallThickness}) {
    if (std::abs(x - wall_x) < 0.5 * kWallThickness + halfwidth && y - halfwidth < wall_height_) {
      return true;
    }
  }
  return false;
}

void PickAndStow2dEnv::task_step_update() {
  bool contact = touches_wall(gx_, gy_, 0.0);
  if (carried_ && touches_wall(block_x_, block_y_, 0.5 * block_size_)) contact = true;
  if (contact) ++contact_steps_;
}

void PickAndStow2dEnv::land_block(double x, double y) {
  const double s = block_size_;
  const double inner_lo = kBoxX - kBoxHalf;
  const double inner_hi = kBoxX + kBoxHalf;
  const double drop_h = std::max(0.0, y - 0.5 * s);
  const double settle = bounciness_ * drop_h * rng_.uniform(-1.0, 1.0);

  if (x >= inner_lo + 0.5 * s && x <= inner_hi - 0.5 * s) {
    // falls inside; the walls contain any settling motion
    block_x_ = std::clamp(x + settle, inner_lo + 0.5 * s, inner_hi - 0.5 * s);
    block_y_ = 0.5 * s;
    return;
  }
  for (double wall_x : {inner_lo - 0.5 * kWallThickness, inner_hi + 0.5 * kWallThickness}) {
    if (std::abs(x - wall_x) < 0.5 * (kWallThickness + s)) {
      // lands on a wall and slides off away from the box
      const double side = wall_x < kBoxX ? -1.0 : 1.0;
      block_x_ = wall_x + side * (0.5 * kWallThickness + 0.5 * s + 0.005);
      block_y_ = 0.5 * s;
      contact_steps_ += 3;
      return;
    }
  }
  block_x_ = std::clamp(x + settle, -kWorkspaceX, kWorkspaceX);
  block_y_ = 0.5 * s;
}

bool PickAndStow2dEnv::block_inside_box() const {
  return std::abs(block_x_ - kBoxX) <= kBoxHalf - 0.5 * block_size_ &&
         std::abs(block_y_ - 0.5 * block_size_) <= 1e-9;
}

bool PickAndStow2dEnv::raw_success() const {
  if (carried_ || grip_closed_) return false;
  return block_inside_box() && block_speed_ <= vel_threshold_;
}

double PickAndStow2dEnv::phi() const {
  return opts_.k_phi * static_cast<double>(contact_steps_);
}

void PickAndStow2dEnv::pack_task(std::vector<double>& reals, std::vector<uint64_t>& words) const {
  reals.push_back(wall_height_);
  words.push_back(static_cast<uint64_t>(contact_steps_));
}

void PickAndStow2dEnv::unpack_task(const std::vector<double>& reals,
                                   const std::vector<uint64_t>& words, size_t real_off,
                                   size_t word_off) {
  wall_height_ = reals[real_off];
  contact_steps_ = static_cast<int64_t>(words[word_off]);
}

Action PickAndStow2dEnv::expert_action() const {
  const double s = block_size_;
  if (!carried_ && block_inside_box()) {
    // stowed: retreat above the box and wait with the gripper open
    const double safe_h = wall_height_ + 0.08;
    if (gy_ < safe_h - kExpertAlign) return expert_move_to(gx_, safe_h, false);
    return Action{0.0, 0.0, -1.0};
  }
  if (carried_) {
    const double carry_h = wall_height_ + 0.5 * s + 0.05;
    if (std::abs(gx_ - kBoxX) > kExpertAlign) {
      if (gy_ < carry_h - kExpertAlign) return expert_move_to(gx_, carry_h, true);
      return expert_move_to(kBoxX, gy_, true);
    }
    return Action{0.0, 0.0, -1.0};  // drop into the box
  }
  const double grasp_margin = 0.3 * 0.75 * s;
  if (std::abs(gx_ - block_x_) > kExpertAlign) {
    const double approach_h = block_y_ + 2.0 * s;
    if (gy_ < approach_h - kExpertAlign) return expert_move_to(gx_, approach_h, false);
    return expert_move_to(block_x_, gy_, false);
  }
  if (std::abs(gy_ - block_y_) > grasp_margin) return expert_move_to(gx_, block_y_, false);
  return Action{0.0, 0.0, 1.0};
}

}  // namespace acgd
