#include "acgd/envs/block_stack.hpp"

#include <algorithm>
#include <cmath>

namespace acgd {

std::vector<std::string> BlockStack2dEnv::required_params() const {
  return {"bounciness",     "success_hold_steps",   "gripper_speed",
          "ctrl_noise",     "obs_noise",            "block_distance",
          "block_size",     "gripper_start_height", "gripper_start_offset",
          "base_position",  "final_vel_threshold"};
}

void BlockStack2dEnv::place_scene(const ParamAssignment& assignment, Rng& rng) {
  const double size = assignment.at("block_size");
  base_x_ = std::clamp(assignment.at("base_position"), -0.3, 0.3);
  base_y_ = 0.5 * size;
  base_speed_ = 0.0;
  bottom_disp_ = 0.0;

  const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
  block_x_ = std::clamp(base_x_ + side * assignment.at("block_distance"), -0.45, 0.45);
  block_y_ = 0.5 * size;

  gx_ = std::clamp(block_x_ + assignment.at("gripper_start_offset"), -0.48, 0.48);
  gy_ = std::clamp(assignment.at("gripper_start_height"), kGripperMinY, kWorkspaceY);
}

void BlockStack2dEnv::land_block(double x, double y) {
  const double s = block_size_;
  const double dx_to_base = x - base_x_;
  if (std::abs(dx_to_base) < s) {
    // footprint overlaps the base block
    const double target_y = stack_y();
    const double drop_h = std::max(0.0, y - target_y);
    const double settle = bounciness_ * drop_h * rng_.uniform(-1.0, 1.0);
    const double bump = 0.5 * bounciness_ * drop_h * rng_.uniform(-1.0, 1.0);
    double landed_x = x + settle;
    if (std::abs(dx_to_base) <= 0.5 * s && std::abs(landed_x - base_x_) <= 0.75 * s) {
      block_x_ = landed_x;
      block_y_ = target_y;
    } else {
      // glancing hit: slides off to the near side
      const double side = dx_to_base >= 0.0 ? 1.0 : -1.0;
      block_x_ = base_x_ + side * s * 1.02;
      block_y_ = 0.5 * s;
    }
    base_x_ += bump;
    base_speed_ = std::abs(bump);
    bottom_disp_ += std::abs(bump);
  } else {
    const double drop_h = std::max(0.0, y - 0.5 * s);
    const double settle = bounciness_ * drop_h * rng_.uniform(-1.0, 1.0);
    block_x_ = x + settle;
    block_y_ = 0.5 * s;
    if (std::abs(block_x_ - base_x_) < s) {
      const double side = block_x_ >= base_x_ ? 1.0 : -1.0;
      block_x_ = base_x_ + side * s * 1.02;
    }
  }
  block_x_ = std::clamp(block_x_, -kWorkspaceX, kWorkspaceX);
}

bool BlockStack2dEnv::raw_success() const {
  if (carried_) return false;
  if (std::abs(block_x_ - base_x_) > 0.5 * block_size_) return false;
  if (std::abs(block_y_ - stack_y()) > 1e-9) return false;
  return block_speed_ <= vel_threshold_ && base_speed_ <= vel_threshold_;
}

double BlockStack2dEnv::phi() const { return opts_.k_phi * bottom_disp_; }

void BlockStack2dEnv::pack_task(std::vector<double>& reals, std::vector<uint64_t>& words) const {
  (void)words;
  reals.push_back(base_x_);
  reals.push_back(base_y_);
  reals.push_back(base_speed_);
  reals.push_back(bottom_disp_);
}

void BlockStack2dEnv::unpack_task(const std::vector<double>& reals,
                                  const std::vector<uint64_t>& words, size_t real_off,
                                  size_t word_off) {
  (void)words;
  (void)word_off;
  base_x_ = reals[real_off + 0];
  base_y_ = reals[real_off + 1];
  base_speed_ = reals[real_off + 2];
  bottom_disp_ = reals[real_off + 3];
}

Action BlockStack2dEnv::expert_action() const {
  const double s = block_size_;
  const bool stacked = !carried_ && std::abs(block_x_ - base_x_) <= 0.5 * s &&
                       std::abs(block_y_ - stack_y()) <= 1e-9;
  if (stacked) {
    // retreat upward and wait out the hold window
    if (gy_ < 0.3 - kExpertAlign) return expert_move_to(gx_, 0.3, false);
    return Action{0.0, 0.0, -1.0};
  }
  if (carried_) {
    const double carry_h = std::max(0.24, stack_y() + 1.6 * s);
    const double place_y = stack_y() + 0.5 * s + 0.004;
    if (std::abs(gx_ - base_x_) > kExpertAlign) {
      if (gy_ < carry_h - kExpertAlign) return expert_move_to(gx_, carry_h, true);
      return expert_move_to(base_x_, gy_, true);
    }
    if (gy_ > place_y + kExpertAlign) return expert_move_to(gx_, place_y, true);
    return Action{0.0, 0.0, -1.0};  // release
  }
  // approach and grasp the free block
  const double grasp_margin = 0.3 * 0.75 * s;
  if (std::abs(gx_ - block_x_) > kExpertAlign) {
    const double approach_h = block_y_ + 2.0 * s;
    if (gy_ < approach_h - kExpertAlign) return expert_move_to(gx_, approach_h, false);
    return expert_move_to(block_x_, gy_, false);
  }
  if (std::abs(gy_ - block_y_) > grasp_margin) return expert_move_to(gx_, block_y_, false);
  return Action{0.0, 0.0, 1.0};  // close
}

}  // namespace acgd
