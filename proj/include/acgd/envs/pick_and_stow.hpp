#pragma once

#include "acgd/envs/manip2d.hpp"

namespace acgd {

// Pick up the block and drop it into the walled box on the right; success
// requires the block resting inside with the gripper open. phi counts steps
// in which the gripper or the carried block touches a wall.
class PickAndStow2dEnv : public Manip2dEnv {
 public:
  explicit PickAndStow2dEnv(Options opts = {.t_max = 150, .k_phi = 0.02}) { opts_ = opts; }

  const std::string& id() const override {
    static const std::string kId = "pick_and_stow_2d";
    return kId;
  }

  Action expert_action() const override;

  double box_x() const { return kBoxX; }
  double interior_halfwidth() const { return kBoxHalf; }
  double wall_height() const { return wall_height_; }
  int64_t contact_steps() const { return contact_steps_; }

  static constexpr double kBoxX = 0.28;
  static constexpr double kBoxHalf = 0.08;
  static constexpr double kWallThickness = 0.012;

 protected:
  void place_scene(const ParamAssignment& assignment, Rng& rng) override;
  void land_block(double x, double y) override;
  void task_step_update() override;
  bool raw_success() const override;
  double phi() const override;
  double goal_x() const override { return kBoxX; }
  double goal_y() const override { return wall_height_; }
  void pack_task(std::vector<double>& reals, std::vector<uint64_t>& words) const override;
  void unpack_task(const std::vector<double>& reals, const std::vector<uint64_t>& words,
                   size_t real_off, size_t word_off) override;
  size_t task_real_count() const override { return 1; }
  size_t task_word_count() const override { return 1; }
  std::vector<std::string> required_params() const override;

 private:
  bool block_inside_box() const;
  bool touches_wall(double x, double y, double halfwidth) const;

  double wall_height_ = 0.06;
  int64_t contact_steps_ = 0;
};

}  // namespace acgd
