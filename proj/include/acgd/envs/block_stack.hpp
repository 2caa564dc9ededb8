#pragma once

#include "acgd/envs/manip2d.hpp"

namespace acgd {

// Stack the movable block on top of the base block and keep it there for
// success_hold_steps consecutive low-velocity steps. The sparse reward is
// 1 - phi where phi penalizes total base-block displacement.
class BlockStack2dEnv : public Manip2dEnv {
 public:
  explicit BlockStack2dEnv(Options opts = {.t_max = 250, .k_phi = 5.0}) { opts_ = opts; }

  const std::string& id() const override {
    static const std::string kId = "block_stack_2d";
    return kId;
  }

  Action expert_action() const override;

  double base_x() const { return base_x_; }
  double base_y() const { return base_y_; }
  double bottom_displacement() const { return bottom_disp_; }

 protected:
  void place_scene(const ParamAssignment& assignment, Rng& rng) override;
  void land_block(double x, double y) override;
  bool raw_success() const override;
  double phi() const override;
  double goal_x() const override { return base_x_; }
  double goal_y() const override { return base_y_; }
  void pack_task(std::vector<double>& reals, std::vector<uint64_t>& words) const override;
  void unpack_task(const std::vector<double>& reals, const std::vector<uint64_t>& words,
                   size_t real_off, size_t word_off) override;
  size_t task_real_count() const override { return 4; }
  size_t task_word_count() const override { return 0; }
  std::vector<std::string> required_params() const override;

 private:
  double stack_y() const { return base_y_ + block_size_; }

  double base_x_ = 0.0;
  double base_y_ = 0.025;
  double base_speed_ = 0.0;
  double bottom_disp_ = 0.0;
};

}  // namespace acgd
