#include "acgd/envs/registry.hpp"

#include "acgd/envs/block_stack.hpp"
#include "acgd/envs/pick_and_stow.hpp"

namespace acgd {

std::unique_ptr<Env> make_env(const std::string& env_id) {
  if (env_id == "block_stack_2d") return std::make_unique<BlockStack2dEnv>();
  if (env_id == "pick_and_stow_2d") return std::make_unique<PickAndStow2dEnv>();
  throw ConfigError("unknown environment id '" + env_id + "'");
}

namespace {

std::vector<TaskParam> shared_demo_compatible() {
  // Order matters: sampling consumes the rng stream in registry order.
  return {
      {"bounciness", 0.0, 0.0, 0.40, 0.08, 0.0, 0.6, ResetClass::kDemoCompatible},
      {"success_hold_steps", 1.0, 0.0, 10.0, 0.0, 1.0, 10.0, ResetClass::kDemoCompatible},
      {"gripper_speed", 0.035, 0.0, 0.028, 0.002, 0.02, 0.05, ResetClass::kDemoCompatible},
      {"ctrl_noise", 0.0, 0.0, 0.0025, 0.0008, 0.0, 0.006, ResetClass::kDemoCompatible},
      {"obs_noise", 0.0, 0.0, 0.004, 0.001, 0.0, 0.01, ResetClass::kDemoCompatible},
  };
}

}  // namespace

std::vector<TaskParam> default_registry(const std::string& env_id) {
  std::vector<TaskParam> reg = shared_demo_compatible();
  if (env_id == "block_stack_2d") {
    reg.push_back({"block_distance", 0.10, 0.005, 0.20, 0.04, 0.06, 0.32, ResetClass::kRegularOnly});
    reg.push_back({"block_size", 0.05, 0.0, 0.040, 0.003, 0.028, 0.06, ResetClass::kRegularOnly});
    reg.push_back(
        {"gripper_start_height", 0.12, 0.01, 0.20, 0.05, 0.04, 0.34, ResetClass::kRegularOnly});
    reg.push_back(
        {"gripper_start_offset", 0.0, 0.02, 0.0, 0.10, -0.3, 0.3, ResetClass::kRegularOnly});
    reg.push_back({"base_position", 0.0, 0.03, 0.0, 0.10, -0.25, 0.25, ResetClass::kRegularOnly});
    reg.push_back(
        {"final_vel_threshold", 0.05, 0.0, 0.01, 0.0, 0.004, 0.08, ResetClass::kRegularOnly});
    return reg;
  }
  if (env_id == "pick_and_stow_2d") {
    reg.push_back(
        {"block_box_distance", 0.10, 0.005, 0.22, 0.04, 0.06, 0.36, ResetClass::kRegularOnly});
    reg.push_back({"block_size", 0.05, 0.0, 0.040, 0.003, 0.028, 0.06, ResetClass::kRegularOnly});
    reg.push_back(
        {"gripper_start_height", 0.12, 0.01, 0.20, 0.05, 0.04, 0.34, ResetClass::kRegularOnly});
    reg.push_back(
        {"gripper_start_offset", 0.0, 0.02, 0.0, 0.10, -0.3, 0.3, ResetClass::kRegularOnly});
    reg.push_back({"wall_height", 0.04, 0.0, 0.08, 0.01, 0.02, 0.12, ResetClass::kRegularOnly});
    reg.push_back(
        {"final_vel_threshold", 0.05, 0.0, 0.01, 0.0, 0.004, 0.08, ResetClass::kRegularOnly});
    return reg;
  }
  throw ConfigError("unknown environment id '" + env_id + "'");
}

}  // namespace acgd
