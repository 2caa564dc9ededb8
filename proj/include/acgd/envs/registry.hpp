#pragma once

#include <memory>
#include <string>
#include <vector>

#include "acgd/env.hpp"

namespace acgd {

// Construct an environment by id ("block_stack_2d", "pick_and_stow_2d").
// Throws ConfigError for unknown ids.
std::unique_ptr<Env> make_env(const std::string& env_id);

// Default difficulty registry for an environment: the demo-compatible set
// (dynamics, success criteria, noise) plus the regular-reset extras
// (placement spreads, block geometry). mu_init encodes the easiest
// configuration; delta = 1 reaches the hardest values.
std::vector<TaskParam> default_registry(const std::string& env_id);

}  // namespace acgd
