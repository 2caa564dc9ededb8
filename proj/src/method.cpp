#include "acgd/method.hpp"

#include <algorithm>
#include <array>

namespace acgd {

MethodTraits method_traits(MethodSpec method) {
  MethodTraits t;
  switch (method) {
    case MethodSpec::kAcgd:
      t.demo_resets = t.regular_resets = t.adaptive = true;
      break;
    case MethodSpec::kSparsePpo:
      t.regular_resets = t.params_pinned_max = true;
      break;
    case MethodSpec::kShapedPpo:
      t.regular_resets = t.params_pinned_max = t.shaped_reward = true;
      break;
    case MethodSpec::kBc:
      t.offline_only = true;
      break;
    case MethodSpec::kBcInitPpo:
      t.regular_resets = t.params_pinned_max = t.bc_pretrain = true;
      break;
    case MethodSpec::kUniformDemoCurriculum:
      t.demo_resets = true;  // delta_d frozen at 1
      break;
    case MethodSpec::kLinearDemoCurriculum:
      t.demo_resets = t.linear_delta = true;
      break;
    case MethodSpec::kLinearWithRegularResets:
      t.demo_resets = t.regular_resets = t.linear_delta = true;
      break;
    case MethodSpec::kSharedDelta:
      t.demo_resets = t.regular_resets = t.adaptive = t.shared_delta = true;
      break;
    case MethodSpec::kConstantMaxDifficulty:
      t.demo_resets = t.regular_resets = t.adaptive = t.params_pinned_max = true;
      break;
  }
  return t;
}

namespace {
struct MethodName {
  MethodSpec spec;
  const char* canonical;
  const char* snake;
};
constexpr std::array<MethodName, 10> kMethodNames{{
    {MethodSpec::kAcgd, "ACGD", "acgd"},
    {MethodSpec::kSparsePpo, "SparsePPO", "sparse_ppo"},
    {MethodSpec::kShapedPpo, "ShapedPPO", "shaped_ppo"},
    {MethodSpec::kBc, "BC", "bc"},
    {MethodSpec::kBcInitPpo, "BCInitPPO", "bc_init_ppo"},
    {MethodSpec::kUniformDemoCurriculum, "UniformDemoCurriculum", "uniform_demo"},
    {MethodSpec::kLinearDemoCurriculum, "LinearDemoCurriculum", "linear_demo"},
    {MethodSpec::kLinearWithRegularResets, "LinearWithRegularResets", "linear_with_regular"},
    {MethodSpec::kSharedDelta, "SharedDelta", "shared_delta"},
    {MethodSpec::kConstantMaxDifficulty, "ConstantMaxDifficulty", "constant_max_difficulty"},
}};
}  // namespace

MethodSpec parse_method(const std::string& name) {
  for (const auto& m : kMethodNames) {
    if (name == m.canonical || name == m.snake) return m.spec;
  }
  std::string known;
  for (const auto& m : kMethodNames) {
    known += std::string(known.empty() ? "" : ", ") + m.canonical;
  }
  throw ConfigError("unknown method '" + name + "' (known: " + known + ")");
}

std::string method_name(MethodSpec method) {
  for (const auto& m : kMethodNames) {
    if (m.spec == method) return m.canonical;
  }
  return "?";
}

}  // namespace acgd
