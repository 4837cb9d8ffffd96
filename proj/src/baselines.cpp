#include "uavmec/baselines.hpp"

#include <cmath>

#include "uavmec/error.hpp"

namespace uavmec {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kRandomTrajectory: return "random_trajectory";
    case PolicyKind::kAllOffload: return "all_offload";
    case PolicyKind::kAllLocal: return "all_local";
    case PolicyKind::kLearned: return "learned";
  }
  return "unknown";
}

PolicyKind parse_policy_kind(const std::string& name) {
  if (name == "random_trajectory" || name == "rt") return PolicyKind::kRandomTrajectory;
  if (name == "all_offload" || name == "ao") return PolicyKind::kAllOffload;
  if (name == "all_local" || name == "al") return PolicyKind::kAllLocal;
  if (name == "learned" || name == "muecrs") return PolicyKind::kLearned;
  throw Error(ErrorCode::kConfig, "unknown policy kind '" + name + "'");
}

std::vector<Vec3> rt_policy(std::mt19937_64& rng, const ScenarioConfig& config) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> speed(0.0, config.max_step());
  std::vector<Vec3> actions;
  actions.reserve(config.num_uavs);
  for (int n = 0; n < config.num_uavs; ++n) {
    Vec3 dir;
    double norm = 0.0;
    do {
      dir = Vec3(gauss(rng), gauss(rng), gauss(rng));
      norm = dir.norm();
    } while (norm == 0.0);
    actions.push_back(dir / norm * speed(rng));
  }
  return actions;
}

Evaluation ao_policy(const SlotContext& ctx) {
  return evaluate_assignment(ctx.ingress, ctx);
}

Evaluation al_policy(const SlotContext& ctx) {
  const std::vector<int> local(ctx.num_users(), kLocal);
  return evaluate_assignment(local, ctx);
}

}  // namespace uavmec
