#pragma once

#include <random>
#include <string>
#include <vector>

#include "uavmec/allocator.hpp"
#include "uavmec/model.hpp"

namespace uavmec {

enum class PolicyKind { kRandomTrajectory, kAllOffload, kAllLocal, kLearned };

std::string to_string(PolicyKind kind);
/// Accepts random_trajectory, all_offload, all_local, learned.
PolicyKind parse_policy_kind(const std::string& name);

/// Uniform random direction with speed uniform in [0, v_max * dt], per UAV.
std::vector<Vec3> rt_policy(std::mt19937_64& rng, const ScenarioConfig& config);

/// Every covered user offloads to its best-rate covering UAV; the rest stay local.
Evaluation ao_policy(const SlotContext& ctx);

Evaluation al_policy(const SlotContext& ctx);

}  // namespace uavmec
