#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavmec/allocator.hpp"
#include "uavmec/mlp.hpp"
#include "uavmec/model.hpp"

namespace uavmec {

/// How each slot's offloading decision is produced.
enum class OffloadPolicy { kCoordinateDescent, kAllOffload, kAllLocal };

struct StepResult {
  std::vector<Vector> observations;  // next observation per UAV
  double reward = 0.0;
  double dor = 0.0;
  double penalty = 0.0;
  std::vector<MotionOutcome> motions;
  std::vector<bool> violating;  // per UAV: box, speed or collision
  int violating_uavs = 0;
  double min_distance = 0.0;
  AllocationResult allocation;
};

/// Slot-stepped world: applies UAV motions, solves the slot's allocation and
/// scores the shared reward (slot DOR minus one penalty per violating UAV).
class Environment {
 public:
  Environment(Scenario scenario, double penalty,
              OffloadPolicy offload = OffloadPolicy::kCoordinateDescent,
              bool extended_observation = false);

  /// Restores start positions; `stream` selects the task sequence.
  void reset(std::uint64_t stream);

  std::vector<Vector> observations() const;
  Vector joint_observation() const;
  StepResult step(std::span<const Vec3> actions);

  const Scenario& scenario() const { return current_; }
  int slot() const { return slot_; }
  bool done() const { return slot_ >= current_.config.horizon; }
  int obs_dim() const { return extended_ ? 6 : 3; }

 private:
  Scenario initial_;
  Scenario current_;
  double penalty_;
  OffloadPolicy offload_;
  bool extended_;
  std::uint64_t stream_ = 0;
  int slot_ = 0;
};

}  // namespace uavmec
