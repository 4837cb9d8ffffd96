#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "uavmec/environment.hpp"
#include "uavmec/maddpg.hpp"

namespace uavmec {

struct EpisodeRecord {
  int episode = 0;
  double cumulative_reward = 0.0;
  double mean_dor = 0.0;
  int violations = 0;  // sum over slots of violating UAVs
};

struct TrainingHistory {
  std::vector<EpisodeRecord> episodes;
  std::vector<double> slot_dor;  // every slot of every episode, in order

  /// Mean cumulative reward over the last `count` episodes.
  double final_mean_reward(int count) const;
};

struct TrainResult {
  Maddpg learner;
  TrainingHistory history;
  std::size_t buffer_size = 0;
  std::size_t buffer_cursor = 0;
  // Text form of the exploration and batch-sampling generators at the end.
  std::string noise_rng_state;
  std::string sample_rng_state;
};

/// Task stream used by training episode `e`; evaluation rollouts use stream 0.
inline std::uint64_t training_stream(int episode) { return static_cast<std::uint64_t>(episode) + 1; }

/// Runs the full actor-critic loop: act, step, store, then per-agent critic,
/// actor and target updates once the buffer holds `min_fill` transitions.
/// Throws Error(kNumeric) with a diagnostic if any loss or weight turns
/// non-finite.
TrainResult train(const Scenario& scenario, const TrainConfig& config);

/// Random-trajectory reward history over `episodes` episodes on the same task
/// streams as training, so rewards are comparable episode by episode.
TrainingHistory random_trajectory_history(const Scenario& scenario, const TrainConfig& config);

enum class TrajectorySource { kLearned, kRandom, kHover };

struct SlotRecord {
  int slot = 0;
  double dor = 0.0;
  double reward = 0.0;
  double penalty = 0.0;
  int violating_uavs = 0;
  int cd_iterations = 0;
  std::vector<int> assignment;
  std::vector<double> user_delay;
  std::vector<double> user_contribution;
};

struct Rollout {
  std::vector<SlotRecord> slots;
  // positions[t][n]: UAV n before slot t's move (t = 0) and after each move.
  std::vector<std::vector<Vec3>> positions;
  double overall_dor = 0.0;
  double cumulative_reward = 0.0;
};

struct RolloutOptions {
  TrajectorySource trajectory = TrajectorySource::kHover;
  OffloadPolicy offload = OffloadPolicy::kCoordinateDescent;
  const Maddpg* learner = nullptr;  // required for kLearned
  double noise_sigma_m = 0.0;
  std::uint64_t rng_seed = 0;       // random trajectories and exploration noise
  std::uint64_t stream = 0;
  double penalty = 10.0;
  bool extended_observation = false;
};

/// One episode of `scenario.config.horizon` slots.
Rollout rollout(const Scenario& scenario, const RolloutOptions& options);

}  // namespace uavmec
