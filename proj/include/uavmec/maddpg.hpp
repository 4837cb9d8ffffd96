#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "uavmec/mlp.hpp"
#include "uavmec/model.hpp"
#include "uavmec/replay.hpp"

namespace uavmec {

struct TrainConfig {
  double lr_actor = 1e-4;
  double lr_critic = 1e-3;
  double tau = 0.01;
  double gamma = 0.95;
  std::size_t buffer_capacity = 500000;
  int episodes = 250;
  std::size_t batch_size = 128;
  std::size_t min_fill = 1000;
  // Exploration std-dev as a fraction of v_max * slot_seconds, decayed
  // linearly over the first `noise_decay_fraction` of the episodes.
  double noise_start = 0.5;
  double noise_end = 0.05;
  double noise_decay_fraction = 0.6;
  double penalty = 10.0;
  int actor_hidden = 64;
  int critic_hidden = 64;
  // Appends the user centroid to each UAV's own position.
  bool extended_observation = false;
  std::uint64_t seed = 1;

  void validate() const;
  double noise_fraction(int episode) const;
};

/// Maps physical observations and actions to network inputs of order one.
struct InputScaling {
  Vector obs_center;     // per observation component
  Vector obs_half_span;
  double action_scale = 1.0;  // metres per unit actor output, per component

  static InputScaling for_scenario(const ScenarioConfig& config, bool extended_observation);
  Matrix scale_observations(const Matrix& obs, int num_agents) const;
};

struct Agent {
  Mlp actor;
  Mlp critic;
  Mlp target_actor;
  Mlp target_critic;
};

/// Decentralized actors with one centralized critic per agent over the joint
/// observation and joint action.
class Maddpg {
 public:
  Maddpg(int num_agents, int obs_dim, InputScaling scaling, const TrainConfig& config);

  int num_agents() const { return static_cast<int>(agents_.size()); }
  int obs_dim() const { return obs_dim_; }
  const InputScaling& scaling() const { return scaling_; }
  const TrainConfig& config() const { return config_; }
  std::vector<Agent>& agents() { return agents_; }
  const std::vector<Agent>& agents() const { return agents_; }

  /// Displacement in metres: action_scale * actor output + N(0, sigma^2) noise.
  Vec3 act(int agent, const Vector& observation, double noise_sigma_m, std::mt19937_64& rng) const;

  /// y = r + gamma * Q'_n(S', A') with A' from the target actors.
  Vector td_target(int agent, const Batch& batch) const;

  /// One gradient step on the mean-squared TD error; returns the pre-step loss.
  double critic_update(int agent, const Batch& batch);

  /// One ascent step on mean Q(S, A | a_n = pi_n(o_n)); returns the gradient norm.
  double actor_update(int agent, const Batch& batch);

  void soft_update(int agent, double tau);

  /// mean over the batch of Q_n(S, A) with agent n's action from its actor.
  double actor_objective(int agent, const Batch& batch) const;
  /// Unit-scaled critic input [scaled S; A / action_scale].
  Matrix critic_input(const Matrix& joint_obs, const Matrix& joint_action_unit) const;
  Matrix agent_observation(int agent, const Matrix& joint_obs) const;

  /// Gradient of the actor objective w.r.t. the actor parameters (no step).
  Mlp::Gradients actor_gradient(int agent, const Batch& batch) const;

 private:
  int obs_dim_;
  InputScaling scaling_;
  TrainConfig config_;
  std::vector<Agent> agents_;
};

}  // namespace uavmec
