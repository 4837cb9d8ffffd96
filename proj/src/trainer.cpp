#include "uavmec/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "uavmec/baselines.hpp"
#include "uavmec/error.hpp"

namespace uavmec {
namespace {

std::mt19937_64 seeded(std::uint64_t seed, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag};
  return std::mt19937_64(seq);
}

Transition make_transition(const Vector& obs, std::span<const Vec3> actions, double reward,
                           const Vector& next_obs) {
  Transition t;
  t.observation = obs;
  t.action.resize(3 * static_cast<Eigen::Index>(actions.size()));
  for (std::size_t n = 0; n < actions.size(); ++n) t.action.segment<3>(3 * n) = actions[n];
  t.reward = reward;
  t.next_observation = next_obs;
  return t;
}

[[noreturn]] void numeric_failure(int episode, int slot, const std::string& what) {
  std::ostringstream os;
  os << "training diverged at episode " << episode << ", slot " << slot << ": " << what;
  throw Error(ErrorCode::kNumeric, os.str());
}

}  // namespace

double TrainingHistory::final_mean_reward(int count) const {
  if (episodes.empty()) return 0.0;
  const std::size_t n = std::min<std::size_t>(episodes.size(), std::max(count, 1));
  double sum = 0.0;
  for (std::size_t i = episodes.size() - n; i < episodes.size(); ++i)
    sum += episodes[i].cumulative_reward;
  return sum / static_cast<double>(n);
}

TrainResult train(const Scenario& scenario, const TrainConfig& config) {
  config.validate();
  Environment env(scenario, config.penalty, OffloadPolicy::kCoordinateDescent,
                  config.extended_observation);
  const int n_agents = scenario.config.num_uavs;
  Maddpg learner(n_agents, env.obs_dim(),
                 InputScaling::for_scenario(scenario.config, config.extended_observation), config);
  ReplayBuffer buffer(config.buffer_capacity);
  std::mt19937_64 noise_rng = seeded(config.seed, 0x6e6f6973U);
  std::mt19937_64 sample_rng = seeded(config.seed, 0x73616d70U);

  TrainingHistory history;
  std::vector<Vec3> actions(n_agents);
  for (int episode = 0; episode < config.episodes; ++episode) {
    env.reset(training_stream(episode));
    const double sigma = config.noise_fraction(episode) * scenario.config.max_step();
    EpisodeRecord rec;
    rec.episode = episode;
    double dor_sum = 0.0;
    while (!env.done()) {
      const int slot = env.slot();
      const auto obs = env.observations();
      const Vector joint = env.joint_observation();
      for (int n = 0; n < n_agents; ++n) actions[n] = learner.act(n, obs[n], sigma, noise_rng);
      const StepResult step = env.step(actions);
      buffer.push(make_transition(joint, actions, step.reward, env.joint_observation()));

      rec.cumulative_reward += step.reward;
      rec.violations += step.violating_uavs;
      dor_sum += step.dor;
      history.slot_dor.push_back(step.dor);

      for (int n = 0; n < n_agents; ++n) {
        const auto batch = buffer.sample(config.batch_size, config.min_fill, sample_rng);
        if (!batch) break;
        const double loss = learner.critic_update(n, *batch);
        if (!std::isfinite(loss)) numeric_failure(episode, slot, "critic loss is not finite");
        const double grad = learner.actor_update(n, *batch);
        if (!std::isfinite(grad)) numeric_failure(episode, slot, "actor gradient is not finite");
        learner.soft_update(n, config.tau);
      }
    }
    for (int n = 0; n < n_agents; ++n) {
      const Agent& a = learner.agents()[n];
      if (!a.actor.all_finite() || !a.critic.all_finite())
        numeric_failure(episode, env.slot(), "network weights of agent " + std::to_string(n) +
                                                 " are not finite");
    }
    rec.mean_dor = dor_sum / scenario.config.horizon;
    history.episodes.push_back(rec);
  }
  std::ostringstream noise_state, sample_state;
  noise_state << noise_rng;
  sample_state << sample_rng;
  return TrainResult{std::move(learner), std::move(history), buffer.size(), buffer.cursor(),
                     noise_state.str(), sample_state.str()};
}

TrainingHistory random_trajectory_history(const Scenario& scenario, const TrainConfig& config) {
  config.validate();
  Environment env(scenario, config.penalty);
  std::mt19937_64 rng = seeded(config.seed, 0x72616e64U);
  TrainingHistory history;
  for (int episode = 0; episode < config.episodes; ++episode) {
    env.reset(training_stream(episode));
    EpisodeRecord rec;
    rec.episode = episode;
    double dor_sum = 0.0;
    while (!env.done()) {
      const auto actions = rt_policy(rng, scenario.config);
      const StepResult step = env.step(actions);
      rec.cumulative_reward += step.reward;
      rec.violations += step.violating_uavs;
      dor_sum += step.dor;
      history.slot_dor.push_back(step.dor);
    }
    rec.mean_dor = dor_sum / scenario.config.horizon;
    history.episodes.push_back(rec);
  }
  return history;
}

Rollout rollout(const Scenario& scenario, const RolloutOptions& options) {
  if (options.trajectory == TrajectorySource::kLearned && options.learner == nullptr)
    throw Error(ErrorCode::kConfig, "learned trajectory requested without a trained policy");
  Environment env(scenario, options.penalty, options.offload, options.extended_observation);
  env.reset(options.stream);
  std::mt19937_64 rng = seeded(options.rng_seed, 0x726f6c6cU);

  Rollout out;
  const int n_agents = scenario.config.num_uavs;
  std::vector<Vec3> actions(n_agents, Vec3::Zero());
  auto snapshot = [&] {
    std::vector<Vec3> pos;
    for (const UavState& u : env.scenario().uavs) pos.push_back(u.position);
    return pos;
  };
  out.positions.push_back(snapshot());
  while (!env.done()) {
    switch (options.trajectory) {
      case TrajectorySource::kLearned: {
        const auto obs = env.observations();
        for (int n = 0; n < n_agents; ++n)
          actions[n] = options.learner->act(n, obs[n], options.noise_sigma_m, rng);
        break;
      }
      case TrajectorySource::kRandom:
        actions = rt_policy(rng, scenario.config);
        break;
      case TrajectorySource::kHover:
        std::fill(actions.begin(), actions.end(), Vec3::Zero());
        break;
    }
    SlotRecord rec;
    rec.slot = env.slot();
    const StepResult step = env.step(actions);
    rec.dor = step.dor;
    rec.reward = step.reward;
    rec.penalty = step.violating_uavs > 0 ? step.penalty : 0.0;
    rec.violating_uavs = step.violating_uavs;
    rec.cd_iterations = step.allocation.iterations;
    rec.assignment = step.allocation.decision.assignment;
    rec.user_delay = step.allocation.metrics.per_user_delay;
    rec.user_contribution = step.allocation.metrics.per_user_contribution;
    out.overall_dor += rec.dor;
    out.cumulative_reward += rec.reward;
    out.slots.push_back(std::move(rec));
    out.positions.push_back(snapshot());
  }
  return out;
}

}  // namespace uavmec
