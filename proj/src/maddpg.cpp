#include "uavmec/maddpg.hpp"

#include <cmath>

#include "uavmec/error.hpp"

namespace uavmec {

void TrainConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::kConfig, std::string("invalid train config: ") + what); };
  if (!(lr_actor >= 0.0)) fail("lr_actor must be >= 0");
  if (!(lr_critic >= 0.0)) fail("lr_critic must be >= 0");
  if (!(tau > 0.0 && tau <= 1.0)) fail("tau must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) fail("gamma must lie in [0, 1)");
  if (buffer_capacity == 0) fail("buffer_capacity must be > 0");
  if (episodes < 1) fail("episodes must be >= 1");
  if (batch_size == 0) fail("batch_size must be > 0");
  if (!(noise_start >= 0.0 && noise_end >= 0.0)) fail("noise levels must be >= 0");
  if (!(noise_decay_fraction > 0.0 && noise_decay_fraction <= 1.0))
    fail("noise_decay_fraction must lie in (0, 1]");
  if (!(penalty >= 0.0)) fail("penalty must be >= 0");
  if (actor_hidden < 1 || critic_hidden < 1) fail("hidden widths must be >= 1");
}

double TrainConfig::noise_fraction(int episode) const {
  const double decay_episodes = noise_decay_fraction * episodes;
  if (episode >= decay_episodes) return noise_end;
  const double progress = episode / decay_episodes;
  return noise_start + (noise_end - noise_start) * progress;
}

InputScaling InputScaling::for_scenario(const ScenarioConfig& c, bool extended) {
  InputScaling s;
  const int dim = extended ? 6 : 3;
  s.obs_center.resize(dim);
  s.obs_half_span.resize(dim);
  for (int k = 0; k < dim; k += 3) {
    s.obs_center.segment<3>(k) << c.area_x / 2, c.area_y / 2, (c.z_min + c.z_max) / 2;
    s.obs_half_span.segment<3>(k) << c.area_x / 2, c.area_y / 2,
        std::max((c.z_max - c.z_min) / 2, 1.0);
  }
  if (extended) {
    s.obs_center(5) = 0.0;  // the user centroid lies on the ground
    s.obs_half_span(5) = 1.0;
  }
  // Each component is bounded so the unscaled action norm never exceeds v_max * dt.
  s.action_scale = c.max_step() / std::sqrt(3.0);
  return s;
}

Matrix InputScaling::scale_observations(const Matrix& obs, int num_agents) const {
  const Eigen::Index d = obs_center.size();
  if (obs.rows() != d * num_agents) throw Error(ErrorCode::kShape, "joint observation size mismatch");
  Matrix out(obs.rows(), obs.cols());
  for (int k = 0; k < num_agents; ++k) {
    out.middleRows(k * d, d) =
        ((obs.middleRows(k * d, d).colwise() - obs_center).array().colwise() / obs_half_span.array())
            .matrix();
  }
  return out;
}

Maddpg::Maddpg(int num_agents, int obs_dim, InputScaling scaling, const TrainConfig& config)
    : obs_dim_(obs_dim), scaling_(std::move(scaling)), config_(config) {
  config_.validate();
  if (scaling_.obs_center.size() != obs_dim) throw Error(ErrorCode::kShape, "scaling/observation size mismatch");
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32), 0x696e6974U};
  std::mt19937_64 rng(seq);
  const int critic_in = num_agents * (obs_dim + 3);
  for (int n = 0; n < num_agents; ++n) {
    Agent a;
    a.actor = Mlp(obs_dim, config.actor_hidden, 3, OutputActivation::kTanh, rng);
    a.critic = Mlp(critic_in, config.critic_hidden, 1, OutputActivation::kLinear, rng);
    a.target_actor = a.actor;
    a.target_critic = a.critic;
    agents_.push_back(std::move(a));
  }
}

Matrix Maddpg::agent_observation(int agent, const Matrix& joint_obs) const {
  return joint_obs.middleRows(static_cast<Eigen::Index>(agent) * obs_dim_, obs_dim_);
}

Matrix Maddpg::critic_input(const Matrix& joint_obs, const Matrix& joint_action_unit) const {
  const Matrix s = scaling_.scale_observations(joint_obs, num_agents());
  Matrix x(s.rows() + joint_action_unit.rows(), s.cols());
  x.topRows(s.rows()) = s;
  x.bottomRows(joint_action_unit.rows()) = joint_action_unit;
  return x;
}

Vec3 Maddpg::act(int agent, const Vector& observation, double noise_sigma_m,
                 std::mt19937_64& rng) const {
  const Matrix scaled = scaling_.scale_observations(observation, 1);
  const Matrix u = agents_.at(agent).actor.forward(scaled);
  Vec3 a = u.col(0) * scaling_.action_scale;
  if (noise_sigma_m > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sigma_m);
    for (int i = 0; i < 3; ++i) a(i) += noise(rng);
  }
  return a;
}

Vector Maddpg::td_target(int agent, const Batch& batch) const {
  const Eigen::Index b = batch.size();
  Matrix next_actions(3 * num_agents(), b);
  const Matrix scaled_next = scaling_.scale_observations(batch.next_observation, num_agents());
  for (int k = 0; k < num_agents(); ++k)
    next_actions.middleRows(3 * k, 3) =
        agents_[k].target_actor.forward(scaled_next.middleRows(k * obs_dim_, obs_dim_));
  Matrix x(scaled_next.rows() + next_actions.rows(), b);
  x.topRows(scaled_next.rows()) = scaled_next;
  x.bottomRows(next_actions.rows()) = next_actions;
  const Matrix q_next = agents_[agent].target_critic.forward(x);
  return batch.reward + config_.gamma * q_next.row(0).transpose();
}

double Maddpg::critic_update(int agent, const Batch& batch) {
  const Vector y = td_target(agent, batch);
  Agent& a = agents_.at(agent);
  Mlp::Tape tape;
  const Matrix q = a.critic.forward(critic_input(batch.observation, batch.action / scaling_.action_scale), tape);
  const Eigen::RowVectorXd diff = q.row(0) - y.transpose();
  const double b = static_cast<double>(batch.size());
  const double loss = diff.squaredNorm() / b;
  const Matrix upstream = (2.0 / b) * diff;
  const Mlp::Gradients g = a.critic.backward(tape, upstream);
  a.critic.apply(g, -config_.lr_critic);
  return loss;
}

Mlp::Gradients Maddpg::actor_gradient(int agent, const Batch& batch) const {
  const Agent& a = agents_.at(agent);
  const Matrix own = scaling_.scale_observations(agent_observation(agent, batch.observation), 1);
  Mlp::Tape actor_tape;
  const Matrix u = a.actor.forward(own, actor_tape);

  Matrix joint_action = batch.action / scaling_.action_scale;
  joint_action.middleRows(3 * agent, 3) = u;
  Mlp::Tape critic_tape;
  const Matrix x = critic_input(batch.observation, joint_action);
  a.critic.forward(x, critic_tape);
  const double b = static_cast<double>(batch.size());
  Matrix dq_dx;
  a.critic.backward(critic_tape, Matrix::Constant(1, batch.size(), 1.0 / b), &dq_dx);
  const Eigen::Index action_row = x.rows() - joint_action.rows() + 3 * agent;
  const Matrix dq_du = dq_dx.middleRows(action_row, 3);
  return a.actor.backward(actor_tape, dq_du);
}

double Maddpg::actor_update(int agent, const Batch& batch) {
  const Mlp::Gradients g = actor_gradient(agent, batch);
  agents_.at(agent).actor.apply(g, config_.lr_actor);
  return std::sqrt(g.squared_norm());
}

double Maddpg::actor_objective(int agent, const Batch& batch) const {
  const Agent& a = agents_.at(agent);
  const Matrix own = scaling_.scale_observations(agent_observation(agent, batch.observation), 1);
  Matrix joint_action = batch.action / scaling_.action_scale;
  joint_action.middleRows(3 * agent, 3) = a.actor.forward(own);
  return a.critic.forward(critic_input(batch.observation, joint_action)).mean();
}

void Maddpg::soft_update(int agent, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorCode::kDomain, "tau must lie in (0, 1]");
  Agent& a = agents_.at(agent);
  a.target_actor.blend_from(a.actor, tau);
  a.target_critic.blend_from(a.critic, tau);
}

}  // namespace uavmec
