#include "uavmec/environment.hpp"

#include "uavmec/baselines.hpp"
#include "uavmec/error.hpp"

namespace uavmec {

Environment::Environment(Scenario scenario, double penalty, OffloadPolicy offload,
                         bool extended_observation)
    : initial_(std::move(scenario)),
      current_(initial_),
      penalty_(penalty),
      offload_(offload),
      extended_(extended_observation) {}

void Environment::reset(std::uint64_t stream) {
  current_ = initial_;
  stream_ = stream;
  slot_ = 0;
}

std::vector<Vector> Environment::observations() const {
  Vec3 centroid = Vec3::Zero();
  for (const UserState& u : current_.users) centroid += u.position;
  centroid /= static_cast<double>(std::max<std::size_t>(current_.users.size(), 1));

  std::vector<Vector> obs;
  obs.reserve(current_.uavs.size());
  for (const UavState& uav : current_.uavs) {
    Vector o(obs_dim());
    o.head<3>() = uav.position;
    if (extended_) o.tail<3>() = centroid;
    obs.push_back(std::move(o));
  }
  return obs;
}

Vector Environment::joint_observation() const {
  const auto obs = observations();
  Vector joint(obs_dim() * static_cast<Eigen::Index>(obs.size()));
  for (std::size_t n = 0; n < obs.size(); ++n) joint.segment(n * obs_dim(), obs_dim()) = obs[n];
  return joint;
}

StepResult Environment::step(std::span<const Vec3> actions) {
  if (done()) throw Error(ErrorCode::kDomain, "environment stepped past the horizon");
  if (actions.size() != current_.uavs.size())
    throw Error(ErrorCode::kShape, "one action per UAV required");

  StepResult r;
  const std::size_t n_count = current_.uavs.size();
  r.violating.assign(n_count, false);
  for (std::size_t n = 0; n < n_count; ++n) {
    MotionOutcome mo = apply_motion(current_.uavs[n], actions[n], current_.config);
    current_.uavs[n].position = mo.new_position;
    r.violating[n] = mo.box_violation || mo.speed_violation;
    r.motions.push_back(mo);
  }
  for (std::size_t i = 0; i < n_count; ++i)
    for (std::size_t j = i + 1; j < n_count; ++j)
      if ((current_.uavs[i].position - current_.uavs[j].position).norm() < current_.config.d_min)
        r.violating[i] = r.violating[j] = true;
  r.min_distance = min_pairwise_distance(current_.uavs);
  advance_users(current_, slot_, stream_);

  SlotContext ctx = make_slot_context(current_.users, current_.uavs,
                                      generate_tasks(current_, slot_, stream_), current_.channel);
  switch (offload_) {
    case OffloadPolicy::kCoordinateDescent:
      r.allocation = cd_search(ctx);
      break;
    case OffloadPolicy::kAllOffload:
    case OffloadPolicy::kAllLocal: {
      Evaluation ev = offload_ == OffloadPolicy::kAllOffload ? ao_policy(ctx) : al_policy(ctx);
      r.allocation.decision = std::move(ev.decision);
      r.allocation.metrics = std::move(ev.metrics);
      r.allocation.dor = ev.dor;
      r.allocation.iterations = 1;
      r.allocation.converged = true;
      break;
    }
  }

  r.dor = r.allocation.dor;
  for (bool v : r.violating) r.violating_uavs += v ? 1 : 0;
  r.penalty = penalty_ * r.violating_uavs;
  r.reward = r.violating_uavs == 0 ? r.dor : r.dor - r.penalty;
  ++slot_;
  r.observations = observations();
  return r;
}

}  // namespace uavmec
