#include "uavmec/delay.hpp"

#include <limits>
#include <string>

#include "uavmec/channel.hpp"
#include "uavmec/error.hpp"

namespace uavmec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCapacitySlack = 1e-12;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidDecision, "invalid slot decision: " + what);
}

void check_task(const Task& task) {
  if (!(task.bits > 0.0) || !(task.cycles_per_bit > 0.0))
    throw Error(ErrorCode::kDomain, "task bits and cycles_per_bit must be > 0");
}

}  // namespace

SlotDecision SlotDecision::all_local(int num_users) {
  SlotDecision d;
  d.assignment.assign(num_users, kLocal);
  d.ingress.assign(num_users, kLocal);
  d.bandwidth_hz.assign(num_users, 0.0);
  d.cpu_hz.assign(num_users, 0.0);
  return d;
}

double local_delay(const Task& task, const UserState& user) {
  check_task(task);
  if (!(user.cpu_freq > 0.0)) throw Error(ErrorCode::kDomain, "user cpu_freq must be > 0");
  return task.bits * task.cycles_per_bit / user.cpu_freq;
}

double offload_delay(const Task& task, double g2a_rate_bps) {
  if (!(g2a_rate_bps > 0.0)) return kInf;
  return task.bits / g2a_rate_bps;
}

double exec_delay(const Task& task, double cpu_share_hz) {
  if (!(cpu_share_hz > 0.0)) return kInf;
  return task.bits * task.cycles_per_bit / cpu_share_hz;
}

double edge_delay(const Task& task, double g2a_rate_bps, double cpu_share_hz) {
  return offload_delay(task, g2a_rate_bps) + exec_delay(task, cpu_share_hz);
}

void validate_decision(const SlotDecision& d, std::span<const UserState> users,
                       std::span<const UavState> uavs, const ChannelParams& params) {
  const std::size_t m_count = users.size();
  const int n_count = static_cast<int>(uavs.size());
  if (d.assignment.size() != m_count || d.ingress.size() != m_count ||
      d.bandwidth_hz.size() != m_count || d.cpu_hz.size() != m_count)
    invalid("one choice per user (sizes differ from the user count)");

  std::vector<double> bw_used(n_count, 0.0), cpu_used(n_count, 0.0);
  for (std::size_t m = 0; m < m_count; ++m) {
    const int exec = d.assignment[m];
    const int in = d.ingress[m];
    const std::string who = "user " + std::to_string(m) + ": ";
    if (!(d.bandwidth_hz[m] >= 0.0) || !(d.cpu_hz[m] >= 0.0))
      invalid(who + "non-negative bandwidth and cpu shares");
    if (exec == kLocal) {
      if (in != kLocal || d.bandwidth_hz[m] != 0.0 || d.cpu_hz[m] != 0.0)
        invalid(who + "local user holds edge resources");
      continue;
    }
    if (exec < 0 || exec >= n_count) invalid(who + "executor index out of range");
    if (in < 0 || in >= n_count) invalid(who + "ingress index out of range");
    if (!is_covered(users[m], uavs[in])) invalid(who + "coverage (ingress UAV does not cover user)");
    bw_used[in] += d.bandwidth_hz[m];
    cpu_used[exec] += d.cpu_hz[m];
  }
  for (int n = 0; n < n_count; ++n) {
    if (bw_used[n] > params.bw_g2a_hz * (1.0 + kCapacitySlack))
      invalid("bandwidth capacity of UAV " + std::to_string(n));
    if (cpu_used[n] > uavs[n].cpu_freq * (1.0 + kCapacitySlack))
      invalid("cpu capacity of UAV " + std::to_string(n));
  }
}

SlotMetrics slot_dor(const SlotDecision& d, std::span<const Task> tasks,
                     std::span<const UserState> users, std::span<const UavState> uavs,
                     const ChannelParams& params) {
  if (tasks.size() != users.size()) invalid("one task per user");
  validate_decision(d, users, uavs, params);

  SlotMetrics out;
  out.per_user_delay.resize(users.size());
  out.per_user_contribution.resize(users.size());
  for (std::size_t m = 0; m < users.size(); ++m) {
    const double t_loc = local_delay(tasks[m], users[m]);
    double achieved = t_loc;
    if (d.assignment[m] != kLocal) {
      const double rate = g2a_rate_bps(users[m], uavs[d.ingress[m]], d.bandwidth_hz[m], params);
      achieved = edge_delay(tasks[m], rate, d.cpu_hz[m]);
    }
    out.per_user_delay[m] = achieved;
    out.per_user_contribution[m] = (d.assignment[m] == kLocal) ? 0.0 : 1.0 - achieved / t_loc;
    out.dor += out.per_user_contribution[m];
  }
  return out;
}

}  // namespace uavmec
