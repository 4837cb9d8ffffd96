#pragma once

#include <span>
#include <vector>

#include "uavmec/channel_params.hpp"
#include "uavmec/model.hpp"

namespace uavmec {

inline constexpr int kLocal = -1;

/// One slot's offloading, bandwidth and CPU decision. `assignment[m]` is
/// kLocal or the 0-based executor UAV; `ingress[m]` is the covering UAV that
/// receives the upload (kLocal for local users). Shares are zero for local
/// users.
struct SlotDecision {
  std::vector<int> assignment;
  std::vector<int> ingress;
  std::vector<double> bandwidth_hz;
  std::vector<double> cpu_hz;

  static SlotDecision all_local(int num_users);
};

struct SlotMetrics {
  double dor = 0.0;
  std::vector<double> per_user_delay;
  std::vector<double> per_user_contribution;
};

double local_delay(const Task& task, const UserState& user);
double offload_delay(const Task& task, double g2a_rate_bps);
double exec_delay(const Task& task, double cpu_share_hz);
double edge_delay(const Task& task, double g2a_rate_bps, double cpu_share_hz);

/// Throws Error(kInvalidDecision) naming the violated constraint.
void validate_decision(const SlotDecision& decision,
                       std::span<const UserState> users,
                       std::span<const UavState> uavs,
                       const ChannelParams& params);

/// Per-slot delay optimization ratio: sum over users of 1 - T_achieved/T_local.
/// Local users contribute 0; offloaded users may contribute a negative value.
SlotMetrics slot_dor(const SlotDecision& decision, std::span<const Task> tasks,
                     std::span<const UserState> users,
                     std::span<const UavState> uavs,
                     const ChannelParams& params);

}  // namespace uavmec
