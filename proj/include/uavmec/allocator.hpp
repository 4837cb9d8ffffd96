#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavmec/channel_params.hpp"
#include "uavmec/delay.hpp"
#include "uavmec/model.hpp"

namespace uavmec {

/// Everything the per-slot optimizer needs, plus link quantities derived once
/// from the geometry. Build with make_slot_context.
struct SlotContext {
  std::vector<UserState> users;
  std::vector<UavState> uavs;
  std::vector<Task> tasks;
  ChannelParams channel;

  // ingress[m]: covering UAV with the highest spectral efficiency, or kLocal.
  std::vector<int> ingress;
  // spectral_efficiency[m]: log2(1 + SNR) at the ingress UAV (0 if uncovered).
  std::vector<double> spectral_efficiency;

  int num_users() const { return static_cast<int>(users.size()); }
  int num_uavs() const { return static_cast<int>(uavs.size()); }
};

SlotContext make_slot_context(std::vector<UserState> users,
                              std::vector<UavState> uavs,
                              std::vector<Task> tasks,
                              const ChannelParams& channel);

struct BandwidthUser {
  double cpu_freq;             // f_m, Hz
  double cycles_per_bit;       // c_m
  double spectral_efficiency;  // log2(1 + SNR_m)
};

/// Closed-form bandwidth split: share_m proportional to sqrt(f/(c*r0)).
std::vector<double> kkt_bandwidth_shares(std::span<const BandwidthUser> users,
                                         double total_bw_hz);

/// Closed-form CPU split: share_m proportional to sqrt(f_m).
std::vector<double> kkt_cpu_shares(std::span<const double> user_freqs,
                                   double uav_freq_hz);

struct Evaluation {
  SlotDecision decision;
  SlotMetrics metrics;
  double dor = 0.0;
};

/// Applies both closed forms per ingress/executor group and scores the slot.
/// Throws Error(kInfeasible) if an offloaded user has no covering UAV.
Evaluation evaluate_assignment(std::span<const int> assignment,
                               const SlotContext& ctx);

struct AllocationResult {
  SlotDecision decision;
  SlotMetrics metrics;
  double dor = 0.0;
  int iterations = 0;  // full user sweeps, including the final no-change one
  bool converged = false;
  // DOR after every accepted single-user move (CD only).
  std::vector<double> accepted_dor;
};

struct CdOptions {
  int max_sweeps = 100;
  bool shuffle_order = false;
  std::uint64_t shuffle_seed = 0;
};

/// Coordinate descent over one-hot offloading choices, starting all-local.
AllocationResult cd_search(const SlotContext& ctx, const CdOptions& options = {});

/// Exhaustive search; refuses when (N+1)^M exceeds `cap`.
AllocationResult brute_force_oracle(const SlotContext& ctx,
                                    double cap = 1048576.0);

struct ConvexOracleResult {
  std::vector<double> bandwidth_hz;  // per user, 0 for local users
  std::vector<double> cpu_hz;
  double objective = 0.0;            // sum over offloaded users of T_edge/T_loc
  int iterations = 0;                // total projected-gradient iterations
};

struct ConvexOracleOptions {
  double tolerance = 1e-8;
  int max_iterations = 100000;
};

/// Solves the fixed-assignment allocation problem by projected gradient on
/// each group's capacity simplex. Independent of the closed forms.
ConvexOracleResult numeric_convex_oracle(std::span<const int> assignment,
                                         const SlotContext& ctx,
                                         const ConvexOracleOptions& options = {});

/// sum over offloaded users of (T_off + T_exe)/T_loc for the given shares.
double allocation_objective(std::span<const int> assignment,
                            const SlotContext& ctx,
                            std::span<const double> bandwidth_hz,
                            std::span<const double> cpu_hz);

/// Euclidean projection onto {x >= 0, sum x = total}.
std::vector<double> project_to_simplex(std::span<const double> v, double total);

}  // namespace uavmec
