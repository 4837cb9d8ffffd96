#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "uavmec/channel_params.hpp"

namespace uavmec {

using Vec3 = Eigen::Vector3d;

struct Range {
  double low = 0.0;
  double high = 0.0;
};

enum class UserMobility { kStatic, kRandomWaypoint };

/// Immutable world parameters. Defaults reproduce the simulation table of the
/// reference setup (4 UAVs, 50 m x 50 m area, 10-20 m altitude band).
struct ScenarioConfig {
  double area_x = 50.0;
  double area_y = 50.0;
  double z_min = 10.0;
  double z_max = 20.0;
  double d_min = 3.0;
  double v_max = 1.73;
  double slot_seconds = 1.0;
  int num_users = 10;
  int num_uavs = 4;
  int horizon = 500;
  Range task_bits{100e3, 150e3};
  Range task_cycles_per_bit{500.0, 1000.0};
  Range user_freq{0.8e9, 1.0e9};
  Range user_power{1.0, 1.2};
  double uav_freq = 10e9;
  double uav_power = 5.0;
  double coverage_half_angle_deg = 90.0;
  std::uint64_t rng_seed = 1;
  UserMobility user_mobility = UserMobility::kStatic;
  double user_speed = 1.0;  // m/s, random-waypoint mode only
  // Explicit UAV start positions; empty selects the default layout.
  std::vector<Vec3> uav_starts;

  /// Throws Error(kConfig) naming the first violated bound.
  void validate() const;
  double max_step() const { return v_max * slot_seconds; }
};

struct UserState {
  Vec3 position = Vec3::Zero();
  double cpu_freq = 0.0;
  double tx_power = 0.0;
};

struct UavState {
  Vec3 position = Vec3::Zero();
  double cpu_freq = 0.0;
  double tx_power = 0.0;
  double half_angle_deg = 90.0;
};

struct Task {
  double bits = 0.0;
  double cycles_per_bit = 0.0;
};

struct MotionOutcome {
  Vec3 new_position = Vec3::Zero();
  bool box_violation = false;
  bool speed_violation = false;
};

struct Scenario {
  ScenarioConfig config;
  ChannelParams channel;
  std::vector<UserState> users;
  std::vector<UavState> uavs;
  // Random-waypoint targets, one per user (unused when users are static).
  std::vector<Vec3> user_waypoints;
};

/// Default UAV start layout: the four area corners at z_min, then edge
/// midpoints and the centre. Supports up to nine UAVs.
std::vector<Vec3> default_uav_starts(const ScenarioConfig& config);

Scenario build_scenario(const ScenarioConfig& config,
                        const ChannelParams& channel = {});

MotionOutcome apply_motion(const UavState& uav, const Vec3& delta,
                           const ScenarioConfig& config);

/// Horizontal coverage radius z * tan(phi); +inf at phi = 90 degrees.
double coverage_radius(const UavState& uav);

double horizontal_distance(const Vec3& a, const Vec3& b);

bool is_covered(const UserState& user, const UavState& uav);

/// Minimum 3D distance over unordered UAV pairs; +inf with fewer than two.
double min_pairwise_distance(std::span<const UavState> uavs);

/// Per-user tasks for one slot. Deterministic in (rng_seed, stream, slot);
/// `stream` separates episodes so every policy sees the same workload.
std::vector<Task> generate_tasks(const Scenario& scenario, int slot,
                                 std::uint64_t stream = 0);

/// Moves users one slot along their random waypoints. No-op for static users.
void advance_users(Scenario& scenario, int slot, std::uint64_t stream = 0);

}  // namespace uavmec
