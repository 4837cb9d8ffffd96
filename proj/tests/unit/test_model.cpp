#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "uavmec/error.hpp"
#include "uavmec/model.hpp"

using namespace uavmec;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

UavState uav_at(double x, double y, double z, double phi = 90.0) {
  UavState u;
  u.position = {x, y, z};
  u.cpu_freq = 10e9;
  u.tx_power = 5.0;
  u.half_angle_deg = phi;
  return u;
}

}  // namespace

TEST(Scenario, SameSeedGivesIdenticalWorld) {
  ScenarioConfig c;
  c.rng_seed = 7;
  const Scenario a = build_scenario(c), b = build_scenario(c);
  ASSERT_EQ(a.users.size(), b.users.size());
  for (std::size_t m = 0; m < a.users.size(); ++m) {
    EXPECT_EQ(a.users[m].position, b.users[m].position);
    EXPECT_EQ(a.users[m].cpu_freq, b.users[m].cpu_freq);
    EXPECT_EQ(a.users[m].tx_power, b.users[m].tx_power);
  }
  c.rng_seed = 8;
  EXPECT_NE(build_scenario(c).users[0].position, a.users[0].position);
}

TEST(Scenario, UsersInsideAreaOnGround) {
  ScenarioConfig c;
  c.num_users = 4;
  const Scenario s = build_scenario(c);
  ASSERT_EQ(s.users.size(), 4u);
  for (const UserState& u : s.users) {
    EXPECT_GE(u.position.x(), 0.0);
    EXPECT_LE(u.position.x(), 50.0);
    EXPECT_GE(u.position.y(), 0.0);
    EXPECT_LE(u.position.y(), 50.0);
    EXPECT_EQ(u.position.z(), 0.0);
    EXPECT_GE(u.cpu_freq, 0.8e9);
    EXPECT_LE(u.cpu_freq, 1.0e9);
    EXPECT_GE(u.tx_power, 1.0);
    EXPECT_LE(u.tx_power, 1.2);
  }
}

TEST(Scenario, FourUavsStartAtCorners) {
  const Scenario s = build_scenario(ScenarioConfig{});
  ASSERT_EQ(s.uavs.size(), 4u);
  EXPECT_EQ(s.uavs[0].position, Vec3(0, 0, 10));
  EXPECT_EQ(s.uavs[1].position, Vec3(0, 50, 10));
  EXPECT_EQ(s.uavs[2].position, Vec3(50, 0, 10));
  EXPECT_EQ(s.uavs[3].position, Vec3(50, 50, 10));
  for (const UavState& u : s.uavs) {
    EXPECT_EQ(u.cpu_freq, 10e9);
    EXPECT_EQ(u.tx_power, 5.0);
    EXPECT_EQ(u.half_angle_deg, 90.0);
  }
}

TEST(Scenario, DefaultsMatchReferenceTable) {
  const ScenarioConfig c;
  EXPECT_EQ(c.area_x, 50.0);
  EXPECT_EQ(c.area_y, 50.0);
  EXPECT_EQ(c.z_min, 10.0);
  EXPECT_EQ(c.z_max, 20.0);
  EXPECT_EQ(c.d_min, 3.0);
  EXPECT_EQ(c.v_max, 1.73);
  EXPECT_EQ(c.num_uavs, 4);
  EXPECT_EQ(c.horizon, 500);
  EXPECT_EQ(c.task_bits.low, 100e3);
  EXPECT_EQ(c.task_bits.high, 150e3);
  EXPECT_EQ(c.task_cycles_per_bit.low, 500.0);
  EXPECT_EQ(c.task_cycles_per_bit.high, 1000.0);
  EXPECT_EQ(c.uav_freq, 10e9);
  EXPECT_EQ(c.uav_power, 5.0);
  EXPECT_EQ(c.coverage_half_angle_deg, 90.0);
}

TEST(Scenario, InvalidConfigNamesTheBound) {
  ScenarioConfig c;
  c.z_min = 30.0;
  try {
    build_scenario(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("z_min"), std::string::npos);
  }
  c = {};
  c.task_bits = {200e3, 100e3};
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kConfig);
  c = {};
  c.d_min = 0.0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kConfig);
  c = {};
  c.uav_starts = {{0, 0, 10}};
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::kConfig);
}

TEST(Motion, ZeroDeltaIsIdentity) {
  const ScenarioConfig c;
  const UavState u = uav_at(10, 10, 15);
  const MotionOutcome m = apply_motion(u, Vec3::Zero(), c);
  EXPECT_EQ(m.new_position, u.position);
  EXPECT_FALSE(m.box_violation);
  EXPECT_FALSE(m.speed_violation);
}

TEST(Motion, OverlongStepIsRescaled) {
  const ScenarioConfig c;
  const UavState u = uav_at(25, 25, 15);
  const Vec3 delta = Vec3(1, 2, -0.5).normalized() * 2.0 * c.max_step();
  const MotionOutcome m = apply_motion(u, delta, c);
  EXPECT_NEAR((m.new_position - u.position).norm(), c.max_step(), 1e-12);
  EXPECT_TRUE(m.speed_violation);
  EXPECT_FALSE(m.box_violation);
}

TEST(Motion, BoundaryIsClamped) {
  const ScenarioConfig c;
  const MotionOutcome m = apply_motion(uav_at(0, 0, 10), Vec3(-1, 0, 0), c);
  EXPECT_EQ(m.new_position, Vec3(0, 0, 10));
  EXPECT_TRUE(m.box_violation);
  EXPECT_FALSE(m.speed_violation);
}

TEST(Motion, RandomStepsStayFeasible) {
  const ScenarioConfig c;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 3.0);
  UavState u = uav_at(25, 25, 15);
  for (int i = 0; i < 5000; ++i) {
    const MotionOutcome m = apply_motion(u, Vec3(g(rng), g(rng), g(rng)), c);
    const Vec3& p = m.new_position;
    ASSERT_GE(p.x(), 0.0);
    ASSERT_LE(p.x(), c.area_x);
    ASSERT_GE(p.y(), 0.0);
    ASSERT_LE(p.y(), c.area_y);
    ASSERT_GE(p.z(), c.z_min);
    ASSERT_LE(p.z(), c.z_max);
    ASSERT_LE((p - u.position).norm(), c.max_step() + 1e-9);
    u.position = p;
  }
}

TEST(Coverage, RadiusExamples) {
  EXPECT_NEAR(coverage_radius(uav_at(0, 0, 10, 45)), 10.0, 1e-12);
  EXPECT_NEAR(coverage_radius(uav_at(0, 0, 20, 45)), 20.0, 1e-12);
  EXPECT_TRUE(std::isinf(coverage_radius(uav_at(0, 0, 10, 90))));
  EXPECT_EQ(coverage_radius(uav_at(0, 0, 10, 0)), 0.0);
}

TEST(Coverage, RadiusMonotoneInHeightAndAngle) {
  double prev = -1.0;
  for (double phi = 0.0; phi < 90.0; phi += 0.5) {
    const double r = coverage_radius(uav_at(0, 0, 12, phi));
    EXPECT_GE(r, prev);
    prev = r;
  }
  prev = -1.0;
  for (double z = 10.0; z <= 20.0; z += 0.25) {
    const double r = coverage_radius(uav_at(0, 0, z, 30));
    EXPECT_GE(r, prev);
    prev = r;
  }
}

TEST(Coverage, IsCovered) {
  UserState below;
  below.position = {5, 5, 0};
  EXPECT_TRUE(is_covered(below, uav_at(5, 5, 10, 0)));
  UserState far;
  far.position = {11, 0, 0};
  EXPECT_FALSE(is_covered(far, uav_at(0, 0, 10, 45)));
  UserState corner;
  corner.position = {50, 50, 0};
  EXPECT_TRUE(is_covered(corner, uav_at(0, 0, 10, 90)));
}

TEST(Collision, MinPairwiseDistance) {
  std::vector<UavState> same = {uav_at(1, 1, 10), uav_at(1, 1, 10)};
  EXPECT_EQ(min_pairwise_distance(same), 0.0);
  std::vector<UavState> three = {uav_at(0, 0, 10), uav_at(3, 0, 10), uav_at(100, 0, 10)};
  EXPECT_DOUBLE_EQ(min_pairwise_distance(three), 3.0);
  std::vector<UavState> one = {uav_at(0, 0, 10)};
  EXPECT_EQ(min_pairwise_distance(one), std::numeric_limits<double>::infinity());
}

TEST(Tasks, DrawsWithinRanges) {
  const Scenario s = build_scenario(ScenarioConfig{});
  for (int t = 0; t < 50; ++t) {
    const auto tasks = generate_tasks(s, t);
    ASSERT_EQ(tasks.size(), s.users.size());
    for (const Task& k : tasks) {
      EXPECT_GE(k.bits, 100e3);
      EXPECT_LE(k.bits, 150e3);
      EXPECT_GE(k.cycles_per_bit, 500.0);
      EXPECT_LE(k.cycles_per_bit, 1000.0);
    }
  }
}

TEST(Tasks, DeterministicPerSeedSlotAndStream) {
  const Scenario s = build_scenario(ScenarioConfig{});
  const auto a = generate_tasks(s, 3, 5), b = generate_tasks(s, 3, 5);
  for (std::size_t m = 0; m < a.size(); ++m) {
    EXPECT_EQ(a[m].bits, b[m].bits);
    EXPECT_EQ(a[m].cycles_per_bit, b[m].cycles_per_bit);
  }
  EXPECT_NE(generate_tasks(s, 4, 5)[0].bits, a[0].bits);
  EXPECT_NE(generate_tasks(s, 3, 6)[0].bits, a[0].bits);
}

TEST(Tasks, DegenerateRange) {
  ScenarioConfig c;
  c.task_bits = {100e3, 100e3};
  const Scenario s = build_scenario(c);
  for (const Task& k : generate_tasks(s, 0)) EXPECT_EQ(k.bits, 100e3);
}

TEST(Tasks, SlotPastHorizonRejected) {
  ScenarioConfig c;
  c.horizon = 5;
  const Scenario s = build_scenario(c);
  EXPECT_EQ(code_of([&] { generate_tasks(s, 5); }), ErrorCode::kDomain);
}

TEST(Tasks, PinnedRangeKeepsOtherDraws) {
  ScenarioConfig a, b;
  b.user_freq = {1.5e9, 1.5e9};
  const Scenario sa = build_scenario(a), sb = build_scenario(b);
  for (std::size_t m = 0; m < sa.users.size(); ++m) {
    EXPECT_EQ(sa.users[m].position, sb.users[m].position);
    EXPECT_EQ(sa.users[m].tx_power, sb.users[m].tx_power);
    EXPECT_EQ(sb.users[m].cpu_freq, 1.5e9);
  }
}

TEST(Mobility, RandomWaypointRespectsSpeedAndArea) {
  ScenarioConfig c;
  c.user_mobility = UserMobility::kRandomWaypoint;
  c.user_speed = 2.0;
  Scenario s = build_scenario(c);
  for (int t = 0; t < 200; ++t) {
    const auto before = s.users;
    advance_users(s, t);
    for (std::size_t m = 0; m < s.users.size(); ++m) {
      const Vec3& p = s.users[m].position;
      EXPECT_LE((p - before[m].position).norm(), 2.0 * c.slot_seconds + 1e-9);
      EXPECT_GE(p.x(), 0.0);
      EXPECT_LE(p.x(), c.area_x);
      EXPECT_EQ(p.z(), 0.0);
    }
  }
  Scenario fixed = build_scenario(ScenarioConfig{});
  const auto before = fixed.users;
  advance_users(fixed, 0);
  EXPECT_EQ(fixed.users[0].position, before[0].position);
}
