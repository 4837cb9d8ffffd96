#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "uavmec/allocator.hpp"
#include "uavmec/channel.hpp"
#include "uavmec/delay.hpp"
#include "uavmec/error.hpp"

using namespace uavmec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

UserState user(double f, double x = 0.0, double y = 0.0) {
  UserState u;
  u.position = {x, y, 0.0};
  u.cpu_freq = f;
  u.tx_power = 1.0;
  return u;
}

UavState uav(double x, double y, double z, double phi = 90.0) {
  UavState u;
  u.position = {x, y, z};
  u.cpu_freq = 10e9;
  u.tx_power = 5.0;
  u.half_angle_deg = phi;
  return u;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(LocalDelay, Examples) {
  EXPECT_DOUBLE_EQ(local_delay({1e5, 1000}, user(1e9)), 0.1);
  EXPECT_DOUBLE_EQ(local_delay({1e5, 1000}, user(2e9)), 0.05);
  EXPECT_EQ(code_of([] { local_delay({1e5, 1000}, user(0.0)); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([] { local_delay({0.0, 1000}, user(1e9)); }), ErrorCode::kDomain);
}

TEST(OffloadDelay, Examples) {
  EXPECT_DOUBLE_EQ(offload_delay({1e5, 500}, 1e6), 0.1);
  EXPECT_LT(offload_delay({1e5, 500}, 1e15), 1e-9);
  EXPECT_EQ(offload_delay({1e5, 500}, 0.0), kInf);
}

TEST(ExecDelay, Examples) {
  EXPECT_DOUBLE_EQ(exec_delay({1e5, 500}, 10e9), 0.005);
  EXPECT_EQ(exec_delay({1e5, 500}, 0.0), kInf);
  EXPECT_DOUBLE_EQ(exec_delay({2e5, 500}, 10e9), 2.0 * exec_delay({1e5, 500}, 10e9));
  EXPECT_DOUBLE_EQ(exec_delay({1e5, 1000}, 10e9), 2.0 * exec_delay({1e5, 500}, 10e9));
}

TEST(EdgeDelay, SumAndSentinels) {
  EXPECT_NEAR(edge_delay({1e5, 500}, 1e6, 10e9), 0.105, 1e-15);
  EXPECT_EQ(edge_delay({1e5, 500}, 0.0, 10e9), kInf);
  EXPECT_EQ(edge_delay({1e5, 500}, 1e6, 0.0), kInf);
}

TEST(EdgeDelay, OracleDraw) {
  // Mixed-channel link of the scalar oracle, 125 kbit, 750 cycles/bit, 5 GHz share.
  const ChannelParams p;
  const double rate = g2a_rate_bps(user(1e9), uav(30, 40, 10), 5e6, p);
  const double d = edge_delay({125e3, 750}, rate, 5e9);
  EXPECT_NEAR(d, 0.026188267892177941, 1e-15);
}

TEST(EdgeDelay, DecreasesWithResources) {
  const Task t{120e3, 700};
  double prev = kInf;
  for (double r = 1e5; r < 1e9; r *= 2) {
    EXPECT_LT(edge_delay(t, r, 5e9), prev);
    prev = edge_delay(t, r, 5e9);
  }
  prev = kInf;
  for (double f = 1e8; f < 1e11; f *= 2) {
    EXPECT_LT(edge_delay(t, 1e6, f), prev);
    prev = edge_delay(t, 1e6, f);
  }
}

namespace {

struct Fixture {
  std::vector<UserState> users{user(1e9, 0, 0), user(1e9, 10, 0)};
  std::vector<UavState> uavs{uav(0, 0, 10), uav(10, 0, 10)};
  std::vector<Task> tasks{{1e5, 1000}, {1e5, 1000}};
  ChannelParams channel;
};

}  // namespace

TEST(SlotDor, AllLocalIsZero) {
  Fixture f;
  const SlotMetrics m = slot_dor(SlotDecision::all_local(2), f.tasks, f.users, f.uavs, f.channel);
  EXPECT_EQ(m.dor, 0.0);
  for (double c : m.per_user_contribution) EXPECT_EQ(c, 0.0);
  EXPECT_DOUBLE_EQ(m.per_user_delay[0], 0.1);
}

TEST(SlotDor, SingleUserHandCase) {
  // Pick the bandwidth so that T_edge = 0.04 s against T_loc = 0.1 s.
  Fixture f;
  f.users.resize(1);
  f.tasks.resize(1);
  const double se = g2a_spectral_efficiency(f.users[0], f.uavs[0], f.channel);
  const double t_exe = 1e5 * 1000 / 10e9;          // 0.01 s with the full CPU
  const double bw = 1e5 / ((0.04 - t_exe) * se);  // offload takes 0.03 s
  ASSERT_LE(bw, f.channel.bw_g2a_hz);
  SlotDecision d;
  d.assignment = {0};
  d.ingress = {0};
  d.bandwidth_hz = {bw};
  d.cpu_hz = {10e9};
  const SlotMetrics m = slot_dor(d, f.tasks, f.users, f.uavs, f.channel);
  EXPECT_NEAR(m.dor, 0.6, 1e-12);
  EXPECT_NEAR(m.per_user_delay[0], 0.04, 1e-14);
}

TEST(SlotDor, EqualDelayGivesZeroAndSlowerIsNegative) {
  Fixture f;
  f.users.resize(1);
  f.tasks.resize(1);
  const double se = g2a_spectral_efficiency(f.users[0], f.uavs[0], f.channel);
  SlotDecision d;
  d.assignment = {0};
  d.ingress = {0};
  d.cpu_hz = {10e9};
  d.bandwidth_hz = {1e5 / ((0.1 - 0.01) * se)};
  EXPECT_NEAR(slot_dor(d, f.tasks, f.users, f.uavs, f.channel).dor, 0.0, 1e-12);
  d.bandwidth_hz = {1e5 / ((0.3 - 0.01) * se)};
  EXPECT_NEAR(slot_dor(d, f.tasks, f.users, f.uavs, f.channel).dor, -2.0, 1e-12);
}

TEST(SlotDor, AdditiveAcrossUsersAndBounded) {
  Fixture f;
  const SlotContext ctx = make_slot_context(f.users, f.uavs, f.tasks, f.channel);
  const Evaluation both = evaluate_assignment(std::vector<int>{0, 1}, ctx);
  EXPECT_NEAR(both.dor, both.metrics.per_user_contribution[0] + both.metrics.per_user_contribution[1], 1e-15);
  EXPECT_LE(both.dor, 2.0);
  for (double c : both.metrics.per_user_contribution) EXPECT_LE(c, 1.0);
  // Dropping user 1 to local removes exactly its contribution, since the users
  // sit in different ingress and executor groups.
  const Evaluation one = evaluate_assignment(std::vector<int>{0, kLocal}, ctx);
  EXPECT_NEAR(one.dor, both.metrics.per_user_contribution[0], 1e-15);
}

TEST(Validation, NamesTheViolatedConstraint) {
  Fixture f;
  SlotDecision d = SlotDecision::all_local(2);
  d.assignment[0] = 0;
  d.ingress[0] = 0;
  d.bandwidth_hz[0] = f.channel.bw_g2a_hz * 1.5;
  d.cpu_hz[0] = 1e9;
  EXPECT_EQ(code_of([&] { validate_decision(d, f.users, f.uavs, f.channel); }), ErrorCode::kInvalidDecision);
  EXPECT_NE(message_of([&] { validate_decision(d, f.users, f.uavs, f.channel); }).find("bandwidth"),
            std::string::npos);

  d.bandwidth_hz[0] = 1e6;
  d.cpu_hz[0] = 20e9;
  EXPECT_NE(message_of([&] { validate_decision(d, f.users, f.uavs, f.channel); }).find("cpu"),
            std::string::npos);

  d.cpu_hz[0] = 1e9;
  d.assignment[0] = 7;
  EXPECT_EQ(code_of([&] { validate_decision(d, f.users, f.uavs, f.channel); }), ErrorCode::kInvalidDecision);

  // Ingress must cover the user.
  std::vector<UavState> narrow{uav(40, 40, 10, 10), uav(10, 0, 10)};
  d.assignment[0] = 0;
  EXPECT_NE(message_of([&] { validate_decision(d, f.users, narrow, f.channel); }).find("cover"),
            std::string::npos);

  d = SlotDecision::all_local(1);
  EXPECT_EQ(code_of([&] { validate_decision(d, f.users, f.uavs, f.channel); }), ErrorCode::kInvalidDecision);
}

TEST(Validation, RelayToAnyExecutorIsAllowed) {
  Fixture f;
  SlotDecision d = SlotDecision::all_local(2);
  d.assignment[0] = 1;  // executes on UAV 1
  d.ingress[0] = 0;     // uploads through UAV 0
  d.bandwidth_hz[0] = 1e6;
  d.cpu_hz[0] = 1e9;
  EXPECT_NO_THROW(validate_decision(d, f.users, f.uavs, f.channel));
}
