#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "uavmec/allocator.hpp"
#include "uavmec/error.hpp"
#include "uavmec/harness.hpp"

using namespace uavmec;

namespace {

UserState user(double f, double x, double y) {
  UserState u;
  u.position = {x, y, 0.0};
  u.cpu_freq = f;
  u.tx_power = 1.0;
  return u;
}

UavState uav(double x, double y, double z, double phi = 90.0, double f = 10e9) {
  UavState u;
  u.position = {x, y, z};
  u.cpu_freq = f;
  u.tx_power = 5.0;
  u.half_angle_deg = phi;
  return u;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

}  // namespace

TEST(KktBandwidth, Examples) {
  const BandwidthUser a{1e9, 800, 6.0};
  std::vector<BandwidthUser> two{a, a};
  auto s = kkt_bandwidth_shares(two, 20e6);
  EXPECT_DOUBLE_EQ(s[0], 10e6);
  EXPECT_DOUBLE_EQ(s[1], 10e6);

  std::vector<BandwidthUser> weighted{{1e9, 800, 6.0}, {0.25e9, 800, 6.0}};
  s = kkt_bandwidth_shares(weighted, 30e6);
  EXPECT_NEAR(s[0], 20e6, 1e-6);
  EXPECT_NEAR(s[1], 10e6, 1e-6);

  std::vector<BandwidthUser> one{a};
  EXPECT_EQ(kkt_bandwidth_shares(one, 20e6)[0], 20e6);
  EXPECT_TRUE(kkt_bandwidth_shares({}, 20e6).empty());

  std::vector<BandwidthUser> dead{a, {1e9, 800, 0.0}};
  EXPECT_EQ(code_of([&] { kkt_bandwidth_shares(dead, 20e6); }), ErrorCode::kInfeasible);
}

TEST(KktCpu, Examples) {
  std::vector<double> f{1e9, 4e9};
  auto s = kkt_cpu_shares(f, 9e9);
  EXPECT_NEAR(s[0], 3e9, 1e-3);
  EXPECT_NEAR(s[1], 6e9, 1e-3);
  std::vector<double> same{1e9, 1e9, 1e9};
  s = kkt_cpu_shares(same, 9e9);
  for (double x : s) EXPECT_DOUBLE_EQ(x, 3e9);
  std::vector<double> one{0.9e9};
  EXPECT_EQ(kkt_cpu_shares(one, 10e9)[0], 10e9);
}

TEST(KktShares, SumToCapacity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uf(0.5e9, 2e9), uc(500, 1000), use(0.5, 15.0);
  for (int k = 0; k < 200; ++k) {
    const int n = 1 + k % 10;
    std::vector<BandwidthUser> users;
    std::vector<double> freqs;
    for (int i = 0; i < n; ++i) {
      users.push_back({uf(rng), uc(rng), use(rng)});
      freqs.push_back(users.back().cpu_freq);
    }
    EXPECT_NEAR(sum(kkt_bandwidth_shares(users, 20e6)), 20e6, 20e6 * 1e-12);
    EXPECT_NEAR(sum(kkt_cpu_shares(freqs, 10e9)), 10e9, 10e9 * 1e-12);
  }
}

TEST(ConvexOracle, MatchesClosedFormsOnExamples) {
  // Weighted bandwidth example: 2/3 and 1/3 of the band.
  std::vector<UserState> users{user(1e9, 0, 0), user(0.25e9, 0, 0)};
  std::vector<UavState> uavs{uav(0, 0, 10)};
  std::vector<Task> tasks{{1e5, 800}, {1e5, 800}};
  const SlotContext ctx = make_slot_context(users, uavs, tasks, ChannelParams{});
  const std::vector<int> a{0, 0};
  const ConvexOracleResult o = numeric_convex_oracle(a, ctx);
  EXPECT_NEAR(o.bandwidth_hz[0] / ctx.channel.bw_g2a_hz, 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(o.bandwidth_hz[1] / ctx.channel.bw_g2a_hz, 1.0 / 3.0, 1e-6);
  const Evaluation e = evaluate_assignment(a, ctx);
  EXPECT_NEAR(o.objective,
              allocation_objective(a, ctx, e.decision.bandwidth_hz, e.decision.cpu_hz), 1e-9 * o.objective);

  // CPU example f = (1, 4) GHz: shares 1/3 and 2/3.
  users = {user(1e9, 0, 0), user(4e9, 0, 0)};
  const SlotContext cpu_ctx = make_slot_context(users, uavs, tasks, ChannelParams{});
  const ConvexOracleResult oc = numeric_convex_oracle(a, cpu_ctx);
  EXPECT_NEAR(oc.cpu_hz[0] / 10e9, 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(oc.cpu_hz[1] / 10e9, 2.0 / 3.0, 1e-6);
}

TEST(ConvexOracle, SymmetricAndSingle) {
  std::vector<UserState> users{user(1e9, 5, 5), user(1e9, 5, 5)};
  std::vector<UavState> uavs{uav(5, 5, 10)};
  std::vector<Task> tasks{{1e5, 800}, {1e5, 800}};
  const SlotContext ctx = make_slot_context(users, uavs, tasks, ChannelParams{});
  const ConvexOracleResult o = numeric_convex_oracle(std::vector<int>{0, 0}, ctx);
  EXPECT_NEAR(o.bandwidth_hz[0], o.bandwidth_hz[1], 1e-3);
  EXPECT_NEAR(o.cpu_hz[0], o.cpu_hz[1], 1e-3);
  const ConvexOracleResult s = numeric_convex_oracle(std::vector<int>{0, kLocal}, ctx);
  EXPECT_EQ(s.bandwidth_hz[0], ctx.channel.bw_g2a_hz);
  EXPECT_EQ(s.cpu_hz[0], 10e9);
  EXPECT_EQ(s.bandwidth_hz[1], 0.0);
}

TEST(ConvexOracle, ReportsNonConvergence) {
  std::mt19937_64 rng(2);
  const SlotContext ctx = random_slot_context(rng, 6, 1);
  std::vector<int> a(6, kLocal);
  for (int m = 0; m < 6; ++m)
    if (ctx.ingress[m] != kLocal) a[m] = 0;
  ConvexOracleOptions opt;
  opt.max_iterations = 1;
  if (std::count(a.begin(), a.end(), 0) >= 2) {
    try {
      numeric_convex_oracle(a, ctx, opt);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNumeric);
      EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
    }
  }
}

TEST(ConvexOracle, RandomInstancesAgreeWithClosedForms) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const SlotContext ctx = random_slot_context(rng, 1 + k % 10, 1 + k % 3);
    std::vector<int> a(ctx.num_users(), kLocal);
    bool any = false;
    for (int m = 0; m < ctx.num_users(); ++m)
      if (ctx.ingress[m] != kLocal) a[m] = m % ctx.num_uavs(), any = true;
    if (!any) continue;
    const Evaluation e = evaluate_assignment(a, ctx);
    const double closed = allocation_objective(a, ctx, e.decision.bandwidth_hz, e.decision.cpu_hz);
    const double numeric = numeric_convex_oracle(a, ctx).objective;
    EXPECT_LE(std::abs(closed - numeric), 1e-6 * numeric);
    EXPECT_LE(closed, numeric * (1 + 1e-12));
  }
}

TEST(Simplex, Projection) {
  const std::vector<double> v{0.5, 2.0, -1.0};
  const auto p = project_to_simplex(v, 1.0);
  EXPECT_NEAR(sum(p), 1.0, 1e-15);
  for (double x : p) EXPECT_GE(x, 0.0);
  EXPECT_NEAR(p[1], 1.0, 1e-15);
  const std::vector<double> inside{0.2, 0.3, 0.5};
  const auto q = project_to_simplex(inside, 1.0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(q[i], inside[i], 1e-15);
}

TEST(Evaluate, AllLocalAndInfeasible) {
  std::vector<UserState> users{user(1e9, 0, 0), user(1e9, 40, 40)};
  std::vector<UavState> uavs{uav(0, 0, 10, 30)};
  std::vector<Task> tasks{{1e5, 800}, {1e5, 800}};
  const SlotContext ctx = make_slot_context(users, uavs, tasks, ChannelParams{});
  EXPECT_EQ(ctx.ingress[0], 0);
  EXPECT_EQ(ctx.ingress[1], kLocal);
  EXPECT_EQ(ctx.spectral_efficiency[1], 0.0);
  EXPECT_EQ(evaluate_assignment(std::vector<int>{kLocal, kLocal}, ctx).dor, 0.0);
  EXPECT_EQ(code_of([&] { evaluate_assignment(std::vector<int>{kLocal, 0}, ctx); }), ErrorCode::kInfeasible);
  const Evaluation e = evaluate_assignment(std::vector<int>{0, kLocal}, ctx);
  EXPECT_NO_THROW(validate_decision(e.decision, ctx.users, ctx.uavs, ctx.channel));
}

TEST(Evaluate, IngressIsBestCoveringUav) {
  std::vector<UserState> users{user(1e9, 10, 10)};
  std::vector<UavState> uavs{uav(45, 45, 10), uav(12, 10, 15), uav(10, 10, 10, 1)};
  std::vector<Task> tasks{{1e5, 800}};
  const SlotContext ctx = make_slot_context(users, uavs, tasks, ChannelParams{});
  // UAV 2 sits directly above but its 1-degree cone still covers the user.
  EXPECT_EQ(ctx.ingress[0], 2);
  uavs[2].half_angle_deg = 0.0;
  uavs[2].position = {11, 10, 10};
  const SlotContext ctx2 = make_slot_context(users, uavs, tasks, ChannelParams{});
  EXPECT_EQ(ctx2.ingress[0], 1);
}

TEST(Evaluate, HandCaseMatchesBruteForce) {
  std::vector<UserState> users{user(1e9, 5, 5), user(0.9e9, 20, 5)};
  std::vector<UavState> uavs{uav(10, 5, 10)};
  std::vector<Task> tasks{{1.2e5, 900}, {1e5, 600}};
  const SlotContext ctx = make_slot_context(users, uavs, tasks, ChannelParams{});
  double best = 0.0;
  for (int a0 : {kLocal, 0})
    for (int a1 : {kLocal, 0}) best = std::max(best, evaluate_assignment(std::vector<int>{a0, a1}, ctx).dor);
  EXPECT_NEAR(brute_force_oracle(ctx).dor, best, 1e-15);
}

TEST(CdSearch, SingleUserOffloadsWhenFaster) {
  std::vector<UserState> users{user(1e9, 0, 0)};
  std::vector<UavState> uavs{uav(0, 0, 10)};
  std::vector<Task> tasks{{1e5, 1000}};
  const SlotContext ctx = make_slot_context(users, uavs, tasks, ChannelParams{});
  const AllocationResult r = cd_search(ctx);
  EXPECT_EQ(r.decision.assignment[0], 0);
  EXPECT_GT(r.dor, 0.0);
  EXPECT_TRUE(r.converged);
  EXPECT_GE(r.iterations, 1);
  EXPECT_DOUBLE_EQ(r.dor, brute_force_oracle(ctx).dor);
}

TEST(CdSearch, StaysLocalWhenEdgeIsSlower) {
  std::vector<UserState> users{user(1e9, 0, 0)};
  std::vector<UavState> uavs{uav(0, 0, 10, 90, 0.5e9)};
  std::vector<Task> tasks{{1e5, 1000}};
  const SlotContext ctx = make_slot_context(users, uavs, tasks, ChannelParams{});
  const AllocationResult r = cd_search(ctx);
  EXPECT_EQ(r.decision.assignment[0], kLocal);
  EXPECT_EQ(r.dor, 0.0);
}

TEST(CdSearch, NoCoverageMeansAllLocal) {
  std::vector<UserState> users{user(1e9, 0, 0), user(1e9, 50, 50)};
  std::vector<UavState> uavs{uav(25, 25, 10, 10), uav(25, 0, 10, 10)};
  std::vector<Task> tasks{{1e5, 800}, {1e5, 800}};
  const SlotContext ctx = make_slot_context(users, uavs, tasks, ChannelParams{});
  const AllocationResult r = cd_search(ctx);
  EXPECT_EQ(r.dor, 0.0);
  for (int c : r.decision.assignment) EXPECT_EQ(c, kLocal);
  EXPECT_EQ(brute_force_oracle(ctx).dor, 0.0);
}

TEST(CdSearch, FixedPointAndMonotoneOnRandomInstances) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 60; ++k) {
    const SlotContext ctx = random_slot_context(rng, 1 + k % 6, 1 + k % 3);
    const AllocationResult r = cd_search(ctx);
    ASSERT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 100);
    for (std::size_t i = 1; i < r.accepted_dor.size(); ++i) EXPECT_GT(r.accepted_dor[i], r.accepted_dor[i - 1]);
    EXPECT_NO_THROW(validate_decision(r.decision, ctx.users, ctx.uavs, ctx.channel));
    EXPECT_GE(r.dor, 0.0);
    // No single-user deviation improves the result.
    std::vector<int> a = r.decision.assignment;
    for (int m = 0; m < ctx.num_users(); ++m) {
      const int keep = a[m];
      for (int c = kLocal; c < ctx.num_uavs(); ++c) {
        if (c != kLocal && ctx.ingress[m] == kLocal) continue;
        a[m] = c;
        EXPECT_LE(evaluate_assignment(a, ctx).dor, r.dor + 1e-12);
      }
      a[m] = keep;
    }
    EXPECT_GE(brute_force_oracle(ctx).dor, r.dor - 1e-12);
  }
}

TEST(CdSearch, SingleUserAgreesWithBruteForce) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 30; ++k) {
    const SlotContext ctx = random_slot_context(rng, 1, 1 + k % 4);
    EXPECT_DOUBLE_EQ(cd_search(ctx).dor, brute_force_oracle(ctx).dor);
  }
}

TEST(CdSearch, ShuffledOrderStillAFixedPoint) {
  std::mt19937_64 rng(29);
  const SlotContext ctx = random_slot_context(rng, 6, 3);
  CdOptions opt;
  opt.shuffle_order = true;
  opt.shuffle_seed = 4;
  const AllocationResult a = cd_search(ctx, opt), b = cd_search(ctx, opt);
  EXPECT_EQ(a.decision.assignment, b.decision.assignment);
  EXPECT_TRUE(a.converged);
}

TEST(BruteForce, RefusesAboveCap) {
  std::mt19937_64 rng(1);
  const SlotContext ctx = random_slot_context(rng, 10, 4);
  EXPECT_EQ(code_of([&] { brute_force_oracle(ctx); }), ErrorCode::kRefused);
  const SlotContext small = random_slot_context(rng, 10, 2);
  EXPECT_NO_THROW(brute_force_oracle(small));
}
