#include <gtest/gtest.h>

#include <random>

#include "uavmec/allocator.hpp"
#include "uavmec/baselines.hpp"
#include "uavmec/error.hpp"
#include "uavmec/harness.hpp"

using namespace uavmec;

namespace {

SlotContext context_with_half_angle(double half_angle_deg, std::uint64_t seed = 1) {
  ScenarioConfig c;
  c.coverage_half_angle_deg = half_angle_deg;
  c.rng_seed = seed;
  const Scenario s = build_scenario(c);
  return make_slot_context(s.users, s.uavs, generate_tasks(s, 0), s.channel);
}

}  // namespace

TEST(RandomTrajectory, SeededAndWithinSpeedBound) {
  ScenarioConfig c;
  std::mt19937_64 a(5), b(5), other(6);
  const auto first = rt_policy(a, c);
  EXPECT_EQ(first, rt_policy(b, c));
  EXPECT_NE(first, rt_policy(other, c));
  ASSERT_EQ(first.size(), 4u);
  for (int i = 0; i < 1000; ++i)
    for (const Vec3& d : rt_policy(a, c)) EXPECT_LE(d.norm(), c.max_step() + 1e-12);
}

TEST(AllOffload, NoCoverageMeansAllLocal) {
  const SlotContext ctx = context_with_half_angle(0.0);
  const Evaluation e = ao_policy(ctx);
  for (int a : e.decision.assignment) EXPECT_EQ(a, kLocal);
  EXPECT_EQ(e.dor, 0.0);
}

TEST(AllOffload, FullCoverageOffloadsEveryone) {
  const SlotContext ctx = context_with_half_angle(90.0);
  const Evaluation e = ao_policy(ctx);
  for (std::size_t m = 0; m < e.decision.assignment.size(); ++m) {
    EXPECT_NE(e.decision.assignment[m], kLocal);
    EXPECT_EQ(e.decision.assignment[m], ctx.ingress[m]);
  }
  validate_decision(e.decision, ctx.users, ctx.uavs, ctx.channel);
}

TEST(AllOffload, NeverBeatsCoordinateDescent) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 100; ++i) {
    const SlotContext ctx = random_slot_context(rng, 1 + i % 10, 1 + i % 4);
    EXPECT_LE(ao_policy(ctx).dor, cd_search(ctx).dor + 1e-9) << "instance " << i;
  }
}

TEST(AllLocal, ZeroDorAndValid) {
  const SlotContext ctx = context_with_half_angle(90.0);
  const Evaluation e = al_policy(ctx);
  EXPECT_EQ(e.dor, 0.0);
  for (double c : e.metrics.per_user_contribution) EXPECT_EQ(c, 0.0);
  for (double b : e.decision.bandwidth_hz) EXPECT_EQ(b, 0.0);
  validate_decision(e.decision, ctx.users, ctx.uavs, ctx.channel);
}

TEST(PolicyKind, ParseAndPrint) {
  for (PolicyKind k : {PolicyKind::kRandomTrajectory, PolicyKind::kAllOffload, PolicyKind::kAllLocal,
                       PolicyKind::kLearned})
    EXPECT_EQ(parse_policy_kind(to_string(k)), k);
  EXPECT_EQ(parse_policy_kind("ao"), PolicyKind::kAllOffload);
  try {
    parse_policy_kind("greedy");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}
