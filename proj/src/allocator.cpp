#include "uavmec/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "uavmec/channel.hpp"
#include "uavmec/error.hpp"

namespace uavmec {
namespace {

// A candidate must beat the incumbent by more than this to be accepted.
constexpr double kImprovementEps = 1e-12;

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> proportional_split(std::span<const double> weights, double total) {
  const double denom = sum_of(weights);
  std::vector<double> out(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) out[i] = total * (weights[i] / denom);
  return out;
}

void check_assignment(std::span<const int> assignment, const SlotContext& ctx) {
  if (static_cast<int>(assignment.size()) != ctx.num_users())
    throw Error(ErrorCode::kInvalidDecision, "assignment size differs from the user count");
  for (std::size_t m = 0; m < assignment.size(); ++m) {
    const int e = assignment[m];
    if (e == kLocal) continue;
    if (e < 0 || e >= ctx.num_uavs())
      throw Error(ErrorCode::kInvalidDecision,
                  "user " + std::to_string(m) + ": executor index out of range");
    if (ctx.ingress[m] == kLocal)
      throw Error(ErrorCode::kInfeasible,
                  "user " + std::to_string(m) + " is offloaded but no UAV covers it");
  }
}

// Weight of user m in the bandwidth closed form, sqrt(f / (c * r0)).
double bandwidth_weight(const SlotContext& ctx, int m) {
  return std::sqrt(ctx.users[m].cpu_freq /
                   (ctx.tasks[m].cycles_per_bit * ctx.spectral_efficiency[m]));
}

// Group sums of the closed-form weights; the optimal group cost is
// (sum of weights)^2 / capacity.
struct GroupSums {
  std::vector<double> bandwidth;
  std::vector<double> cpu;
};

GroupSums group_sums(std::span<const int> assignment, const SlotContext& ctx,
                     std::span<const double> wb, std::span<const double> wf) {
  GroupSums g{std::vector<double>(ctx.num_uavs(), 0.0), std::vector<double>(ctx.num_uavs(), 0.0)};
  for (int m = 0; m < ctx.num_users(); ++m) {
    if (assignment[m] == kLocal) continue;
    g.bandwidth[ctx.ingress[m]] += wb[m];
    g.cpu[assignment[m]] += wf[m];
  }
  return g;
}

double closed_form_dor(std::span<const int> assignment, const SlotContext& ctx,
                       std::span<const double> wb, std::span<const double> wf) {
  const GroupSums g = group_sums(assignment, ctx, wb, wf);
  double dor = 0.0;
  for (int e : assignment) dor += (e == kLocal) ? 0.0 : 1.0;
  for (int n = 0; n < ctx.num_uavs(); ++n) {
    dor -= g.bandwidth[n] * g.bandwidth[n] / ctx.channel.bw_g2a_hz;
    dor -= g.cpu[n] * g.cpu[n] / ctx.uavs[n].cpu_freq;
  }
  return dor;
}

struct SimplexSolve {
  std::vector<double> fractions;
  int iterations = 0;
};

// min sum_k a_k / s_k  over the unit simplex, by projected gradient with
// backtracking. Stops when the gradient is constant across components to
// relative `tol`, which is the first-order optimality condition on the simplex
// interior.
SimplexSolve solve_inverse_sum(std::span<const double> a, const ConvexOracleOptions& opt) {
  const std::size_t k = a.size();
  SimplexSolve out;
  out.fractions.assign(k, 1.0 / static_cast<double>(k));
  if (k == 1) return out;

  auto objective = [&](std::span<const double> s) {
    double v = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (!(s[i] > 0.0)) return std::numeric_limits<double>::infinity();
      v += a[i] / s[i];
    }
    return v;
  };

  std::vector<double> s = out.fractions, grad(k), trial(k), shifted(k);
  double f = objective(s);
  double step = -1.0;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opt.max_iterations; ++it) {
    for (std::size_t i = 0; i < k; ++i) grad[i] = -a[i] / (s[i] * s[i]);
    const auto [lo, hi] = std::minmax_element(grad.begin(), grad.end());
    const double mean = sum_of(grad) / static_cast<double>(k);
    residual = (*hi - *lo) / std::abs(mean);
    if (residual <= opt.tolerance) {
      out.fractions = s;
      out.iterations = it;
      return out;
    }
    if (step < 0.0) step = 0.1 / std::abs(*lo);

    while (true) {
      for (std::size_t i = 0; i < k; ++i) shifted[i] = s[i] - step * grad[i];
      trial = project_to_simplex(shifted, 1.0);
      const double ft = objective(trial);
      double model = f;
      double dist2 = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        const double d = trial[i] - s[i];
        model += grad[i] * d;
        dist2 += d * d;
      }
      model += dist2 / (2.0 * step);
      // Near the optimum f changes by less than its rounding error; accept
      // such steps so the gradient test, not the objective, decides.
      if (ft <= model + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(f)) {
        s = trial;
        f = ft;
        break;
      }
      step *= 0.5;
      if (step < 1e-300)
        throw Error(ErrorCode::kNumeric, "convex oracle: line search collapsed, residual " +
                                             std::to_string(residual));
    }
    step *= 1.5;
  }
  throw Error(ErrorCode::kNumeric, "convex oracle: no convergence within " +
                                       std::to_string(opt.max_iterations) +
                                       " iterations, residual " + std::to_string(residual));
}

}  // namespace

SlotContext make_slot_context(std::vector<UserState> users, std::vector<UavState> uavs,
                              std::vector<Task> tasks, const ChannelParams& channel) {
  if (tasks.size() != users.size())
    throw Error(ErrorCode::kInvalidDecision, "slot context needs one task per user");
  SlotContext ctx;
  ctx.users = std::move(users);
  ctx.uavs = std::move(uavs);
  ctx.tasks = std::move(tasks);
  ctx.channel = channel;
  ctx.ingress.assign(ctx.users.size(), kLocal);
  ctx.spectral_efficiency.assign(ctx.users.size(), 0.0);
  for (std::size_t m = 0; m < ctx.users.size(); ++m) {
    for (std::size_t n = 0; n < ctx.uavs.size(); ++n) {
      if (!is_covered(ctx.users[m], ctx.uavs[n])) continue;
      const double se = g2a_spectral_efficiency(ctx.users[m], ctx.uavs[n], channel);
      if (se > ctx.spectral_efficiency[m]) {
        ctx.spectral_efficiency[m] = se;
        ctx.ingress[m] = static_cast<int>(n);
      }
    }
  }
  return ctx;
}

std::vector<double> kkt_bandwidth_shares(std::span<const BandwidthUser> users,
                                         double total_bw_hz) {
  if (!(total_bw_hz > 0.0)) throw Error(ErrorCode::kDomain, "total bandwidth must be > 0");
  std::vector<double> weights;
  weights.reserve(users.size());
  for (const BandwidthUser& u : users) {
    if (!(u.spectral_efficiency > 0.0))
      throw Error(ErrorCode::kInfeasible, "user with zero spectral efficiency cannot be served");
    weights.push_back(std::sqrt(u.cpu_freq / (u.cycles_per_bit * u.spectral_efficiency)));
  }
  if (weights.empty()) return {};
  return proportional_split(weights, total_bw_hz);
}

std::vector<double> kkt_cpu_shares(std::span<const double> user_freqs, double uav_freq_hz) {
  if (!(uav_freq_hz > 0.0)) throw Error(ErrorCode::kDomain, "UAV frequency must be > 0");
  if (user_freqs.empty()) return {};
  std::vector<double> weights;
  weights.reserve(user_freqs.size());
  for (double f : user_freqs) weights.push_back(std::sqrt(f));
  return proportional_split(weights, uav_freq_hz);
}

Evaluation evaluate_assignment(std::span<const int> assignment, const SlotContext& ctx) {
  check_assignment(assignment, ctx);
  const int n_count = ctx.num_uavs();

  Evaluation ev;
  SlotDecision& d = ev.decision;
  d = SlotDecision::all_local(ctx.num_users());
  d.assignment.assign(assignment.begin(), assignment.end());

  for (int n = 0; n < n_count; ++n) {
    std::vector<int> members;
    std::vector<BandwidthUser> bw_users;
    for (int m = 0; m < ctx.num_users(); ++m) {
      if (assignment[m] == kLocal || ctx.ingress[m] != n) continue;
      members.push_back(m);
      bw_users.push_back({ctx.users[m].cpu_freq, ctx.tasks[m].cycles_per_bit,
                          ctx.spectral_efficiency[m]});
    }
    const auto bw = kkt_bandwidth_shares(bw_users, ctx.channel.bw_g2a_hz);
    for (std::size_t i = 0; i < members.size(); ++i) {
      d.ingress[members[i]] = n;
      d.bandwidth_hz[members[i]] = bw[i];
    }

    members.clear();
    std::vector<double> freqs;
    for (int m = 0; m < ctx.num_users(); ++m) {
      if (assignment[m] != n) continue;
      members.push_back(m);
      freqs.push_back(ctx.users[m].cpu_freq);
    }
    const auto cpu = kkt_cpu_shares(freqs, ctx.uavs[n].cpu_freq);
    for (std::size_t i = 0; i < members.size(); ++i) d.cpu_hz[members[i]] = cpu[i];
  }

  ev.metrics = slot_dor(d, ctx.tasks, ctx.users, ctx.uavs, ctx.channel);
  ev.dor = ev.metrics.dor;
  return ev;
}

AllocationResult cd_search(const SlotContext& ctx, const CdOptions& options) {
  const int m_count = ctx.num_users();
  const int n_count = ctx.num_uavs();

  std::vector<double> wb(m_count, 0.0), wf(m_count, 0.0);
  for (int m = 0; m < m_count; ++m) {
    wf[m] = std::sqrt(ctx.users[m].cpu_freq);
    if (ctx.ingress[m] != kLocal) wb[m] = bandwidth_weight(ctx, m);
  }

  std::vector<int> assignment(m_count, kLocal);
  GroupSums sums = group_sums(assignment, ctx, wb, wf);
  std::vector<int> order(m_count);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 shuffle_rng(options.shuffle_seed);

  AllocationResult result;
  // Contribution of user m choosing executor e, given the other users' groups.
  auto value = [&](int m, int e) {
    if (e == kLocal) return 0.0;
    const double sb = sums.bandwidth[ctx.ingress[m]];
    const double sf = sums.cpu[e];
    return 1.0 - (2.0 * sb * wb[m] + wb[m] * wb[m]) / ctx.channel.bw_g2a_hz -
           (2.0 * sf * wf[m] + wf[m] * wf[m]) / ctx.uavs[e].cpu_freq;
  };

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    if (options.shuffle_order) std::shuffle(order.begin(), order.end(), shuffle_rng);
    result.iterations = sweep + 1;
    bool changed = false;
    for (int m : order) {
      if (ctx.ingress[m] == kLocal) continue;
      const int current = assignment[m];
      if (current != kLocal) {
        sums.bandwidth[ctx.ingress[m]] -= wb[m];
        sums.cpu[current] -= wf[m];
      }
      int best = current;
      double best_value = value(m, current);
      for (int e = kLocal; e < n_count; ++e) {
        const double v = value(m, e);
        if (v > best_value + kImprovementEps) {
          best = e;
          best_value = v;
        }
      }
      assignment[m] = best;
      if (best != current) {
        changed = true;
        sums = group_sums(assignment, ctx, wb, wf);
        result.accepted_dor.push_back(closed_form_dor(assignment, ctx, wb, wf));
      } else if (current != kLocal) {
        sums.bandwidth[ctx.ingress[m]] += wb[m];
        sums.cpu[current] += wf[m];
      }
    }
    if (!changed) {
      result.converged = true;
      break;
    }
  }

  Evaluation ev = evaluate_assignment(assignment, ctx);
  result.decision = std::move(ev.decision);
  result.metrics = std::move(ev.metrics);
  result.dor = ev.dor;
  return result;
}

AllocationResult brute_force_oracle(const SlotContext& ctx, double cap) {
  const int m_count = ctx.num_users();
  const int n_count = ctx.num_uavs();
  const double total = std::pow(static_cast<double>(n_count + 1), m_count);
  if (total > cap)
    throw Error(ErrorCode::kRefused, "exhaustive search over " + std::to_string(total) +
                                         " assignments exceeds the cap of " +
                                         std::to_string(cap));

  std::vector<int> assignment(m_count, kLocal);
  AllocationResult best;
  best.dor = -std::numeric_limits<double>::infinity();
  bool have_best = false;
  int evaluated = 0;
  while (true) {
    bool feasible = true;
    for (int m = 0; m < m_count; ++m)
      if (assignment[m] != kLocal && ctx.ingress[m] == kLocal) feasible = false;
    if (feasible) {
      Evaluation ev = evaluate_assignment(assignment, ctx);
      ++evaluated;
      if (!have_best || ev.dor > best.dor) {
        have_best = true;
        best.decision = std::move(ev.decision);
        best.metrics = std::move(ev.metrics);
        best.dor = ev.dor;
      }
    }
    // Odometer in lexicographic order, user 0 most significant.
    int pos = m_count - 1;
    while (pos >= 0 && assignment[pos] == n_count - 1) {
      assignment[pos] = kLocal;
      --pos;
    }
    if (pos < 0) break;
    ++assignment[pos];
  }
  best.iterations = evaluated;
  best.converged = true;
  return best;
}

std::vector<double> project_to_simplex(std::span<const double> v, double total) {
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double t = (cumulative - total) / static_cast<double>(i + 1);
    if (sorted[i] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - theta, 0.0);
  return out;
}

ConvexOracleResult numeric_convex_oracle(std::span<const int> assignment, const SlotContext& ctx,
                                         const ConvexOracleOptions& options) {
  check_assignment(assignment, ctx);
  ConvexOracleResult out;
  out.bandwidth_hz.assign(ctx.num_users(), 0.0);
  out.cpu_hz.assign(ctx.num_users(), 0.0);

  for (int n = 0; n < ctx.num_uavs(); ++n) {
    // Bandwidth group: T_off / T_loc = f / (c * r0 * B).
    std::vector<int> members;
    std::vector<double> coeff;
    for (int m = 0; m < ctx.num_users(); ++m) {
      if (assignment[m] == kLocal || ctx.ingress[m] != n) continue;
      if (!(ctx.spectral_efficiency[m] > 0.0))
        throw Error(ErrorCode::kInfeasible, "user with zero spectral efficiency");
      members.push_back(m);
      coeff.push_back(ctx.users[m].cpu_freq /
                      (ctx.tasks[m].cycles_per_bit * ctx.spectral_efficiency[m]));
    }
    if (!members.empty()) {
      const SimplexSolve sol = solve_inverse_sum(coeff, options);
      out.iterations += sol.iterations;
      for (std::size_t i = 0; i < members.size(); ++i)
        out.bandwidth_hz[members[i]] = sol.fractions[i] * ctx.channel.bw_g2a_hz;
    }

    // CPU group: T_exe / T_loc = f_m / f_share.
    members.clear();
    coeff.clear();
    for (int m = 0; m < ctx.num_users(); ++m) {
      if (assignment[m] != n) continue;
      members.push_back(m);
      coeff.push_back(ctx.users[m].cpu_freq);
    }
    if (!members.empty()) {
      const SimplexSolve sol = solve_inverse_sum(coeff, options);
      out.iterations += sol.iterations;
      for (std::size_t i = 0; i < members.size(); ++i)
        out.cpu_hz[members[i]] = sol.fractions[i] * ctx.uavs[n].cpu_freq;
    }
  }
  out.objective = allocation_objective(assignment, ctx, out.bandwidth_hz, out.cpu_hz);
  return out;
}

double allocation_objective(std::span<const int> assignment, const SlotContext& ctx,
                            std::span<const double> bandwidth_hz, std::span<const double> cpu_hz) {
  double total = 0.0;
  for (int m = 0; m < ctx.num_users(); ++m) {
    if (assignment[m] == kLocal) continue;
    const double rate = g2a_rate_bps(ctx.users[m], ctx.uavs[ctx.ingress[m]], bandwidth_hz[m],
                                     ctx.channel);
    total += edge_delay(ctx.tasks[m], rate, cpu_hz[m]) / local_delay(ctx.tasks[m], ctx.users[m]);
  }
  return total;
}

}  // namespace uavmec
