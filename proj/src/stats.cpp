#include "uavmec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "uavmec/error.hpp"

namespace uavmec {
namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// Sum over tie groups of t(t-1)(2t+5).
double tie_term(std::span<const double> values) {
  std::map<double, int> counts;
  for (double v : values) ++counts[v];
  double term = 0.0;
  for (const auto& [value, t] : counts) term += static_cast<double>(t) * (t - 1) * (2.0 * t + 5.0);
  return term;
}

MannKendall finish(double s, double variance) {
  MannKendall mk;
  mk.s = s;
  mk.variance = variance;
  if (variance > 0.0) {
    if (s > 0.0) mk.z = (s - 1.0) / std::sqrt(variance);
    else if (s < 0.0) mk.z = (s + 1.0) / std::sqrt(variance);
  }
  mk.p_value = std::erfc(std::abs(mk.z) / std::sqrt(2.0));
  return mk;
}

}  // namespace

MannKendall mann_kendall(std::span<const double> series) {
  const auto n = static_cast<double>(series.size());
  double s = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i)
    for (std::size_t j = i + 1; j < series.size(); ++j) s += sign(series[j] - series[i]);
  const double variance = (n * (n - 1.0) * (2.0 * n + 5.0) - tie_term(series)) / 18.0;
  return finish(s, variance);
}

MannKendall mann_kendall(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::kShape, "mann_kendall: x and y differ in length");
  const auto n = static_cast<double>(x.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[i] < x[j]) s += sign(y[j] - y[i]);
  // Tie correction on both axes; the small cross terms of the exact
  // two-way tie variance are dropped.
  const double variance =
      (n * (n - 1.0) * (2.0 * n + 5.0) - tie_term(x) - tie_term(y)) / 18.0;
  return finish(s, variance);
}

}  // namespace uavmec
