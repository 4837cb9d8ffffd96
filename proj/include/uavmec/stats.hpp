#pragma once

#include <span>

namespace uavmec {

struct MannKendall {
  double s = 0.0;
  double variance = 0.0;
  double z = 0.0;
  double p_value = 1.0;  // two-sided, normal approximation
};

/// Trend test on a series ordered by the sweep variable. The variance
/// carries the usual correction for tied values.
MannKendall mann_kendall(std::span<const double> series);

/// Trend test on replicated data: pairs (x, y) are compared only across
/// distinct x, so seed replicates at one sweep point never count.
MannKendall mann_kendall(std::span<const double> x, std::span<const double> y);

}  // namespace uavmec
