// SPDX-License-Identifier: Apache-2.0
#include "czwarp/smooth.hpp"

#include <cmath>

namespace czwarp {

Jet smooth_step(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  // s = 1 / (1 + e^g) with g = 1/x - 1/(1-x); stays finite when B underflows.
  const double y = 1.0 - x;
  const double g = (y - x) / (x * y);
  const double dg = -1.0 / (x * x) - 1.0 / (y * y);
  const double d2g = 2.0 / (x * x * x) - 2.0 / (y * y * y);
  double s, s1;  // s and 1 - s, each computed without cancellation
  if (g > 0.0) {
    const double e = std::exp(-g);
    s = e / (1.0 + e);
    s1 = 1.0 / (1.0 + e);
  } else {
    const double e = std::exp(g);
    s = 1.0 / (1.0 + e);
    s1 = e / (1.0 + e);
  }
  const double q = s * s1;
  if (q == 0.0) return {s, 0.0, 0.0};
  const double ds = -q * dg;
  const double d2s = -(ds * (s1 - s)) * dg - q * d2g;
  return {s, ds, d2s};
}

double smooth_step_value(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double y = 1.0 - x;
  const double g = (y - x) / (x * y);
  if (g > 0.0) {
    const double e = std::exp(-g);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(g));
}

}  // namespace czwarp
