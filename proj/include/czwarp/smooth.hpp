// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace czwarp {

/// Value and first two derivatives of a scalar function at one point.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// The C-infinity step s(x) = B(x) / (B(x) + B(1 - x)), B(x) = exp(-1/x) for
/// x > 0 and 0 otherwise. s = 0 on x <= 0, s = 1 on x >= 1, s(1 - x) = 1 - s(x),
/// and every derivative vanishes at both ends.
Jet smooth_step(double x);

/// s(x) alone.
double smooth_step_value(double x);

}  // namespace czwarp
