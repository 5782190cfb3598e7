// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace czwarp {

/// x^n for integer n by repeated squaring; the warping exponents 1 - m,
/// m - 1 and 2 - 2m are all integers.
inline double ipow(double x, int n) {
  const bool invert = n < 0;
  unsigned e = invert ? static_cast<unsigned>(-n) : static_cast<unsigned>(n);
  double r = 1.0;
  while (e) {
    if (e & 1u) r *= x;
    x *= x;
    e >>= 1u;
  }
  return invert ? 1.0 / r : r;
}

}  // namespace czwarp
