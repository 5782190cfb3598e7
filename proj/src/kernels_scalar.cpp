// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <limits>

#include "czwarp/kernels.hpp"

namespace czwarp::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) acc[l] += a[i + l] * b[i + l];
  }
  for (; i < n; ++i) acc[i % 4] += a[i] * b[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double sum(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) acc[l] += x[i + l];
  }
  for (; i < n; ++i) acc[i % 4] += x[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

Excess bound_excess(const double* v, const double* lo, const double* hi, const double* scale,
                    std::size_t n) {
  Excess e{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < n; ++i) {
    e.below = std::max(e.below, (lo[i] - v[i]) / scale[i]);
    e.above = std::max(e.above, (v[i] - hi[i]) / scale[i]);
  }
  return e;
}

}  // namespace czwarp::kernels::scalar
