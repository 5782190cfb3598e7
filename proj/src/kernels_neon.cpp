// SPDX-License-Identifier: Apache-2.0
// aarch64 variant: two float64x2 registers emulate the four reference lanes.
#include <arm_neon.h>

#include <algorithm>
#include <limits>

#include "czwarp/kernels.hpp"

namespace czwarp::kernels::neon {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double lanes[4];
  vst1q_f64(lanes, acc01);
  vst1q_f64(lanes + 2, acc23);
  for (; i < n; ++i) lanes[i % 4] += a[i] * b[i];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double sum(const double* x, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc01 = vaddq_f64(acc01, vld1q_f64(x + i));
    acc23 = vaddq_f64(acc23, vld1q_f64(x + i + 2));
  }
  double lanes[4];
  vst1q_f64(lanes, acc01);
  vst1q_f64(lanes + 2, acc23);
  for (; i < n; ++i) lanes[i % 4] += x[i];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

Excess bound_excess(const double* v, const double* lo, const double* hi, const double* scale,
                    std::size_t n) {
  // vmaxq_f64 propagates NaN, unlike std::max; keep the reference scalar loop.
  return scalar::bound_excess(v, lo, hi, scale, n);
}

}  // namespace czwarp::kernels::neon
