// SPDX-License-Identifier: Apache-2.0
// Compiled with -mavx2 only; reached through the runtime dispatcher.
#include <immintrin.h>

#include <algorithm>
#include <limits>

#include "czwarp/kernels.hpp"

namespace czwarp::kernels::avx2 {

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // mul then add, never fused: must match the scalar lanes bit for bit
    __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, prod);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (; i < n; ++i) lanes[i % 4] += a[i] * b[i];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (; i < n; ++i) lanes[i % 4] += x[i];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

Excess bound_excess(const double* v, const double* lo, const double* hi, const double* scale,
                    std::size_t n) {
  const double ninf = -std::numeric_limits<double>::infinity();
  __m256d below = _mm256_set1_pd(ninf);
  __m256d above = _mm256_set1_pd(ninf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vv = _mm256_loadu_pd(v + i);
    __m256d sc = _mm256_loadu_pd(scale + i);
    __m256d lo_ex = _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(lo + i), vv), sc);
    __m256d hi_ex = _mm256_div_pd(_mm256_sub_pd(vv, _mm256_loadu_pd(hi + i)), sc);
    // operand order mirrors std::max(acc, x): NaN in x leaves acc unchanged
    below = _mm256_max_pd(lo_ex, below);
    above = _mm256_max_pd(hi_ex, above);
  }
  alignas(32) double b[4], a[4];
  _mm256_store_pd(b, below);
  _mm256_store_pd(a, above);
  Excess e{ninf, ninf};
  for (int l = 0; l < 4; ++l) {
    e.below = std::max(e.below, b[l]);
    e.above = std::max(e.above, a[l]);
  }
  for (; i < n; ++i) {
    e.below = std::max(e.below, (lo[i] - v[i]) / scale[i]);
    e.above = std::max(e.above, (v[i] - hi[i]) / scale[i]);
  }
  return e;
}

}  // namespace czwarp::kernels::avx2
