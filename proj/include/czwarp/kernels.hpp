// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel reductions used by the quadrature and the bound audits.
//
// Every variant follows the same four-lane accumulation order: element i is
// folded into lane i % 4, lanes are combined as (l0 + l1) + (l2 + l3). The
// scalar reference emulates the lanes, so all variants are bit-identical and
// results do not depend on which one the dispatcher picks.
#pragma once

#include <cstddef>
#include <span>

namespace czwarp::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);

/// Best variant supported by the running CPU, unless CZWARP_ISA=scalar is set.
Isa active_isa();

/// Whether a variant was compiled in and the CPU can run it.
bool isa_available(Isa isa);

/// Largest violations max_i (lo_i - v_i) / scale_i and max_i (v_i - hi_i) / scale_i.
/// Max is exact, so these agree across variants regardless of order.
struct Excess {
  double below;
  double above;
};

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> x);
Excess bound_excess(std::span<const double> v, std::span<const double> lo,
                    std::span<const double> hi, std::span<const double> scale);

// Explicit variants, used by the equivalence tests.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
Excess bound_excess(const double* v, const double* lo, const double* hi, const double* scale,
                    std::size_t n);
}  // namespace scalar

#if defined(CZWARP_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
Excess bound_excess(const double* v, const double* lo, const double* hi, const double* scale,
                    std::size_t n);
}  // namespace avx2
#endif

#if defined(CZWARP_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
Excess bound_excess(const double* v, const double* lo, const double* hi, const double* scale,
                    std::size_t n);
}  // namespace neon
#endif

/// Variant-explicit entry points (throw if the variant is unavailable).
double dot(Isa isa, std::span<const double> a, std::span<const double> b);
double sum(Isa isa, std::span<const double> x);
Excess bound_excess(Isa isa, std::span<const double> v, std::span<const double> lo,
                    std::span<const double> hi, std::span<const double> scale);

}  // namespace czwarp::kernels
