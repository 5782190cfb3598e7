// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <cstring>

#include "czwarp/errors.hpp"
#include "czwarp/kernels.hpp"

namespace czwarp::kernels {

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(CZWARP_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(CZWARP_HAVE_NEON)
      return true;  // baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

namespace {

Isa detect() {
  if (const char* forced = std::getenv("CZWARP_ISA"); forced && std::strcmp(forced, "scalar") == 0)
    return Isa::scalar;
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

void require(Isa isa) {
  if (!isa_available(isa))
    throw Error(ErrorKind::invalid_argument, std::string("kernel variant unavailable: ") + isa_name(isa));
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorKind::invalid_argument, "kernel operands differ in length");
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

double dot(Isa isa, std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size());
  switch (isa) {
#if defined(CZWARP_HAVE_AVX2)
    case Isa::avx2: require(isa); return avx2::dot(a.data(), b.data(), a.size());
#endif
#if defined(CZWARP_HAVE_NEON)
    case Isa::neon: return neon::dot(a.data(), b.data(), a.size());
#endif
    case Isa::scalar: return scalar::dot(a.data(), b.data(), a.size());
    default: require(isa);
  }
  return 0.0;
}

double sum(Isa isa, std::span<const double> x) {
  switch (isa) {
#if defined(CZWARP_HAVE_AVX2)
    case Isa::avx2: require(isa); return avx2::sum(x.data(), x.size());
#endif
#if defined(CZWARP_HAVE_NEON)
    case Isa::neon: return neon::sum(x.data(), x.size());
#endif
    case Isa::scalar: return scalar::sum(x.data(), x.size());
    default: require(isa);
  }
  return 0.0;
}

Excess bound_excess(Isa isa, std::span<const double> v, std::span<const double> lo,
                    std::span<const double> hi, std::span<const double> scale) {
  require_same_size(v.size(), lo.size());
  require_same_size(v.size(), hi.size());
  require_same_size(v.size(), scale.size());
  switch (isa) {
#if defined(CZWARP_HAVE_AVX2)
    case Isa::avx2:
      require(isa);
      return avx2::bound_excess(v.data(), lo.data(), hi.data(), scale.data(), v.size());
#endif
#if defined(CZWARP_HAVE_NEON)
    case Isa::neon: return neon::bound_excess(v.data(), lo.data(), hi.data(), scale.data(), v.size());
#endif
    case Isa::scalar:
      return scalar::bound_excess(v.data(), lo.data(), hi.data(), scale.data(), v.size());
    default: require(isa);
  }
  return {};
}

double dot(std::span<const double> a, std::span<const double> b) { return dot(active_isa(), a, b); }
double sum(std::span<const double> x) { return sum(active_isa(), x); }
Excess bound_excess(std::span<const double> v, std::span<const double> lo,
                    std::span<const double> hi, std::span<const double> scale) {
  return bound_excess(active_isa(), v, lo, hi, scale);
}

}  // namespace czwarp::kernels
