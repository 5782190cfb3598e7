// SPDX-License-Identifier: Apache-2.0
//
// Radial Green's function G(r) = int_1^r sigma^{1-m}(t) dt of a warped
// product, anchored at G(1) = 0, with its inverse and the window anchor h(k).
#pragma once

#include <memory>
#include <vector>

#include "czwarp/warping.hpp"

namespace czwarp {

/// The margin (1 - log 2) / 4 that fits a unit interval [h, h+1] inside
/// [G^{-1}(k + delta), G^{-1}(k + 1 - delta)].
inline constexpr double kUniversalDelta = 0.07671320486001367;  // (1 - ln 2) / 4

/// Integral of sigma^{1-m} over [a, b] inside one piece. Closed form on
/// lines and power laws; adaptive Gauss-Legendre elsewhere.
double piece_green_integral(const Piece& piece, int m, double a, double b);

class GreenFunction {
 public:
  /// Tabulates G at every knot of the profile in [1, r_max] plus a uniform
  /// fill no coarser than `fill_spacing`.
  GreenFunction(std::shared_ptr<const WarpingProfile> profile, double r_max,
                double fill_spacing = 0.25);

  const WarpingProfile& profile() const { return *profile_; }
  std::shared_ptr<const WarpingProfile> profile_ptr() const { return profile_; }
  double r_max() const { return r_.back(); }
  double s_max() const { return g_.back(); }
  std::size_t checkpoints() const { return r_.size(); }

  /// G(r) for 1 <= r <= r_max; OutOfRange beyond the table.
  double value(double r) const;

  /// r with |G(r) - s| <= 1e-10; OutOfRange if s > G(r_max).
  double inverse(double s) const;

  /// G'(r) = sigma^{1-m}, G''(r) = (1-m) sigma^{-m} sigma'.
  Jet jet(double r) const;

 private:
  std::shared_ptr<const WarpingProfile> profile_;
  int m_;
  std::vector<double> r_;
  std::vector<double> g_;
  std::vector<std::size_t> seg_;  // profile segment holding [r_i, r_{i+1}]
};

inline double green_value(const GreenFunction& gf, double r) { return gf.value(r); }
inline double green_inverse(const GreenFunction& gf, double s) { return gf.inverse(s); }

/// h := G^{-1}(k + delta), checked a posteriori against
/// G(h + 1) <= k + 1 - delta and h > k (WindowTooNarrow otherwise).
double find_h(const GreenFunction& gf, double k);

/// Checks the comparison envelopes at s uniform in [0, s_max]:
///   log((t+1)/2) <= G(t) <= log t,   e^s <= G^{-1}(s) <= 2 e^s - 1,
///   e^{alpha s} <= sigma(G^{-1}(s)) <= 2^alpha e^{alpha s}.
/// Violations are relative to max(1, |bound|).
BoundAudit audit_green_bounds(const GreenFunction& gf, double s_max, int samples,
                              double tol = 1e-9);

}  // namespace czwarp
