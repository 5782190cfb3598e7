// SPDX-License-Identifier: Apache-2.0
//
// Radial test functions u_k = phi(G(r) - k), their Hessian and Laplacian in
// an orthonormal frame, and the three L^p norms
//   ||f||_p^p = gamma_m * int |f(r)|^p sigma(r)^{m-1} dr.
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "czwarp/quadrature.hpp"
#include "czwarp/radial_geometry.hpp"
#include "czwarp/smooth.hpp"

namespace czwarp {

/// phi(s) = s * w(s), w a smooth plateau window: 1 on [delta, 1 - delta],
/// 0 outside (delta/2, 1 - delta/2).
class CutoffFunction {
 public:
  explicit CutoffFunction(double delta);

  double delta() const { return delta_; }
  /// phi, phi', phi'' at s; zero outside (0, 1).
  Jet at(double s) const;
  /// sup |phi''| over [0, 1].
  double sup_d2() const { return sup_d2_; }

 private:
  Jet window(double s) const;

  double delta_;
  double sup_d2_ = 0.0;
};

CutoffFunction build_cutoff(double delta);

struct Interval {
  double lo = 0.0, hi = 0.0;
};

class TestFunction {
 public:
  TestFunction(std::shared_ptr<const GreenFunction> green, double k, CutoffFunction cutoff);

  double k() const { return k_; }
  const CutoffFunction& cutoff() const { return cutoff_; }
  const GreenFunction& green() const { return *green_; }
  const WarpingProfile& profile() const { return green_->profile(); }
  /// [G^{-1}(k), G^{-1}(k+1)].
  Interval support_r() const { return support_; }
  /// Interior quadrature breakpoints in r: profile knots and the images of the
  /// cutoff transitions, sorted.
  const std::vector<double>& breakpoints() const { return breaks_; }
  /// The stationary points of sigma among the breakpoints; |sigma'|^p has a
  /// kink there.
  const std::vector<double>& kinks() const { return kinks_; }

  /// u, u', u'' at r; zero outside the support.
  Jet u(double r) const;

 private:
  std::shared_ptr<const GreenFunction> green_;
  double k_;
  CutoffFunction cutoff_;
  Interval support_;
  std::vector<double> breaks_;
  std::vector<double> kinks_;
};

/// Test function with the universal plateau delta.
TestFunction make_test_function(std::shared_ptr<const GreenFunction> green, double k);

Jet u_eval(const TestFunction& tf, double r);

struct HessianValue {
  double radial = 0.0;      // u''
  double tangential = 0.0;  // sigma' u' / sigma
  int multiplicity = 1;     // m - 1

  double norm() const;
  double trace() const { return radial + multiplicity * tangential; }
};

/// Hessian of a radial function with the given u-jet on a warped product
/// whose warping function has the given sigma-jet.
HessianValue hessian_of_radial(const Jet& sigma, const Jet& u, int m);

HessianValue hessian_at(const TestFunction& tf, double r);

enum class LaplacianRoute { direct, green_identity };

double laplacian_at(const TestFunction& tf, double r, LaplacianRoute route);

/// |direct - green_identity| / (|u''| + (m-1)|sigma' u'/sigma|), 0 where both vanish.
double laplacian_discrepancy(const TestFunction& tf, double r);

enum class Field { u, laplacian, hessian };

struct NormValue {
  double value = 0.0;
  double err = 0.0;
  std::size_t panels = 0;
};

/// Throws InvalidArgument unless 1 < p < inf.
void check_exponent(double p);

/// gamma_m * int_a^b |f(r)|^p sigma^{m-1} dr with the profile knots in (a, b)
/// and `extra` as breakpoints.
NormValue radial_lp_norm_pow(const WarpingProfile& profile, const Integrand& f, double a,
                             double b, double p, const QuadratureSpec& quad,
                             std::span<const double> extra = {}, unsigned workers = 1);

NormValue lp_norm_pow(const TestFunction& tf, Field field, double p, const QuadratureSpec& quad,
                      unsigned workers = 1);

/// gamma-free s-variable forms of the u and Laplacian norms:
///   int |phi|^p [sigma o G^{-1}]^{2(m-1)} ds,
///   int |phi''|^p [sigma o G^{-1}]^{2(p-1)(1-m)} ds.
NormValue s_integral_u(const TestFunction& tf, double p, const QuadratureSpec& quad,
                       unsigned workers = 1);
NormValue s_integral_laplacian(const TestFunction& tf, double p, const QuadratureSpec& quad,
                               unsigned workers = 1);

/// int_a^b |sigma'|^p dr with every profile knot as a breakpoint.
NormValue slope_integral(const WarpingProfile& profile, double a, double b, double p,
                         const QuadratureSpec& quad, unsigned workers = 1);

struct NormReport {
  double norm_u_p_pow = 0.0;
  double norm_lap_p_pow = 0.0;
  double norm_hess_p_pow = 0.0;
  double p = 2.0;
  double quadrature_error = 0.0;  // largest of the three estimates
  std::size_t panels = 0;
};

/// All three norms on one shared panel tree.
NormReport norms_report(const TestFunction& tf, double p, const QuadratureSpec& quad,
                        unsigned workers = 1);

}  // namespace czwarp
