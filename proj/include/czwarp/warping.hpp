// SPDX-License-Identifier: Apache-2.0
//
// Warping functions for the rotationally symmetric metric
//   g = dr^2 + sigma(r)^2 can^{m-1}.
//
// A profile is an ordered list of closed-form pieces tiling [0, inf): a
// quintic cap on [0, 1], the strip-centred power law (t + 1/2)^alpha on
// [1, inf), and, inside each sawtooth window, straight tooth lines joined by
// C-infinity blends. All evaluation is exact arithmetic of the piece formula.
#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "czwarp/quadrature.hpp"
#include "czwarp/smooth.hpp"

namespace czwarp {

struct ManifoldConfig {
  int m = 2;
  double alpha = 1.0;    // 1 / (m - 1)
  double gamma_m = 0.0;  // area of the unit (m-1)-sphere

  static ManifoldConfig make(int m);
};

/// y0 + slope * (t - t0), anchored at t0 to avoid cancellation far from 0.
struct Line {
  double t0 = 0.0, y0 = 0.0, slope = 0.0;
  Jet at(double t) const;
  Jet at(double origin, double offset) const;
};

/// (t + shift)^exponent.
struct PowerLaw {
  double shift = 0.0, exponent = 1.0;
  Jet at(double t) const;
  Jet at(double origin, double offset) const;
};

/// c0 + c1 t + ... + c5 t^5.
struct Polynomial {
  std::array<double, 6> c{};
  Jet at(double t) const;
  Jet at(double origin, double offset) const { return at(origin + offset); }
};

using Carrier = std::variant<Line, PowerLaw>;
Jet eval_carrier(const Carrier& c, double t);
Jet eval_carrier(const Carrier& c, double origin, double offset);

/// (1 - s(x)) from + s(x) to with x = (t - a) / (b - a) and s the smooth step;
/// a convex combination, so the value stays between the two carriers.
struct Blend {
  Carrier from, to;
  double a = 0.0, b = 1.0;
  double from_a = 0.0, to_a = 0.0;  // carrier values at a

  static Blend make(Carrier from, Carrier to, double a, double b);
  Jet at(double t) const;
  Jet at(double origin, double offset) const;
  double value(double origin, double offset) const;
};

using Piece = std::variant<Polynomial, Line, PowerLaw, Blend>;

struct Segment {
  double lo = 0.0;
  double hi = 0.0;  // +inf for the last segment
  Piece piece;
};

Jet eval_piece(const Piece& p, double t);
/// Same as eval_piece(p, origin + offset) without rounding the sum first.
Jet eval_piece(const Piece& p, double origin, double offset);
/// sigma alone at origin + offset.
double eval_piece_value(const Piece& p, double origin, double offset);

/// [lo, hi] r-range replaced by the pieces of one window.
struct Footprint {
  double lo = 0.0, hi = 0.0;
};

struct SawtoothWindow {
  double z = 0.0;          // footprint start
  double width = 0.0;      // footprint length
  int n_teeth = 1;
  double step = 0.0;       // width / (2 n_teeth)
  double amplitude = 0.0;  // tooth height
  double base = 0.0;       // sigma at the footprint start
  double smooth_halfwidth = 0.0;
  /// Per-tooth drift along the diagonal: 1 for m = 2 (teeth climb the unit
  /// cube), 0 for m >= 3 (symmetric teeth inside the small cube).
  double drift = 0.0;

  double rise_slope() const { return (drift * step + amplitude) / step; }
  double fall_slope() const { return (drift * step - amplitude) / step; }
  /// Smallest |slope| over the tooth lines.
  double min_slope() const;
};

class WarpingProfile {
 public:
  /// Tiles [0, inf) with the given segments; validates contiguity. Intended
  /// for fixtures and deserialization; builders below are the normal route.
  static WarpingProfile from_segments(ManifoldConfig config, std::vector<Segment> segments,
                                      std::vector<SawtoothWindow> windows = {},
                                      std::optional<std::array<double, 6>> cap = std::nullopt);

  const ManifoldConfig& config() const { return config_; }
  const std::vector<Segment>& segments() const { return segments_; }
  /// Interior piece boundaries, strictly increasing.
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<SawtoothWindow>& windows() const { return windows_; }
  /// Extent of the replaced pieces of each window, parallel to windows().
  const std::vector<Footprint>& extents() const { return extents_; }
  const std::optional<std::array<double, 6>>& cap_coefficients() const { return cap_; }

  /// Index of the segment containing t (a knot belongs to the piece on its right).
  std::size_t segment_index(double t) const;

  /// sigma, sigma', sigma'' at t >= 0.
  Jet eval(double t) const;
  Jet eval(double origin, double offset) const;

  /// Knots strictly inside (a, b).
  std::span<const double> knots_in(double a, double b) const;

  /// Zeros of sigma' strictly inside (a, b). They sit inside corner blends,
  /// where |sigma'|^p has a kink for non-even p.
  std::vector<double> stationary_points_in(double a, double b) const;

  /// knots_in(a, b) and stationary_points_in(a, b), merged.
  std::vector<double> breakpoints_in(double a, double b) const;

 private:
  ManifoldConfig config_;
  std::vector<Segment> segments_;
  std::vector<double> knots_;
  std::vector<SawtoothWindow> windows_;
  std::vector<Footprint> extents_;
  std::optional<std::array<double, 6>> cap_;

  friend WarpingProfile insert_sawtooth(const WarpingProfile&, const SawtoothWindow&);
};

/// Windowless profile: quintic cap on [0, 1] with sigma(0) = 0, sigma'(0) = 1,
/// sigma''(0) = 0 and C2 contact at t = 1 with (t + 1/2)^alpha on [1, inf).
WarpingProfile build_base_profile(const ManifoldConfig& config);

/// Coefficients of the cap polynomial for the given alpha.
std::array<double, 6> cap_coefficients(double alpha);

/// Default corner smoothing half-width for a given tooth step.
double default_smooth_halfwidth(double step);

/// Places the oscillation cube for the window anchored at h.
/// m = 2: unit cube [h, h+1]^2, teeth climbing the diagonal.
/// m >= 3: cube of side eta = ((h+2)^a - (h+1)^a) / 10 with lower-left corner
/// (h, (h + eta)^a). Throws CubeDoesNotFit if the cube leaves the strip.
SawtoothWindow plan_window(const ManifoldConfig& config, double h, int n_teeth,
                           std::optional<double> smooth_halfwidth = std::nullopt);

/// Side of the m >= 3 cube at anchor h.
double cube_side(double alpha, double h);

/// Replaces sigma around the window footprint by the juxtaposed teeth. A
/// virtual lead-in and lead-out tooth line connect the teeth to the base
/// power law; every corner is blended over [c - w, c + w].
WarpingProfile insert_sawtooth(const WarpingProfile& profile, const SawtoothWindow& window);

/// Checks t^alpha <= sigma(t) <= (t+1)^alpha on uniform samples plus every
/// knot in [t_min, t_max]. Violations are relative to the bound value.
BoundAudit audit_strip(const WarpingProfile& profile, double t_min, double t_max, int samples,
                       double tol = 1e-12);

}  // namespace czwarp
