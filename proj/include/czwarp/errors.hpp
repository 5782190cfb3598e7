// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace czwarp {

enum class ErrorKind {
  invalid_argument,
  cube_does_not_fit,
  overlapping_window,
  footprint_out_of_range,
  out_of_range,
  window_too_narrow,
  invalid_delta,
  not_converged,
  audit_failed,
  not_found,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the quadrature when a panel cannot meet its error budget.
class NotConverged : public Error {
 public:
  NotConverged(double lo, double hi, double err, double budget);

  double panel_lo() const noexcept { return lo_; }
  double panel_hi() const noexcept { return hi_; }

 private:
  double lo_, hi_;
};

}  // namespace czwarp
