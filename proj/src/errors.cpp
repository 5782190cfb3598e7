// SPDX-License-Identifier: Apache-2.0
#include "czwarp/errors.hpp"

#include <cstdio>

namespace czwarp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::cube_does_not_fit: return "CubeDoesNotFit";
    case ErrorKind::overlapping_window: return "OverlappingWindow";
    case ErrorKind::footprint_out_of_range: return "FootprintOutOfRange";
    case ErrorKind::out_of_range: return "OutOfRange";
    case ErrorKind::window_too_narrow: return "WindowTooNarrow";
    case ErrorKind::invalid_delta: return "InvalidDelta";
    case ErrorKind::not_converged: return "NotConverged";
    case ErrorKind::audit_failed: return "AuditFailed";
    case ErrorKind::not_found: return "NotFound";
  }
  return "Unknown";
}

namespace {
std::string describe_panel(double lo, double hi, double err, double budget) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "panel [%.17g, %.17g] error %.3e exceeds budget %.3e", lo, hi,
                err, budget);
  return buf;
}
}  // namespace

NotConverged::NotConverged(double lo, double hi, double err, double budget)
    : Error(ErrorKind::not_converged, describe_panel(lo, hi, err, budget)), lo_(lo), hi_(hi) {}

}  // namespace czwarp
