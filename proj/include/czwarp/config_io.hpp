// SPDX-License-Identifier: Apache-2.0
//
// JSON run files and JSON renderings of reports, audits and profiles.
#pragma once

#include <string>

#include "czwarp/czcheck.hpp"

namespace czwarp {

/// Everything a run file may set. Absent keys keep the defaults below.
struct RunConfig {
  ExperimentConfig experiment;
  int n_max = 1 << 15;
  SweepGrid grid;            // empty lists fall back to the experiment's value
  unsigned sweep_workers = 1;
  std::string csv_path;      // sweep table
  std::string profile_path;  // build: profile JSON
  std::string samples_path;  // build: sampled sigma CSV
  int samples = 2000;        // build: sample count
};

/// Parses a run file; unknown keys and ill-typed values raise InvalidArgument.
RunConfig parse_run_config(const std::string& json_text);
std::string run_config_to_json(const RunConfig& cfg);

/// Fills empty grid axes from the experiment fields.
SweepGrid resolved_grid(const RunConfig& cfg);

std::string to_json(const BoundAudit& audit);
std::string to_json(const CZReport& report);
std::string to_json(const SearchResult& result);
std::string profile_to_json(const WarpingProfile& profile);

}  // namespace czwarp
