#pragma once

// Run configuration: an INI file with flat sections, overridable by
// "section.key=value" strings (overrides win).

#include <filesystem>
#include <string>
#include <vector>

#include "mhd/initial_conditions.hpp"
#include "mhd/local_solver.hpp"

namespace mhd {

struct RunConfig {
  // [grid]
  int dim = 3;
  int points = 32;
  double period = 6.283185307179586;
  // [physics]
  PhysParams params;
  // [initial]
  InitialSpec initial;
  // [time]
  double dt = 1e-3;
  double t_end = 0.1;
  int snapshot_every = 1;
  /// Write a checkpoint every this many steps; 0 writes only the final state.
  int checkpoint_every = 0;
  double cfl = 0.4;
  // [diagnostics]
  bool hoff = true;
  double eps0 = 1e-2;
  double blowup_q = 6.0;
  double besov_s = 0.0;
  double besov_p = 2.0;
  bool lagrangian = false;
  bool picard = false;
  // [picard]
  PicardConfig picard_cfg;
  // [verify]
  int verify_samples = 20;
  // [output]
  std::string output_dir = "run";

  Grid grid() const;
  /// Throws ConfigError on any inconsistent value.
  void validate() const;
};

/// Parses INI text. Unknown sections or keys are rejected.
RunConfig parse_run_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// output_dir, resolved against $MHD_OUTPUT_ROOT when it is relative and the
/// variable is set.
std::filesystem::path resolve_output_dir(const RunConfig& cfg);

}  // namespace mhd
