#pragma once

// The three CLI commands. Each returns the process exit status:
// 0 ok, 1 a check or the run failed, 2 configuration error.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mhd/run_config.hpp"

namespace mhd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitConfig = 2;

/// Exit status for an error raised while running.
int exit_status(ErrorCode code);

/// Integrates the configured run, writing into the output directory:
/// timeseries.csv (t, energy, dissipation, ||div B||_2, min rho, blow-up
/// indicator), checkpoints, summary.json and MANIFEST. A lock file guards
/// the directory. On a runtime error the partial artifacts are kept and the
/// MANIFEST records the truncation.
int run_simulate(const RunConfig& cfg, std::ostream& log);

/// Runs one property suite, prints its JSON and writes verify_<suite>.json.
int run_verify(const RunConfig& cfg, const std::string& suite, std::ostream& out);

/// Prints a digest of a finished run directory.
int run_report(const std::filesystem::path& rundir, std::ostream& out);

}  // namespace mhd
