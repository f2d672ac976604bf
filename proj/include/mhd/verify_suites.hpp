#pragma once

// Property suites run by `mhdspec verify`: each produces named checks with a
// measured value, a tolerance and a verdict.

#include <string>
#include <vector>

#include "mhd/run_config.hpp"

namespace mhd {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Informational checks are reported but do not decide the suite verdict.
  bool gating = true;
};

struct VerifyReport {
  std::string suite;
  std::vector<Check> checks;
  bool all_pass() const;
};

/// lp | lagrangian | picard | elliptic | energy
const std::vector<std::string>& suite_names();

/// Throws ConfigError for an unknown suite.
VerifyReport run_suite(const RunConfig& cfg, const std::string& suite);

/// The suite report as a JSON document.
std::string to_json(const VerifyReport& r);

}  // namespace mhd
