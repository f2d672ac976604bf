// mhdspec: simulate, verify and report for the periodic compressible MHD harness.
//
//   mhdspec simulate run.ini [--set section.key=value ...]
//   mhdspec verify run.ini --suite lp|lagrangian|picard|elliptic|energy [--set ...]
//   mhdspec report <rundir>
//
// Relative output directories are placed under $MHD_OUTPUT_ROOT when set.
// Exit status: 0 ok, 1 check or run failure, 2 configuration error.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mhd/runner.hpp"
#include "mhd/verify_suites.hpp"

namespace {

int fail(const std::string& code, const std::string& message, int status) {
  nlohmann::json j = {{"status", "error"}, {"error_code", code}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral compressible MHD simulator and verification harness"};
  app.require_subcommand(1);

  std::string config_path, suite, rundir;
  std::vector<std::string> overrides;

  auto* sim = app.add_subcommand("simulate", "Integrate a configured run and write its artifacts");
  sim->add_option("config", config_path, "INI configuration file")->required();
  sim->add_option("--set", overrides, "Override a key, section.key=value (repeatable)");

  auto* ver = app.add_subcommand("verify", "Run a property suite and emit a JSON report");
  ver->add_option("config", config_path, "INI configuration file")->required();
  ver->add_option("--suite", suite, "Suite name")->required()->check(CLI::IsMember(mhd::suite_names()));
  ver->add_option("--set", overrides, "Override a key, section.key=value (repeatable)");

  auto* rep = app.add_subcommand("report", "Summarize a finished run directory");
  rep->add_option("rundir", rundir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : mhd::kExitConfig;
  }

  try {
    if (*rep) return mhd::run_report(rundir, std::cout);
    const mhd::RunConfig cfg = mhd::load_run_config(config_path, overrides);
    if (*sim) return mhd::run_simulate(cfg, std::cout);
    return mhd::run_verify(cfg, suite, std::cout);
  } catch (const mhd::Error& e) {
    return fail(std::string(mhd::to_string(e.code())), e.what(), mhd::exit_status(e.code()));
  } catch (const std::exception& e) {
    return fail("IoError", e.what(), mhd::kExitFailed);
  }
}
