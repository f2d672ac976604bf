#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mhd/checkpoint.hpp"
#include "mhd/initial_conditions.hpp"
#include "mhd/runner.hpp"
#include "mhd/verify_suites.hpp"

using namespace mhd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mhd_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode decode_error(std::vector<unsigned char> bytes) {
  try {
    decode_checkpoint(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

State sample_state() {
  const Grid g = make_grid(2, 8);
  PhysParams p;
  InitialSpec spec;
  spec.rho_amplitude = spec.u_amplitude = spec.B_amplitude = 0.1;
  State s = random_small_state(g, p, spec);
  s.t = 0.125;
  return s;
}

}  // namespace

TEST(Checkpoint, Fnv1aReferenceValues) {
  const std::string empty, a = "a", foobar = "foobar";
  auto h = [](const std::string& s) {
    return fnv1a64({reinterpret_cast<const unsigned char*>(s.data()), s.size()});
  };
  EXPECT_EQ(h(empty), 0xcbf29ce484222325ull);
  EXPECT_EQ(h(a), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(h(foobar), 0x85944171f73967e8ull);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  const State s = sample_state();
  PhysParams p;
  p.mu = 0.123456789;
  const auto bytes = encode_checkpoint(s, p);
  const Checkpoint c = decode_checkpoint(bytes);
  EXPECT_EQ(c.header.version, kCheckpointVersion);
  EXPECT_EQ(c.header.dim, 2);
  EXPECT_EQ(c.header.points_per_axis, 8);
  EXPECT_EQ(c.header.t, 0.125);
  EXPECT_EQ(c.header.params.mu, p.mu);
  EXPECT_EQ(c.header.header_bytes + c.header.body_bytes, bytes.size());
  EXPECT_EQ(c.header.body_bytes, 8u * 64u * 5u);
  for (auto [a, b] : {std::pair{&s.rho, &c.state.rho}, {&s.u, &c.state.u}, {&s.B, &c.state.B}}) {
    ASSERT_EQ(a->values().size(), b->values().size());
    EXPECT_EQ(std::memcmp(a->values().data(), b->values().data(), a->values().size() * sizeof(double)), 0);
  }
  EXPECT_EQ(encode_checkpoint(c.state, c.header.params), bytes);
}

TEST(Checkpoint, FileRoundTrip) {
  const fs::path dir = scratch("ckpt");
  fs::create_directories(dir);
  const Grid g = make_grid(3, 8);
  PhysParams p;
  const State s = State::equilibrium(g, p);
  write_checkpoint(dir / "eq.ckpt", s, p);
  const Checkpoint c = read_checkpoint(dir / "eq.ckpt");
  EXPECT_EQ(lp_norm(c.state.rho - s.rho, kInfinity), 0.0);
  InitialSpec spec;
  spec.kind = "checkpoint";
  spec.checkpoint_path = (dir / "eq.ckpt").string();
  EXPECT_NO_THROW(make_initial_state(g, p, spec));
  try {
    make_initial_state(make_grid(3, 16), p, spec);
    FAIL() << "expected GridMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

TEST(Checkpoint, CorruptionIsDetected) {
  const auto bytes = encode_checkpoint(sample_state(), PhysParams{});
  const std::size_t header = decode_checkpoint(bytes).header.header_bytes;

  auto flipped = bytes;
  flipped[header + 100] ^= 0x01;
  EXPECT_EQ(decode_error(flipped), ErrorCode::ChecksumMismatch);

  auto cut = bytes;
  cut.resize(bytes.size() - 8);
  EXPECT_EQ(decode_error(cut), ErrorCode::TruncatedBody);

  auto garbage = bytes;
  garbage[0] = 'x';
  EXPECT_EQ(decode_error(garbage), ErrorCode::MalformedHeader);

  std::string text(bytes.begin(), bytes.begin() + header);
  const std::string key = "\"schema_version\":1";
  const auto pos = text.find(key);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, key.size(), "\"schema_version\":2");
  std::vector<unsigned char> bumped(text.begin(), text.end());
  bumped.insert(bumped.end(), bytes.begin() + header, bytes.end());
  EXPECT_EQ(decode_error(bumped), ErrorCode::VersionMismatch);
}

TEST(Config, ParsesSectionsAndOverrides) {
  const std::string text =
      "[grid]\ndim = 2\npoints = 16\n[physics]\nmu = 0.2\n[initial]\nkind = single_mode\nmode = 1,2\n"
      "[time]\ndt = 0.01\n[output]\ndir = out\n";
  const RunConfig c = parse_run_config(text, {"physics.mu=0.3", "time.t_end=0.5"});
  EXPECT_EQ(c.dim, 2);
  EXPECT_EQ(c.points, 16);
  EXPECT_EQ(c.params.mu, 0.3);
  EXPECT_EQ(c.t_end, 0.5);
  EXPECT_EQ(c.initial.mode, (IVec{1, 2, 0}));
  EXPECT_EQ(c.output_dir, "out");
}

TEST(Config, RejectsBadInput) {
  auto code = [](const std::string& text, std::vector<std::string> o = {}) {
    try {
      parse_run_config(text, o);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoError;
  };
  EXPECT_EQ(code("[grid]\ncolour = blue\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code("[grid]\ndim = two\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code("[grid]\ndim = 4\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code("[time]\ndt = -1\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code("", {"grid.points"}), ErrorCode::ConfigError);
  EXPECT_EQ(code("", {"nosuch.key=1"}), ErrorCode::ConfigError);
  EXPECT_EQ(code("[diagnostics]\npicard = true\n[grid]\ndim = 2\n"), ErrorCode::ConfigError);
  EXPECT_EQ(exit_status(ErrorCode::ConfigError), kExitConfig);
  EXPECT_EQ(exit_status(ErrorCode::CFLViolation), kExitFailed);
}

TEST(Config, OutputRootFromEnvironment) {
  RunConfig c;
  c.output_dir = "rel";
  ::setenv("MHD_OUTPUT_ROOT", "/tmp/root", 1);
  EXPECT_EQ(resolve_output_dir(c), fs::path("/tmp/root/rel"));
  c.output_dir = "/abs";
  EXPECT_EQ(resolve_output_dir(c), fs::path("/abs"));
  ::unsetenv("MHD_OUTPUT_ROOT");
}

TEST(Runner, EquilibriumRunHasConstantRows) {
  const fs::path dir = scratch("equilibrium");
  RunConfig c = parse_run_config("[grid]\ndim = 2\npoints = 8\n[time]\ndt = 0.05\nt_end = 0.2\ncheckpoint_every = 2\n",
                                 {"output.dir=" + dir.string()});
  std::ostringstream log;
  ASSERT_EQ(run_simulate(c, log), kExitOk);
  std::ifstream csv(dir / "timeseries.csv");
  std::string header, line;
  std::getline(csv, header);
  EXPECT_EQ(header, "step,t,energy,dissipation,div_b_l2,min_rho,blowup");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::stringstream ss(line);
    std::string step, t, rest;
    std::getline(ss, step, ',');
    std::getline(ss, t, ',');
    std::getline(ss, rest);
    EXPECT_EQ(rest, "0,0,0,1,1");
  }
  EXPECT_EQ(rows, 5);
  for (const char* f : {"checkpoint_000000.ckpt", "checkpoint_000002.ckpt", "checkpoint_000004.ckpt",
                        "checkpoint_final.ckpt", "summary.json", "MANIFEST"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_FALSE(fs::exists(dir / ".lock"));
  EXPECT_EQ(slurp(dir / "MANIFEST").rfind("status complete\n", 0), 0u);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(summary["status"], "ok");
  EXPECT_EQ(summary["diagnostics"]["balance"]["ratio_to_C0"], "undefined");

  std::ostringstream rep;
  EXPECT_EQ(run_report(dir, rep), kExitOk);
  EXPECT_NE(rep.str().find("status: ok"), std::string::npos);
}

TEST(Runner, CflViolationKeepsPartialArtifacts) {
  const fs::path dir = scratch("cfl");
  const Grid g = make_grid(2, 32);
  PhysParams p;
  const double lim = cfl_limit(single_mode_state(g, p, "u", {1, 1, 0}, 0.5), p, 0.4);
  std::ostringstream dt;
  dt.precision(17);
  dt << 10 * lim;
  RunConfig c = parse_run_config(
      "[grid]\ndim = 2\npoints = 32\n[initial]\nkind = single_mode\nfield = u\nmode = 1,1\namplitude = 0.5\n",
      {"time.dt=" + dt.str(), "time.t_end=1", "output.dir=" + dir.string()});
  std::ostringstream log;
  EXPECT_EQ(run_simulate(c, log), kExitFailed);
  EXPECT_NE(log.str().find("CFL bound"), std::string::npos);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(summary["status"], "error");
  EXPECT_EQ(summary["error_code"], "CFLViolation");
  const std::string manifest = slurp(dir / "MANIFEST");
  EXPECT_EQ(manifest.rfind("status truncated\nreason CFLViolation\n", 0), 0u);
  EXPECT_NE(manifest.find("file timeseries.csv"), std::string::npos);
}

TEST(Runner, LockedDirectoryIsRefused) {
  const fs::path dir = scratch("locked");
  fs::create_directories(dir);
  std::ofstream(dir / ".lock") << "";
  RunConfig c = parse_run_config("[grid]\ndim = 2\npoints = 8\n", {"output.dir=" + dir.string()});
  std::ostringstream log;
  try {
    run_simulate(c, log);
    FAIL() << "expected IoError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(Runner, RepeatedRunsAreByteIdentical) {
  const std::string cfg =
      "[grid]\ndim = 2\npoints = 16\n[initial]\nkind = random\nseed = 42\n[time]\ndt = 0.01\nt_end = 0.05\n"
      "checkpoint_every = 2\n";
  std::string csv[2], ck[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path dir = scratch("det" + std::to_string(i));
    std::ostringstream log;
    ASSERT_EQ(run_simulate(parse_run_config(cfg, {"output.dir=" + dir.string()}), log), kExitOk);
    csv[i] = slurp(dir / "timeseries.csv");
    ck[i] = slurp(dir / "checkpoint_000002.ckpt") + slurp(dir / "checkpoint_final.ckpt");
  }
  EXPECT_EQ(csv[0], csv[1]);
  EXPECT_EQ(ck[0], ck[1]);
}

TEST(Verify, SuitesReportChecks) {
  RunConfig c = parse_run_config("[grid]\ndim = 2\npoints = 16\n[verify]\nsamples = 3\n");
  const VerifyReport lp = run_suite(c, "lp");
  EXPECT_TRUE(lp.all_pass());
  EXPECT_EQ(lp.checks.size(), 3u);
  const auto j = nlohmann::json::parse(to_json(lp));
  EXPECT_EQ(j["suite"], "lp");
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_THROW(run_suite(c, "nope"), Error);
}
