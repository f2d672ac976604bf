#include "mhd/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace mhd {

namespace {

namespace pt = boost::property_tree;

using Setter = void (*)(RunConfig&, const std::string&);

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  std::string rest;
  if (in.fail() || (in >> rest)) throw Error(ErrorCode::ConfigError, "bad value '" + text + "' for " + key);
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw Error(ErrorCode::ConfigError, "bad boolean '" + text + "' for " + key);
}

IVec parse_mode(const std::string& key, const std::string& text) {
  IVec k{0, 0, 0};
  std::istringstream in(text);
  std::string part;
  int i = 0;
  while (std::getline(in, part, ',')) {
    if (i >= 3) throw Error(ErrorCode::ConfigError, key + " has more than three entries");
    k[i++] = parse_value<int>(key, part);
  }
  if (i == 0) throw Error(ErrorCode::ConfigError, key + " is empty");
  return k;
}

#define MHD_NUM(section, key, member)                                                           \
  {                                                                                             \
    section "." key, [](RunConfig& c, const std::string& v) {                                   \
      c.member = parse_value<std::decay_t<decltype(c.member)>>(section "." key, v);             \
    }                                                                                           \
  }

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      MHD_NUM("grid", "dim", dim),
      MHD_NUM("grid", "points", points),
      MHD_NUM("grid", "period", period),
      MHD_NUM("physics", "mu", params.mu),
      MHD_NUM("physics", "lambda", params.lambda),
      MHD_NUM("physics", "nu", params.nu),
      MHD_NUM("physics", "pressure_A", params.pressure_A),
      MHD_NUM("physics", "pressure_gamma", params.pressure_gamma),
      MHD_NUM("physics", "rho_bar", params.rho_bar),
      MHD_NUM("physics", "c0_floor", params.c0_floor),
      {"initial.kind", [](RunConfig& c, const std::string& v) { c.initial.kind = v; }},
      {"initial.field", [](RunConfig& c, const std::string& v) { c.initial.field = v; }},
      {"initial.mode", [](RunConfig& c, const std::string& v) { c.initial.mode = parse_mode("initial.mode", v); }},
      MHD_NUM("initial", "amplitude", initial.amplitude),
      MHD_NUM("initial", "rho_amplitude", initial.rho_amplitude),
      MHD_NUM("initial", "u_amplitude", initial.u_amplitude),
      MHD_NUM("initial", "B_amplitude", initial.B_amplitude),
      MHD_NUM("initial", "band_lo", initial.band_lo),
      MHD_NUM("initial", "band_hi", initial.band_hi),
      MHD_NUM("initial", "seed", initial.seed),
      {"initial.checkpoint", [](RunConfig& c, const std::string& v) { c.initial.checkpoint_path = v; }},
      MHD_NUM("time", "dt", dt),
      MHD_NUM("time", "t_end", t_end),
      MHD_NUM("time", "snapshot_every", snapshot_every),
      MHD_NUM("time", "checkpoint_every", checkpoint_every),
      MHD_NUM("time", "cfl", cfl),
      {"diagnostics.hoff", [](RunConfig& c, const std::string& v) { c.hoff = parse_bool("diagnostics.hoff", v); }},
      MHD_NUM("diagnostics", "eps0", eps0),
      MHD_NUM("diagnostics", "blowup_q", blowup_q),
      MHD_NUM("diagnostics", "besov_s", besov_s),
      MHD_NUM("diagnostics", "besov_p", besov_p),
      {"diagnostics.lagrangian",
       [](RunConfig& c, const std::string& v) { c.lagrangian = parse_bool("diagnostics.lagrangian", v); }},
      {"diagnostics.picard", [](RunConfig& c, const std::string& v) { c.picard = parse_bool("diagnostics.picard", v); }},
      MHD_NUM("picard", "R", picard_cfg.R),
      MHD_NUM("picard", "T", picard_cfg.T),
      MHD_NUM("picard", "dt", picard_cfg.dt),
      MHD_NUM("picard", "p", picard_cfg.p),
      MHD_NUM("picard", "n_max", picard_cfg.n_max),
      MHD_NUM("picard", "tol", picard_cfg.tol),
      MHD_NUM("picard", "eta", picard_cfg.eta),
      MHD_NUM("picard", "small_c", picard_cfg.small_c),
      MHD_NUM("picard", "c_bar", picard_cfg.c_bar),
      {"picard.m", [](RunConfig& c, const std::string& v) { c.picard_cfg.m = parse_value<int>("picard.m", v); }},
      MHD_NUM("verify", "samples", verify_samples),
      {"output.dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
  };
  return table;
}

#undef MHD_NUM

void apply(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw Error(ErrorCode::ConfigError, "unknown configuration key '" + key + "'");
  it->second(cfg, value);
}

}  // namespace

Grid RunConfig::grid() const { return make_grid(dim, points, period); }

void RunConfig::validate() const {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw Error(ErrorCode::ConfigError, msg);
  };
  check(dim >= 1 && dim <= 3, "grid.dim must be 1, 2 or 3");
  check(points >= 4 && points % 2 == 0, "grid.points must be even and >= 4");
  check(period > 0.0, "grid.period must be positive");
  try {
    params.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  check(dt > 0.0 && t_end >= 0.0, "time.dt must be positive and time.t_end nonnegative");
  check(snapshot_every >= 1 && checkpoint_every >= 0, "time.snapshot_every >= 1 and time.checkpoint_every >= 0");
  check(cfl > 0.0, "time.cfl must be positive");
  check(blowup_q >= 6.0, "diagnostics.blowup_q must be >= 6");
  check(besov_p >= 1.0, "diagnostics.besov_p must be >= 1");
  check(eps0 > 0.0, "diagnostics.eps0 must be positive");
  check(verify_samples >= 1, "verify.samples must be >= 1");
  check(!output_dir.empty(), "output.dir must not be empty");
  if (initial.kind == "checkpoint") {
    check(std::filesystem::exists(initial.checkpoint_path),
          "initial.checkpoint '" + initial.checkpoint_path + "' does not exist");
  }
  if (picard) {
    try {
      picard_cfg.validate(dim);
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, e.what());
    }
  }
}

RunConfig parse_run_config(const std::string& text, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("config parse error: ") + e.what());
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw Error(ErrorCode::ConfigError, "key '" + section + "' outside any section");
    for (const auto& [key, value] : body) apply(cfg, section + "." + key, value.data());
  }
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::ConfigError, "override '" + o + "' is not of the form section.key=value");
    }
    apply(cfg, o.substr(0, eq), o.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), overrides);
}

std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
  std::filesystem::path p(cfg.output_dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("MHD_OUTPUT_ROOT"); root != nullptr && *root != '\0') {
      return std::filesystem::path(root) / p;
    }
  }
  return p;
}

}  // namespace mhd
