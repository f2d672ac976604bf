#include "mhd/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mhd/checkpoint.hpp"
#include "mhd/energy_monitor.hpp"
#include "mhd/lagrangian.hpp"
#include "mhd/littlewood_paley.hpp"
#include "mhd/local_solver.hpp"
#include "mhd/verify_suites.hpp"

namespace mhd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) : path_(dir / ".lock") {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (f == nullptr) throw Error(ErrorCode::IoError, "run directory " + dir.string() + " is locked by another writer");
    std::fclose(f);
  }
  ~DirectoryLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  fs::path path_;
};

std::string fmt17(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

std::string checkpoint_name(long step) {
  std::ostringstream s;
  s << "checkpoint_" << std::setw(6) << std::setfill('0') << step << ".ckpt";
  return s.str();
}

json picard_json(const PicardReport& r) {
  const BallConditions& c = r.conditions;
  return {{"iterations", r.iterations},
          {"converged", r.converged},
          {"delta_norms", r.delta_norms},
          {"ratios", r.ratios},
          {"iterate_norms", r.iterate_norms},
          {"ball_distance", r.ball_distance},
          {"existence_time", r.existence_time},
          {"momentum_residual", r.momentum_residual},
          {"induction_residual", r.induction_residual},
          {"gauge_adj", r.gauge_adj},
          {"gauge_A", r.gauge_A},
          {"conditions",
           {{"a0_norm", c.a0_norm},
            {"C_rho_m", c.C_rho_m},
            {"C_rho_m_T", c.C_rho_m_T},
            {"T_over_R2", c.T_over_R2},
            {"a0_uL", c.a0_uL},
            {"uL_size", c.uL_size},
            {"BL_size", c.BL_size},
            {"eta_lhs", c.eta_lhs},
            {"density_R_bound", c.density_R_bound},
            {"grad_v_integral", c.grad_v_integral},
            {"ball_ok", c.ball_ok},
            {"all_pass", c.all_pass}}}};
}

json diagnostics_json(const RunConfig& cfg, const Trajectory& traj) {
  json d;
  const EnergyReport er = energy_report(traj, cfg.params, cfg.eps0, cfg.blowup_q);
  d["C0"] = er.C0;
  d["balance"] = {{"max_step_residual", er.balance.max_step_residual},
                  {"accumulated_residual", er.balance.accumulated_residual},
                  {"estimate_lhs", er.balance.estimate_lhs},
                  {"ratio_to_C0", er.balance.ratio_to_c0 ? json(*er.balance.ratio_to_c0) : json("undefined")}};
  if (cfg.hoff && traj.snapshots.size() >= 3) {
    d["A1"] = er.hoff.A1;
    d["A2"] = er.hoff.A2;
    d["E"] = er.hoff.E_at_T;
    d["E_running_sup"] = er.hoff.E_sup;
    d["H"] = er.hoff.H;
    d["smallness_flag"] = er.smallness_flag;
  }
  const DyadicFamily fam = build_dyadic_family(traj.grid());
  d["besov_u_final"] = besov_norm(traj.snapshots.back().u, fam, {cfg.besov_s, cfg.besov_p, 1.0, {}});
  if (cfg.lagrangian && traj.snapshots.size() >= 3) {
    const auto maps = compute_flow_maps(traj);
    double mass = 0.0;
    for (std::size_t n = 1; n + 1 < maps.size(); ++n) mass = std::max(mass, mass_residual(traj, maps, n));
    const TransformResiduals tr = transform_residuals(traj.snapshots.back(), maps.back(), cfg.params);
    json t;
    for (int i = 0; i < TransformResiduals::kCount; ++i) t[TransformResiduals::name(i)] = tr.relative[i];
    d["lagrangian"] = {{"mass_residual", mass}, {"transform_residuals", t}};
  }
  if (cfg.picard) {
    const State& s0 = traj.snapshots.front();
    try {
      d["picard"] = picard_json(picard_run(s0.rho, s0.u, s0.B, cfg.params, cfg.picard_cfg).report);
    } catch (const PicardDivergence& e) {
      d["picard"] = picard_json(e.report());
      d["picard"]["error"] = e.what();
    }
  }
  return d;
}

}  // namespace

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::GridMismatch:
      return kExitConfig;
    default:
      return kExitFailed;
  }
}

int run_simulate(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir = resolve_output_dir(cfg);
  fs::create_directories(dir);
  DirectoryLock lock(dir);

  std::vector<std::string> files;
  std::ofstream csv(dir / "timeseries.csv", std::ios::binary | std::ios::trunc);
  if (!csv) throw Error(ErrorCode::IoError, "cannot write timeseries.csv in " + dir.string());
  files.push_back("timeseries.csv");
  csv << "step,t,energy,dissipation,div_b_l2,min_rho,blowup\n";
  auto row = [&](long step, const State& s) {
    csv << step << ',' << fmt17(s.t) << ',' << fmt17(total_energy(s, cfg.params)) << ','
        << fmt17(dissipation(s, cfg.params)) << ',' << fmt17(div_b_norm(s)) << ','
        << fmt17(kernels::min_value(s.rho.component(0))) << ',' << fmt17(blowup_indicator(s, cfg.blowup_q)) << '\n';
  };
  auto checkpoint = [&](const std::string& name, const State& s) {
    write_checkpoint(dir / name, s, cfg.params);
    files.push_back(name);
  };

  json summary;
  summary["config"] = {{"dim", cfg.dim}, {"points", cfg.points}, {"dt", cfg.dt}, {"t_end", cfg.t_end},
                       {"initial", cfg.initial.kind}, {"seed", cfg.initial.seed}};
  std::string manifest_status = "complete";
  int status = kExitOk;
  Trajectory traj;
  traj.params = cfg.params;
  long step = 0;
  try {
    State s = make_initial_state(cfg.grid(), cfg.params, cfg.initial);
    validate_state(s);
    const double t0 = s.t;
    row(0, s);
    traj.snapshots.push_back(s);
    if (cfg.checkpoint_every > 0) checkpoint(checkpoint_name(0), s);
    StepperConfig sc;
    sc.cfl_factor = cfg.cfl;
    const double t_end = t0 + cfg.t_end;
    for (step = 1;; ++step) {
      const double target = std::min(t_end, t0 + static_cast<double>(step) * cfg.dt);
      const double h = target - s.t;
      if (h <= 1e-12 * cfg.dt) break;
      s = step_etdrk2(s, h, cfg.params, sc);
      s.t = target;
      const bool last = target >= t_end;
      if (last || step % cfg.snapshot_every == 0) {
        row(step, s);
        traj.snapshots.push_back(s);
      }
      if (cfg.checkpoint_every > 0 && step % cfg.checkpoint_every == 0) checkpoint(checkpoint_name(step), s);
      if (last) break;
    }
    checkpoint("checkpoint_final.ckpt", s);
    csv.flush();
    summary["diagnostics"] = diagnostics_json(cfg, traj);
    summary["status"] = "ok";
    summary["steps"] = step;
    summary["t_final"] = s.t;
  } catch (const Error& e) {
    status = exit_status(e.code());
    manifest_status = "truncated";
    summary["status"] = "error";
    summary["error_code"] = std::string(to_string(e.code()));
    summary["message"] = e.what();
    summary["failed_step"] = step;
    log << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
  }
  csv.close();
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  files.push_back("summary.json");

  std::ostringstream manifest;
  manifest << "status " << manifest_status << "\n";
  if (status != kExitOk) manifest << "reason " << summary["error_code"].get<std::string>() << "\n";
  for (const std::string& f : files) manifest << "file " << f << " " << fs::file_size(dir / f) << "\n";
  write_text(dir / "MANIFEST", manifest.str());
  if (status == kExitOk) log << "run complete: " << step << " steps, artifacts in " << dir.string() << "\n";
  return status;
}

int run_verify(const RunConfig& cfg, const std::string& suite, std::ostream& out) {
  const VerifyReport r = run_suite(cfg, suite);
  const std::string text = to_json(r);
  out << text << "\n";
  const fs::path dir = resolve_output_dir(cfg);
  fs::create_directories(dir);
  write_text(dir / ("verify_" + suite + ".json"), text + "\n");
  return r.all_pass() ? kExitOk : kExitFailed;
}

int run_report(const fs::path& rundir, std::ostream& out) {
  const fs::path path = rundir / "summary.json";
  std::ifstream in(path);
  if (!in) {
    out << "no summary.json in " << rundir.string() << "\n";
    return kExitConfig;
  }
  json s;
  try {
    in >> s;
  } catch (const json::exception& e) {
    out << "unreadable summary.json: " << e.what() << "\n";
    return kExitConfig;
  }
  const std::string status = s.value("status", "unknown");
  out << "status: " << status << "\n";
  if (status != "ok") {
    out << "error: " << s.value("error_code", "?") << ": " << s.value("message", "") << "\n";
    return kExitFailed;
  }
  out << "steps: " << s.value("steps", 0L) << ", t_final: " << fmt17(s.value("t_final", 0.0)) << "\n";
  const json& d = s["diagnostics"];
  for (const char* key : {"C0", "A1", "A2", "E", "E_running_sup", "H", "besov_u_final"}) {
    if (d.contains(key)) out << key << ": " << fmt17(d[key].get<double>()) << "\n";
  }
  if (d.contains("balance")) {
    out << "energy balance: max step residual " << fmt17(d["balance"]["max_step_residual"].get<double>())
        << ", accumulated " << fmt17(d["balance"]["accumulated_residual"].get<double>()) << "\n";
  }
  if (d.contains("picard")) {
    out << "picard: " << d["picard"]["iterations"] << " iterations, converged "
        << d["picard"]["converged"] << ", conditions pass " << d["picard"]["conditions"]["all_pass"] << "\n";
  }
  return kExitOk;
}

}  // namespace mhd
