#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "hotcavity/io.hpp"
#include "hotcavity/oracles.hpp"
#include "hotcavity/scaling.hpp"
#include "hotcavity/semiclassical.hpp"
#include "hotcavity/steady_state.hpp"

namespace hotcavity::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

struct Flags {
  std::optional<double> gamma, nu, delta, g, kappa, omega_rec;
  std::optional<int> m;
  std::optional<std::string> config;
  std::uint64_t seed = 1;
  std::string out = ".";
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::string gamma_eff_mode = "gamma";
  std::string friction_form = "exact";
  std::string dsin_form = "derived";
  double geom_factor = 1.0;
  bool quick = false;
  int threads = 1;
  // simulate
  double v_scale = 0.2;
  double t_end = 2000.0;
  int samples = 401;
  bool pin_all = false;
  // figure / sweep
  std::string preset;
  std::string spec;
  double fig6_a = 2.0, fig6_delta = 50.0;
  std::vector<double> fig6_y{0.25, 0.5, 1.0};
  // profile / coeffs
  int grid = 129;
};

void add_common(CLI::App* c, Flags& f) {
  c->add_option("--gamma", f.gamma, "spontaneous emission half-rate [kappa]");
  c->add_option("--nu", f.nu, "pump half-rate [kappa]");
  c->add_option("--delta", f.delta, "cavity-atom detuning [kappa]");
  c->add_option("--g", f.g, "single-atom coupling [kappa]");
  c->add_option("--kappa", f.kappa, "cavity half-linewidth");
  c->add_option("--m", f.m, "medium atom number");
  c->add_option("--omega-rec", f.omega_rec, "recoil frequency [kappa]");
  c->add_option("--config", f.config, "flat JSON config; flags override it");
  c->add_option("--seed", f.seed, "random seed");
  c->add_option("--out", f.out, "output directory");
  c->add_option("--rel-tol", f.rel_tol, "integrator relative tolerance");
  c->add_option("--gamma-eff-mode", f.gamma_eff_mode, "gamma|gamma-zeta|kappa-shift (paper D_sin only)");
  c->add_option("--friction-form", f.friction_form, "exact|paper");
  c->add_option("--dsin-form", f.dsin_form, "derived|paper");
  c->add_option("--geom-factor", f.geom_factor, "1D projection factor of the recoil diffusion");
  c->add_flag("--quick", f.quick, "reduced grids");
  c->add_option("--threads", f.threads, "worker threads for sweeps");
}

SystemParams resolve_params(const Flags& f, Flags& mutable_f) {
  std::map<std::string, double> raw = {{"gamma", 1}, {"nu", 20}, {"delta", 20}, {"g", 5}, {"m", 10},
                                       {"omega_rec", 0.01}};
  if (f.config) {
    const json cfg = io::load_config(*f.config);
    for (auto& [k, v] : cfg.items()) {
      if (v.is_number()) {
        raw[k] = v.get<double>();
      } else if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (k == "gamma_eff_mode") mutable_f.gamma_eff_mode = s;
        else if (k == "friction_form") mutable_f.friction_form = s;
        else if (k == "dsin_form") mutable_f.dsin_form = s;
        else throw Error(ErrorCode::Usage, "unknown string key " + k);
      }
    }
    if (cfg.contains("geom_factor")) mutable_f.geom_factor = cfg["geom_factor"].get<double>();
    if (cfg.contains("seed")) mutable_f.seed = cfg["seed"].get<std::uint64_t>();
  }
  if (f.gamma) raw["gamma"] = *f.gamma;
  if (f.nu) raw["nu"] = *f.nu;
  if (f.delta) raw["delta"] = *f.delta;
  if (f.g) raw["g"] = *f.g;
  if (f.kappa) raw["kappa"] = *f.kappa;
  if (f.m) raw["m"] = *f.m;
  if (f.omega_rec) raw["omega_rec"] = *f.omega_rec;
  for (const char* k : {"seed", "geom_factor"}) raw.erase(k);
  return validate_params(raw);
}

MotionOptions motion_options(const Flags& f) {
  MotionOptions m;
  m.friction_form = parse_friction_form(f.friction_form);
  m.dsin_form = parse_dsin_form(f.dsin_form);
  m.gamma_eff_mode = parse_gamma_eff_mode(f.gamma_eff_mode);
  m.geom_factor = f.geom_factor;
  return m;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json base_meta(const std::string& command, const SystemParams& p, const Flags& f) {
  return {{"command", command},
          {"params", io::to_json(p)},
          {"motion_options", io::to_json(motion_options(f))},
          {"seed", f.seed},
          {"units", "rates in kappa, lengths in 1/k, hbar = k_B = 1"}};
}

SweepSpec spec_from_json(const json& j) {
  SweepSpec s;
  s.name = j.value("name", "sweep");
  s.evaluator = parse_evaluator(j.value("evaluator", "steady"));
  s.rule = parse_rescale_rule(j.value("rescale_rule", "none"));
  std::map<std::string, double> raw = {{"gamma", 1}, {"nu", 20}, {"delta", 20}, {"g", 5}};
  if (j.contains("fixed"))
    for (auto& [k, v] : j["fixed"].items()) raw[k] = v.get<double>();
  s.fixed = validate_params(raw);
  if (!j.contains("axes") || !j["axes"].is_array()) throw Error(ErrorCode::Usage, "sweep spec needs an axes array");
  for (const auto& a : j["axes"]) s.axes.push_back({a.at("name").get<std::string>(), a.at("values").get<std::vector<double>>()});
  if (j.contains("knobs"))
    for (auto& [k, v] : j["knobs"].items()) s.knobs[k] = v.get<double>();
  if (j.contains("motion")) {
    const auto& m = j["motion"];
    s.motion.friction_form = parse_friction_form(m.value("friction_form", "exact"));
    s.motion.dsin_form = parse_dsin_form(m.value("dsin_form", "derived"));
    s.motion.gamma_eff_mode = parse_gamma_eff_mode(m.value("gamma_eff_mode", "gamma"));
    s.motion.geom_factor = m.value("geom_factor", 1.0);
  }
  return s;
}

int cmd_simulate(const Flags& f, const SystemParams& p, std::ostream& out) {
  const auto init = sample_initial_ensemble(p, p.m_atoms, f.seed, f.v_scale);
  IntegrateOptions opt;
  opt.rel_tol = f.rel_tol;
  opt.abs_tol = f.abs_tol;
  if (f.pin_all) {
    opt.pinned.assign(p.m_atoms, true);
  }
  const auto traj = integrate(p, init, f.t_end, f.samples, opt);
  const auto obs = trajectory_observables(traj, p);
  json meta = base_meta("simulate", p, f);
  meta["v_scale"] = f.v_scale;
  meta["t_end"] = f.t_end;
  meta["samples"] = f.samples;
  meta["rel_tol"] = f.rel_tol;
  meta["abs_tol"] = f.abs_tol;
  meta["field_seed"] = 1e-3;
  meta["pinned_all"] = f.pin_all;
  meta["integrator"] = {{"method", "dopri5"}, {"steps", traj.stats.steps}, {"rejected", traj.stats.rejected}};
  io::write_csv_with_meta(f.out, "simulate", io::trajectory_csv(traj, p), meta);
  out << "N_end = " << io::fmt(obs.N.back()) << "\nvbar_end = " << io::fmt(obs.vbar.back())
      << "\ndbar_end = " << io::fmt(obs.dbar.back()) << "\ndmax_end = " << io::fmt(obs.dmax.back()) << "\nsteps = " << traj.stats.steps
      << "\nrejected = " << traj.stats.rejected << "\n";
  return 0;
}

int cmd_steady(const Flags& f, const SystemParams& p, std::ostream& out) {
  const std::vector<double> pos(p.m_atoms, 0.0);
  const auto s = fixed_ensemble_steady(p, pos);
  const auto q = pulled_ensemble_steady(p, pos);
  json rep = base_meta("steady", p, f);
  rep["fixed_ensemble"] = {{"z", s.z}, {"N", s.N}, {"above", s.above}};
  rep["pulled_mean_field"] = {{"N", q.N}, {"z", q.z.empty() ? 0.0 : q.z.front()}, {"pulling", q.pulling}};
  out << "z = " << io::fmt(s.z) << "\nN = " << io::fmt(s.N) << "\nabove_threshold = " << (s.above ? "true" : "false")
      << "\n";
  if (p.m_atoms >= 0) {
    const auto gr = gain_quantities(p, true);
    rep["gain_m_plus_1"] = {{"z_med", gr.z_med}, {"eta", gr.eta}, {"zeta", gr.zeta}, {"kappa_eff", gr.kappa_eff}};
    out << "z_{M+1} = " << io::fmt(gr.z_med) << "\nzeta = " << io::fmt(gr.zeta)
        << "\nkappa_eff = " << io::fmt(gr.kappa_eff) << "\n";
  }
  out << "N_pulled = " << io::fmt(q.N) << "\n";
  io::write_atomic(fs::path(f.out) / "steady.json", rep.dump(2) + "\n");
  return 0;
}

int cmd_profile(const Flags& f, const SystemParams& p, std::ostream& out) {
  const auto grid = uniform_grid(0, std::numbers::pi, std::max(64, f.grid));
  json meta = base_meta("profile", p, f);
  io::write_csv_with_meta(f.out, "profile", io::profile_csv(p, grid), meta);
  out << "depth = " << io::fmt(optical_potential(p, grid).depth) << "\n";
  return 0;
}

int cmd_coeffs(const Flags& f, const SystemParams& p, std::ostream& out) {
  const auto mo = motion_options(f);
  const auto grid = uniform_grid(0, std::numbers::pi, std::max(16, f.grid));
  const auto rep = equilibrium_report(p, mo);
  json meta = base_meta("coeffs", p, f);
  meta["report"] = {{"beta_avg", num(rep.beta_avg)},     {"d_avg", num(rep.d_avg)},
                    {"cooling", rep.cooling},               {"T", num(rep.T)},
                    {"T_over_TD", num(rep.T_doppler)},      {"depth", num(rep.depth)},
                    {"E_over_V", num(rep.kin_over_pot)},    {"cooling_rate", num(rep.cooling_rate)}};
  io::write_csv_with_meta(f.out, "coeffs", io::coeffs_csv(p, grid, mo), meta);
  out << "beta_avg = " << io::fmt(rep.beta_avg) << "\nd_avg = " << io::fmt(rep.d_avg)
      << "\nT = " << io::fmt(rep.T) << "\nT_over_TD = " << io::fmt(rep.T_doppler)
      << "\nE_over_V = " << io::fmt(rep.kin_over_pot) << "\n";
  return 0;
}

int write_sweep(const Flags& f, const SweepSpec& spec, std::ostream& out) {
  const auto table = sweep(spec, f.threads);
  json meta = {{"command", f.preset.empty() ? "sweep" : "figure"}, {"spec", io::to_json(spec)},
               {"units", "rates in kappa, lengths in 1/k, hbar = k_B = 1"}};
  std::size_t failed = 0;
  json errors = json::array();
  for (std::size_t i = 0; i < table.reasons.size(); ++i)
    if (!table.reasons[i].empty()) {
      ++failed;
      errors.push_back({{"row", i}, {"reason", table.reasons[i]}});
    }
  meta["failed_cells"] = errors;
  io::write_csv_with_meta(f.out, spec.name, io::table_csv(table), meta);
  out << spec.name << ": " << table.rows.size() << " rows, " << failed << " failed cells\n";
  return 0;
}

int cmd_figure(const Flags& f, std::ostream& out) {
  PresetOptions po;
  po.quick = f.quick;
  po.fig6_a = f.fig6_a;
  po.fig6_delta = f.fig6_delta;
  po.fig6_y = f.fig6_y;
  po.fig2_v_scale = f.v_scale;
  if (f.omega_rec) po.fig2_omega_rec = *f.omega_rec;
  auto spec = figure_preset(f.preset, po);
  spec.motion = motion_options(f);
  const int rc = write_sweep(f, spec, out);
  if (f.preset == "fig2") {
    // Representative trajectories for plotting.
    for (int m : {10, 4}) {
      SystemParams p = spec.fixed;
      p.m_atoms = m;
      const auto init = sample_initial_ensemble(p, m, f.seed, po.fig2_v_scale);
      const auto traj = integrate(p, init, spec.knobs.at("t_end"), 401);
      json meta = base_meta("figure fig2 trajectory", p, f);
      meta["v_scale"] = po.fig2_v_scale;
      meta["t_end"] = spec.knobs.at("t_end");
      io::write_csv_with_meta(f.out, "fig2_traj_M" + std::to_string(m), io::trajectory_csv(traj, p), meta);
    }
  }
  return rc;
}

int cmd_validate(const Flags& f, std::ostream& out) {
  ValidationOptions vo;
  vo.quick = f.quick;
  vo.motion = motion_options(f);
  const auto reps = run_validation(vo);
  json arr = json::array();
  bool ok = true;
  for (const auto& r : reps) {
    arr.push_back(io::to_json(r));
    ok = ok && r.pass;
    out << (r.pass ? "PASS " : "FAIL ") << r.quantity << " rel_err=" << io::fmt(r.rel_error)
        << " tol=" << io::fmt(r.tolerance) << " @ " << r.point << "\n";
  }
  json rep = {{"command", "validate"}, {"quick", f.quick}, {"motion_options", io::to_json(vo.motion)},
              {"all_pass", ok}, {"reports", arr}};
  io::write_atomic(fs::path(f.out) / "validate.json", rep.dump(2) + "\n");
  return ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hot cavity lasing and cooling toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto* sim = app.add_subcommand("simulate", "semiclassical trajectory to CSV");
  auto* steady = app.add_subcommand("steady", "steady-state point report");
  auto* profile = app.add_subcommand("profile", "extra-atom position profile CSV");
  auto* coeffs = app.add_subcommand("coeffs", "friction and diffusion profile CSV");
  auto* sw = app.add_subcommand("sweep", "custom sweep from a JSON spec");
  auto* fig = app.add_subcommand("figure", "figure preset table");
  auto* val = app.add_subcommand("validate", "oracle suite");
  for (auto* c : {sim, steady, profile, coeffs, sw, fig, val}) add_common(c, f);
  sim->add_option("--v-scale", f.v_scale, "initial velocity spread [v_D]");
  sim->add_option("--t-end", f.t_end, "duration [1/kappa]");
  sim->add_option("--samples", f.samples, "output samples");
  sim->add_option("--abs-tol", f.abs_tol, "integrator absolute tolerance");
  sim->add_flag("--pin-all", f.pin_all, "hold all atoms at their initial positions");
  for (auto* c : {profile, coeffs}) c->add_option("--grid", f.grid, "theta grid points on [0, pi]");
  sw->add_option("spec", f.spec, "sweep spec JSON")->required();
  fig->add_option("name", f.preset, "fig1..fig6")->required();
  fig->add_option("--fig6-a", f.fig6_a, "emission operating point a");
  fig->add_option("--fig6-delta", f.fig6_delta, "detuning for fig6");
  fig->add_option("--fig6-y", f.fig6_y, "pump ratios y = nu/delta for fig6");
  fig->add_option("--v-scale", f.v_scale, "fig2 initial velocity spread [v_D]");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    Flags resolved = f;
    if (*sw) {
      const auto spec = spec_from_json(io::load_json(f.spec));
      return write_sweep(f, spec, out);
    }
    if (*fig) return cmd_figure(f, out);
    if (*val) return cmd_validate(f, out);
    const SystemParams p = resolve_params(f, resolved);
    motion_options(resolved);
    if (*sim) return cmd_simulate(resolved, p, out);
    if (*steady) return cmd_steady(resolved, p, out);
    if (*profile) return cmd_profile(resolved, p, out);
    if (*coeffs) return cmd_coeffs(resolved, p, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.code() == ErrorCode::Usage || e.code() == ErrorCode::MissingKey ||
                   e.code() == ErrorCode::InvariantViolation || e.code() == ErrorCode::UnknownPreset
               ? 2
               : 1;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace hotcavity::cli
