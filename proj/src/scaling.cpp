#include "hotcavity/scaling.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hotcavity/semiclassical.hpp"
#include "hotcavity/steady_state.hpp"

namespace hotcavity {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

SystemParams rescale(const SystemParams& base, int m, double a) {
  if (!(a > 0) || m < 0) throw Error(ErrorCode::InvariantViolation, "rescale needs a > 0 and M >= 0");
  SystemParams p = base;
  const double k_ref = base.kappa / (base.m_atoms + 1);
  p.m_atoms = m;
  p.kappa = k_ref * (m + 1);
  const double Gm = p.Gamma();
  const double w = a * k_ref;
  p.g = std::sqrt(w * (Gm * Gm + p.delta * p.delta) / Gm);
  return p;
}

std::string to_string(Evaluator e) {
  switch (e) {
    case Evaluator::kSteady: return "steady";
    case Evaluator::kGain: return "gain";
    case Evaluator::kProfile: return "profile";
    case Evaluator::kMotion: return "motion";
    case Evaluator::kTrajectory: return "trajectory";
  }
  return "steady";
}

Evaluator parse_evaluator(const std::string& s) {
  for (auto e : {Evaluator::kSteady, Evaluator::kGain, Evaluator::kProfile, Evaluator::kMotion, Evaluator::kTrajectory})
    if (to_string(e) == s) return e;
  throw Error(ErrorCode::Usage, "unknown evaluator " + s);
}

std::string to_string(RescaleRule r) { return r == RescaleRule::kNone ? "none" : "hot-cavity"; }

RescaleRule parse_rescale_rule(const std::string& s) {
  if (s == "none") return RescaleRule::kNone;
  if (s == "hot-cavity") return RescaleRule::kHotCavity;
  throw Error(ErrorCode::Usage, "unknown rescale rule " + s);
}

SystemParams cell_params(const SweepSpec& spec, const std::vector<double>& coords, double* theta,
                         std::uint64_t* seed) {
  SystemParams p = spec.fixed;
  auto knob = [&](const char* k, double fallback) {
    auto it = spec.knobs.find(k);
    return it == spec.knobs.end() ? fallback : it->second;
  };
  double y = knob("y", kNaN);
  double a = knob("a", kNaN);
  int m = p.m_atoms;
  if (theta) *theta = knob("theta", 0.0);
  if (seed) *seed = static_cast<std::uint64_t>(knob("seed", 1.0));
  for (std::size_t i = 0; i < spec.axes.size(); ++i) {
    const std::string& n = spec.axes[i].name;
    const double v = coords[i];
    if (n == "gamma") p.gamma = v;
    else if (n == "nu") p.nu = v;
    else if (n == "delta") p.delta = v;
    else if (n == "g") p.g = v;
    else if (n == "kappa") p.kappa = v;
    else if (n == "omega_rec") p.omega_rec = v;
    else if (n == "m") m = static_cast<int>(std::lround(v));
    else if (n == "y") y = v;
    else if (n == "a") a = v;
    else if (n == "theta") { if (theta) *theta = v; }
    else if (n == "seed") { if (seed) *seed = static_cast<std::uint64_t>(std::llround(v)); }
    else throw Error(ErrorCode::Usage, "unknown axis " + n);
  }
  if (std::isfinite(y)) p.nu = y * p.delta;
  if (spec.rule == RescaleRule::kHotCavity) {
    if (!std::isfinite(a)) throw Error(ErrorCode::Usage, "hot-cavity rescale needs a");
    p = rescale(p, m, a);
  } else {
    p.m_atoms = m;
  }
  check_invariants(p);
  return p;
}

namespace {

std::vector<std::string> evaluator_columns(Evaluator e) {
  switch (e) {
    case Evaluator::kSteady: return {"z", "N", "above", "z_pulled_mean", "N_pulled"};
    case Evaluator::kGain: return {"z_med", "eta", "zeta", "kappa_eff", "N", "n"};
    case Evaluator::kProfile: return {"W", "Z", "N", "n", "F", "V"};
    case Evaluator::kMotion:
      return {"zeta", "kappa_eff", "beta_avg", "d_avg", "T", "T_over_TD", "T_over_kappa", "depth", "E_over_V",
              "cooling"};
    case Evaluator::kTrajectory: return {"N_end", "vbar_end", "dbar_end", "dmax_end", "balance_residual"};
  }
  return {};
}

std::vector<double> evaluate(const SweepSpec& spec, const SystemParams& p, double theta, std::uint64_t seed) {
  switch (spec.evaluator) {
    case Evaluator::kSteady: {
      const std::vector<double> pos(p.m_atoms, 0.0);
      const auto s = fixed_ensemble_steady(p, pos);
      const auto q = pulled_ensemble_steady(p, pos);
      double zbar = 0;
      for (double z : q.z) zbar += z;
      zbar = q.z.empty() ? kNaN : zbar / q.z.size();
      return {s.z, s.N, s.above ? 1.0 : 0.0, zbar, q.N};
    }
    case Evaluator::kGain: {
      const auto h = extra_atom_steady(p, 0.0);
      return {h.gain.z_med, h.gain.eta, h.gain.zeta, h.gain.kappa_eff, h.N, h.N / (p.m_atoms + 1)};
    }
    case Evaluator::kProfile: {
      const auto h = extra_atom_steady(p, theta);
      using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
      const double V = theta == 0 ? 0.0
                                  : -GK::integrate([&](double t) { return dipole_force(p, t); }, 0.0, theta, 15, 1e-10);
      return {h.W, h.Z, h.N, h.N / (p.m_atoms + 1), h.F, V};
    }
    case Evaluator::kMotion: {
      const auto gr = gain_quantities(p, true);
      const auto r = equilibrium_report(p, spec.motion);
      return {gr.zeta, gr.kappa_eff, r.beta_avg, r.d_avg, r.T, r.T_doppler, r.T / p.kappa, r.depth,
              r.kin_over_pot, r.cooling ? 1.0 : 0.0};
    }
    case Evaluator::kTrajectory: {
      auto knob = [&](const char* k, double fallback) {
        auto it = spec.knobs.find(k);
        return it == spec.knobs.end() ? fallback : it->second;
      };
      const double t_end = knob("t_end", 2000.0);
      const int samples = static_cast<int>(knob("samples", 201));
      const auto init = sample_initial_ensemble(p, p.m_atoms, seed, knob("v_scale", 0.2));
      const auto traj = integrate(p, init, t_end, samples);
      const auto obs = trajectory_observables(traj, p);
      // Averages over the final tenth of the run.
      const std::size_t n = obs.times.size();
      const std::size_t from = n - std::max<std::size_t>(1, n / 10);
      double N = 0, v = 0;
      for (std::size_t i = from; i < n; ++i) N += obs.N[i], v += obs.vbar[i];
      N /= double(n - from);
      v /= double(n - from);
      return {N, v, obs.dbar.back(), obs.dmax.back(), energy_balance_residual(traj.states.back(), p)};
    }
  }
  return {};
}

}  // namespace

SweepTable sweep(const SweepSpec& spec, int threads) {
  if (spec.axes.empty()) throw Error(ErrorCode::InvariantViolation, "sweep needs at least one axis");
  for (const auto& ax : spec.axes)
    if (ax.values.empty()) throw Error(ErrorCode::InvariantViolation, "empty axis " + ax.name);

  SweepTable t;
  t.name = spec.name;
  for (const auto& ax : spec.axes) t.columns.push_back(ax.name);
  const auto out_cols = evaluator_columns(spec.evaluator);
  t.columns.insert(t.columns.end(), out_cols.begin(), out_cols.end());

  std::size_t cells = 1;
  for (const auto& ax : spec.axes) cells *= ax.values.size();
  t.rows.assign(cells, {});
  t.reasons.assign(cells, "");

  auto coords_of = [&](std::size_t idx) {
    std::vector<double> c(spec.axes.size());
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
      const auto& vals = spec.axes[k].values;
      c[k] = vals[idx % vals.size()];
      idx /= vals.size();
    }
    return c;
  };

  auto run_cell = [&](std::size_t idx) {
    auto coords = coords_of(idx);
    std::vector<double> row = coords;
    try {
      double theta = 0;
      std::uint64_t seed = 1;
      const SystemParams p = cell_params(spec, coords, &theta, &seed);
      const auto vals = evaluate(spec, p, theta, seed);
      row.insert(row.end(), vals.begin(), vals.end());
    } catch (const std::exception& e) {
      row.resize(spec.axes.size());
      row.insert(row.end(), out_cols.size(), kNaN);
      t.reasons[idx] = e.what();
    }
    t.rows[idx] = std::move(row);
  };

  const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(cells)));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < cells; ++i) run_cell(i);
    return t;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < n_threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells; i = next++) run_cell(i);
    });
  for (auto& th : pool) th.join();
  return t;
}

namespace {

std::vector<double> linspace(double a, double b, int n) { return uniform_grid(a, b, n); }

std::vector<double> ints(int a, int b) {
  std::vector<double> v;
  for (int i = a; i <= b; ++i) v.push_back(i);
  return v;
}

}  // namespace

SweepSpec figure_preset(const std::string& name, const PresetOptions& opt) {
  const int n_cont = opt.quick ? 12 : 50;
  SweepSpec s;
  s.name = name;
  if (name == "fig1") {
    s.fixed = {.gamma = 1, .nu = 20, .delta = 20, .g = 5};
    s.axes = {{"m", ints(1, 30)}, {"nu", linspace(2 * s.fixed.gamma, 40, n_cont)}};
    s.evaluator = Evaluator::kSteady;
    s.notes = "all atoms fixed at antinodes";
  } else if (name == "fig2") {
    s.fixed = {.gamma = 1, .nu = 20, .delta = 20, .g = 5, .omega_rec = opt.fig2_omega_rec};
    std::vector<double> seeds;
    for (int i = 1; i <= opt.fig2_seeds; ++i) seeds.push_back(i);
    s.axes = {{"m", {4, 10}}, {"seed", seeds}};
    s.evaluator = Evaluator::kTrajectory;
    s.knobs = {{"t_end", opt.quick ? 300.0 : opt.fig2_t_end}, {"v_scale", opt.fig2_v_scale}, {"samples", 201}};
    s.notes = "v_scale, t_end and the field seed 1e-3 are configuration choices";
  } else if (name == "fig3") {
    s.fixed = {.gamma = 10, .nu = 20, .delta = 40, .g = 4};
    s.axes = {{"m", {1, 10, 50, 100, 200}}, {"nu", linspace(10, 60, n_cont)}};
    s.evaluator = Evaluator::kGain;
    s.notes = "extra atom at an antinode; n = N/(M+1)";
  } else if (name == "fig4") {
    s.fixed = {.gamma = 1, .nu = 20, .delta = 20, .g = 5};
    s.axes = {{"m", {0, 1, 5, 10, 50}}, {"theta", linspace(0, std::numbers::pi, n_cont)}};
    s.evaluator = Evaluator::kProfile;
  } else if (name == "fig5") {
    s.fixed = {.gamma = 10, .nu = 20, .delta = 40, .g = 4};
    std::vector<double> ms = {0, 1, 2, 5, 10, 15, 20, 25, 30, 40, 50, 70, 100, 150, 200};
    if (opt.quick) ms = {0, 1, 5, 10, 20, 30, 50, 100};
    s.axes = {{"delta", {20, 40, 60, 80}}, {"m", ms}};
    s.evaluator = Evaluator::kMotion;
  } else if (name == "fig6") {
    s.fixed = {.gamma = 0, .nu = 25, .delta = opt.fig6_delta, .g = 1};
    std::vector<double> ms = {0, 1, 2, 5, 10, 20, 30, 50, 70, 100, 150, 200};
    if (opt.quick) ms = {0, 5, 20, 50, 100, 200};
    s.axes = {{"y", opt.fig6_y}, {"m", ms}};
    s.evaluator = Evaluator::kMotion;
    s.rule = RescaleRule::kHotCavity;
    s.knobs = {{"a", opt.fig6_a}};
    s.notes = "gamma = 0; a, y and delta are configuration choices, not quoted values";
  } else {
    throw Error(ErrorCode::UnknownPreset, name);
  }
  return s;
}

}  // namespace hotcavity
