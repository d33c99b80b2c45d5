#include "hotcavity/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/numeric/odeint.hpp>

namespace hotcavity {

namespace odeint = boost::numeric::odeint;
using Flat = std::vector<double>;

std::vector<double> EnsembleState::pack() const {
  const int m = atoms();
  Flat y(2 + 5 * m);
  y[0] = alpha.real();
  y[1] = alpha.imag();
  for (int i = 0; i < m; ++i) {
    y[2 + i] = s[i].real();
    y[2 + m + i] = s[i].imag();
    y[2 + 2 * m + i] = z[i];
    y[2 + 3 * m + i] = theta[i];
    y[2 + 4 * m + i] = p[i];
  }
  return y;
}

EnsembleState EnsembleState::unpack(const std::vector<double>& y, int m) {
  EnsembleState x(m);
  x.alpha = {y[0], y[1]};
  for (int i = 0; i < m; ++i) {
    x.s[i] = {y[2 + i], y[2 + m + i]};
    x.z[i] = y[2 + 2 * m + i];
    x.theta[i] = y[2 + 3 * m + i];
    x.p[i] = y[2 + 4 * m + i];
  }
  return x;
}

namespace {

bool all_finite(const Flat& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

// Flat right-hand side shared by rhs() and the integrator.
struct System {
  const SystemParams& par;
  const PinMask& pinned;
  int m;
  std::uint64_t* evals;

  void operator()(const Flat& y, Flat& dy, double /*t*/) const {
    if (evals) ++*evals;
    const std::complex<double> a{y[0], y[1]};
    const std::complex<double> det{-par.Gamma(), par.delta};
    std::complex<double> da = -par.kappa * a;
    dy.resize(y.size());
    for (int i = 0; i < m; ++i) {
      const std::complex<double> s{y[2 + i], y[2 + m + i]};
      const double z = y[2 + 2 * m + i];
      const double th = y[2 + 3 * m + i];
      const double G = par.g * std::cos(th);
      const double dG = -par.g * std::sin(th);
      da += G * s;
      const std::complex<double> ds = det * s + G * z * a;
      dy[2 + i] = ds.real();
      dy[2 + m + i] = ds.imag();
      const double re = (std::conj(a) * s).real();
      dy[2 + 2 * m + i] = -2 * par.Gamma() * z - 4 * G * re + 2 * (par.nu - par.gamma);
      const bool pin = !pinned.empty() && pinned[i];
      dy[2 + 3 * m + i] = pin ? 0.0 : 2 * par.omega_rec * y[2 + 4 * m + i];
      // Gradient force -dH/dx with H_int = -i G (a^+ s - s^+ a).
      dy[2 + 4 * m + i] = pin ? 0.0 : 2 * (std::conj(a) * s).imag() * dG;
    }
    dy[0] = da.real();
    dy[1] = da.imag();
  }
};

}  // namespace

EnsembleState rhs(const EnsembleState& x, const SystemParams& p, const PinMask& pinned) {
  const Flat y = x.pack();
  if (!all_finite(y)) throw Error(ErrorCode::NonFiniteState, "rhs input");
  Flat dy(y.size());
  System{p, pinned, x.atoms(), nullptr}(y, dy, 0.0);
  return EnsembleState::unpack(dy, x.atoms());
}

Trajectory integrate(const SystemParams& p, const EnsembleState& initial, const std::vector<double>& sample_times,
                     const IntegrateOptions& opt) {
  if (sample_times.empty()) throw Error(ErrorCode::InvariantViolation, "no sample times");
  if (!(opt.rel_tol > 0 && opt.rel_tol <= 1e-2 && opt.abs_tol > 0 && opt.abs_tol <= 1e-2))
    throw Error(ErrorCode::InvariantViolation, "tolerances must lie in (0, 1e-2]");
  for (std::size_t i = 1; i < sample_times.size(); ++i)
    if (!(sample_times[i] > sample_times[i - 1]))
      throw Error(ErrorCode::InvariantViolation, "sample times must increase strictly");
  if (!(sample_times.back() > 0)) throw Error(ErrorCode::InvariantViolation, "t_end must be > 0");

  const int m = initial.atoms();
  Flat y = initial.pack();
  if (!all_finite(y)) throw Error(ErrorCode::NonFiniteState, "initial state");

  Trajectory out;
  System sys{p, opt.pinned, m, &out.stats.rhs_evals};
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<Flat>());

  double t = 0.0;
  double dt = 1e-3;
  for (double ts : sample_times) {
    if (ts < t) throw Error(ErrorCode::InvariantViolation, "sample times must be >= 0");
    while (t < ts) {
      const double remaining = ts - t;
      double h = std::min(dt, remaining);
      const bool clipped = h < dt;
      const double t_before = t;
      if (stepper.try_step(sys, y, t, h) == odeint::success) {
        ++out.stats.steps;
        if (!all_finite(y)) throw Error(ErrorCode::NonFiniteState, "state at t=" + std::to_string(t));
        // Land exactly on the sample time despite rounding.
        if (ts - t < 1e-12 * std::max(1.0, std::abs(ts))) t = ts;
        if (!clipped) dt = h;
      } else {
        ++out.stats.rejected;
        dt = h;
        if (dt < 1e-14 * std::max(1.0, std::abs(t_before)))
          throw Error(ErrorCode::StepSizeUnderflow, "step below 1e-14 at t=" + std::to_string(t_before));
      }
    }
    out.times.push_back(ts);
    out.states.push_back(EnsembleState::unpack(y, m));
  }
  return out;
}

Trajectory integrate(const SystemParams& p, const EnsembleState& initial, double t_end, int samples,
                     const IntegrateOptions& opt) {
  if (samples < 2) throw Error(ErrorCode::InvariantViolation, "need >= 2 samples");
  std::vector<double> ts(samples);
  for (int i = 0; i < samples; ++i) ts[i] = t_end * i / (samples - 1);
  return integrate(p, initial, ts, opt);
}

double doppler_velocity(const SystemParams& p) {
  return (p.gamma > 0 ? p.gamma : p.kappa) / p.wavenumber;
}

EnsembleState sample_initial_ensemble(const SystemParams& p, int m, std::uint64_t seed, double v_scale) {
  if (!(v_scale > 0)) throw Error(ErrorCode::InvariantViolation, "v_scale must be > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, 2 * std::numbers::pi);
  std::normal_distribution<double> vel(0.0, v_scale * doppler_velocity(p));
  EnsembleState x(m);
  x.alpha = {1e-3, 0.0};
  x.z.setConstant(free_inversion(p));
  for (int i = 0; i < m; ++i) x.theta[i] = pos(rng);
  for (int i = 0; i < m; ++i) x.p[i] = vel(rng) / (2 * p.omega_rec);
  return x;
}

double antinode_distance(double theta) {
  constexpr double pi = std::numbers::pi;
  double r = std::fmod(theta, pi);
  if (r < 0) r += pi;
  return std::min(r, pi - r) / (2 * pi);
}

ObservableSeries trajectory_observables(const Trajectory& traj, const SystemParams& p) {
  if (traj.times.empty()) throw Error(ErrorCode::EmptyTrajectory, "no snapshots");
  ObservableSeries o;
  o.times = traj.times;
  const double vd = doppler_velocity(p);
  for (const auto& x : traj.states) {
    const int m = x.atoms();
    o.N.push_back(x.photons());
    double v = 0, d = 0, dm = 0;
    std::vector<double> pos(m);
    for (int i = 0; i < m; ++i) {
      v += std::abs(2 * p.omega_rec * x.p[i]) / vd;
      const double di = antinode_distance(x.theta[i]);
      d += di;
      dm = std::max(dm, di);
      pos[i] = x.theta[i] / (2 * std::numbers::pi);
    }
    o.vbar.push_back(m ? v / m : 0.0);
    o.dbar.push_back(m ? d / m : 0.0);
    o.dmax.push_back(dm);
    o.positions.push_back(std::move(pos));
  }
  return o;
}

double energy_balance_residual(const EnsembleState& x, const SystemParams& p) {
  const double pe = (x.z.array() + 1).sum() / 2;
  const double pg = (1 - x.z.array()).sum() / 2;
  return p.nu * pg - p.gamma * pe - p.kappa * x.photons();
}

}  // namespace hotcavity
