#include "hotcavity/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace hotcavity {

ThresholdReport threshold(const SystemParams& p, double sum_f2) {
  ThresholdReport r;
  r.pump_below_inversion = p.nu <= p.gamma;
  r.rhs = r.pump_below_inversion ? std::numeric_limits<double>::infinity()
                                 : p.kappa * p.Gamma() / (p.nu - p.gamma);
  r.lhs = emission_rate(p) * sum_f2;
  r.above = !r.pump_below_inversion && r.lhs > r.rhs;
  return r;
}

int minimal_lasing_atoms(const SystemParams& p, double f2_per_atom, int m_max) {
  for (int m = 1; m <= m_max; ++m)
    if (threshold(p, m * f2_per_atom).above) return m;
  return -1;
}

FixedEnsembleSteady fixed_ensemble_steady(const SystemParams& p, const std::vector<double>& theta) {
  double sum_f2 = 0;
  for (double t : theta) sum_f2 += std::cos(t) * std::cos(t);
  const auto th = threshold(p, sum_f2);
  FixedEnsembleSteady r;
  r.above = th.above;
  r.pump_below_inversion = th.pump_below_inversion;
  if (!th.above) {
    r.z = free_inversion(p);
    r.N = 0;
    return r;
  }
  const double M = static_cast<double>(theta.size());
  r.z = p.kappa / (emission_rate(p) * sum_f2);
  const double pe = M * (1 + r.z) / 2;
  const double pg = M - pe;
  r.N = (p.nu * pg - p.gamma * pe) / p.kappa;
  return r;
}

PulledEnsembleSteady pulled_ensemble_steady(const SystemParams& p, const std::vector<double>& theta) {
  const double Gm = p.Gamma();
  const double k = p.kappa;
  PulledEnsembleSteady r;
  r.pulling = k * p.delta / (k + Gm);
  const double dp = -Gm * p.delta / (k + Gm);
  const double target = k * Gm * (1 + p.delta * p.delta / ((k + Gm) * (k + Gm)));

  std::vector<double> G2(theta.size());
  for (std::size_t m = 0; m < theta.size(); ++m) G2[m] = std::pow(p.g * std::cos(theta[m]), 2);

  auto inversions = [&](double N) {
    std::vector<double> z(G2.size());
    for (std::size_t m = 0; m < G2.size(); ++m)
      z[m] = (p.nu - p.gamma) / (Gm * (1 + 2 * G2[m] * N / (Gm * Gm + dp * dp)));
    return z;
  };
  auto excess = [&](double N) {
    const auto z = inversions(N);
    double s = 0;
    for (std::size_t m = 0; m < G2.size(); ++m) s += G2[m] * z[m];
    return s - target;
  };

  r.above = p.nu > p.gamma && excess(0.0) > 0;
  if (!r.above) {
    r.N = 0;
    r.z = inversions(0.0);
    return r;
  }
  double hi = 1;
  while (excess(hi) > 0) hi *= 2;
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  auto [a, b] = boost::math::tools::toms748_solve(excess, 0.0, hi, tol, iters);
  r.N = 0.5 * (a + b);
  r.z = inversions(r.N);
  return r;
}

CollectivePhotons collective_photon_number(const SystemParams& p, const GainReport& report) {
  const double Pb = (1 + report.z_med) / 2;
  const double N = p.m_atoms * (p.nu * (1 - Pb) - p.gamma * Pb) / p.kappa;
  return N < 0 ? CollectivePhotons{0.0, true} : CollectivePhotons{N, false};
}

std::vector<double> uniform_grid(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

PotentialProfile optical_potential(const SystemParams& p, const std::vector<double>& grid) {
  constexpr double pi = std::numbers::pi;
  if (grid.size() < 64) throw Error(ErrorCode::InvariantViolation, "potential grid needs >= 64 points");
  if (!std::is_sorted(grid.begin(), grid.end()) || grid.front() > 0 || grid.back() < pi)
    throw Error(ErrorCode::InvariantViolation, "potential grid must be sorted and cover [0, pi]");

  auto force = [&](double t) { return dipole_force(p, t); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;

  constexpr double tol = 1e-10;  // relative to the integrated |F|

  PotentialProfile out;
  out.theta = grid;
  out.V.resize(grid.size());
  // Gauge V(0) = 0: integrate from 0 to the first grid point, then cumulatively.
  double acc = -GK::integrate(force, 0.0, grid.front(), 15, tol);
  out.V[0] = acc;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    acc -= GK::integrate(force, grid[i - 1], grid[i], 15, tol);
    out.V[i] = acc;
  }
  const auto [lo, hi] = std::minmax_element(out.V.begin(), out.V.end());
  out.depth = *hi - *lo;
  return out;
}

EnhancementRatios enhancement_ratios(double zeta) {
  if (!(zeta < 1)) throw Error(ErrorCode::ZetaOutOfRange, "zeta must be < 1");
  const double r = 1 / (1 - zeta);
  return {r, r * r * r};
}

}  // namespace hotcavity
