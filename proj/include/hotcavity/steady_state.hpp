#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "hotcavity/model.hpp"

namespace hotcavity {

struct ThresholdReport {
  double rhs;  // kappa*Gamma/(nu - gamma); +inf when nu <= gamma
  double lhs;  // w * sum f^2
  bool above;
  bool pump_below_inversion;
};

ThresholdReport threshold(const SystemParams& p, double sum_f2);

// Smallest integer M with w * M * f2_per_atom above threshold; -1 if none up to m_max.
int minimal_lasing_atoms(const SystemParams& p, double f2_per_atom, int m_max = 100000);

struct FixedEnsembleSteady {
  double z;
  double N;
  bool above;
  bool pump_below_inversion;
};

// Closed-form lasing point with a common inversion and the full detuning in w.
FixedEnsembleSteady fixed_ensemble_steady(const SystemParams& p, const std::vector<double>& theta);

// Exact mean-field fixed point including frequency pulling; per-atom inversions.
struct PulledEnsembleSteady {
  double N;
  double pulling;  // lasing frequency offset in the atomic rotating frame
  std::vector<double> z;
  bool above;
};

PulledEnsembleSteady pulled_ensemble_steady(const SystemParams& p, const std::vector<double>& theta);

template <class S>
struct BasicGainReport {
  S z_med;
  S eta;
  S zeta;
  S kappa_eff;
  int atoms_in_inversion;  // M or M+1
};
using GainReport = BasicGainReport<double>;

// Root of a z^2 - b z - c = 0 continuously connected to -c/b as a -> 0.
template <class S>
S stable_minus_root(S a, S b, S c) {
  using std::sqrt;
  const S disc = b * b + S(4) * a * c;
  if (disc < S(0)) throw Error(ErrorCode::NegativeDiscriminant, "inversion quadratic");
  const S r = sqrt(disc);
  if (a == S(0)) return -c / b;
  if (b > S(0)) return S(-2) * c / (b + r);
  return (b - r) / (S(2) * a);
}

// Medium inversion for n atoms sharing the field at antinodes.
template <class S>
S collective_inversion(const BasicParams<S>& p, int n) {
  const S G = p.Gamma();
  const S w = emission_rate(p);
  const S a = S(n) * w * G;
  const S b = p.kappa * (G + w) + S(n) * w * (p.nu - p.gamma);
  const S c = p.kappa * (p.gamma - p.nu + w);
  return stable_minus_root(a, b, c);
}

template <class S>
BasicGainReport<S> gain_quantities(const BasicParams<S>& p, bool use_m_plus_1) {
  const int M = p.m_atoms;
  if (!use_m_plus_1 && M < 1) throw Error(ErrorCode::ZeroAtoms, "gain_quantities needs M >= 1");
  const int n = use_m_plus_1 ? M + 1 : M;
  const S G = p.Gamma();
  const S w = emission_rate(p);
  BasicGainReport<S> r;
  r.atoms_in_inversion = n;
  r.z_med = collective_inversion(p, n);
  r.eta = p.nu * w / (G + w);
  r.zeta = S(M) * G * w * r.z_med / (p.kappa * (G + w));
  r.kappa_eff = p.kappa * (S(1) - r.zeta);
  return r;
}

struct CollectivePhotons {
  double N;
  bool below_threshold;
};

CollectivePhotons collective_photon_number(const SystemParams& p, const GainReport& report);

template <class S>
struct BasicHotCavityPoint {
  S theta;
  S G, dG;  // coupling and its phase derivative
  S Z;
  S W;
  S dZdW;
  S d_eff;
  S N;
  S P_bar;
  S sigma_bar;
  S lambda_bar;
  S F;
  BasicGainReport<S> gain;
};
using HotCavityPoint = BasicHotCavityPoint<double>;

// Extra-atom inversion: Gamma W Z^2 - [ke(Gamma+W) + W(nu-gamma+2 M eta)] Z - ke(gamma-nu+W) = 0.
template <class S>
S extra_atom_inversion(const BasicParams<S>& p, const BasicGainReport<S>& gr, S W) {
  const S G = p.Gamma();
  const S Meta = S(p.m_atoms) * gr.eta;
  const S a = G * W;
  const S b = gr.kappa_eff * (G + W) + W * (p.nu - p.gamma + S(2) * Meta);
  const S c = gr.kappa_eff * (p.gamma - p.nu + W);
  return stable_minus_root(a, b, c);
}

template <class S>
S extra_atom_inversion_slope(const BasicParams<S>& p, const BasicGainReport<S>& gr, S W, S Z) {
  const S G = p.Gamma();
  const S Meta = S(p.m_atoms) * gr.eta;
  const S ke = gr.kappa_eff;
  const S b = ke * (G + W) + W * (p.nu - p.gamma + S(2) * Meta);
  const S dq_dw = G * Z * Z - (ke + p.nu - p.gamma + S(2) * Meta) * Z - ke;
  const S dq_dz = S(2) * G * W * Z - b;
  return -dq_dw / dq_dz;
}

template <class S>
BasicHotCavityPoint<S> extra_atom_steady(const BasicParams<S>& p, S theta) {
  using std::cos;
  using std::sin;
  using std::abs;
  BasicHotCavityPoint<S> h;
  h.theta = theta;
  h.gain = gain_quantities(p, true);
  const S Gm = p.Gamma();
  const S q = Gm * Gm + p.delta * p.delta;
  const S ke = h.gain.kappa_eff;
  const S Meta = S(p.m_atoms) * h.gain.eta;
  const S w = emission_rate(p);

  h.G = p.g * cos(theta);
  h.dG = -p.g * sin(theta);
  h.W = Gm * h.G * h.G / q;
  h.Z = extra_atom_inversion(p, h.gain, h.W);
  h.dZdW = extra_atom_inversion_slope(p, h.gain, h.W, h.Z);
  h.d_eff = ke * (Gm + h.W) - Gm * h.W * h.Z;
  if (abs(h.d_eff) < S(1e-9)) throw Error(ErrorCode::DeterminantNearZero, "D_eff");

  // Photon balance with the medium population eliminated.
  const S P = (S(1) + h.Z) / S(2);
  h.N = (Meta + p.nu - Gm * P) / ke;
  const S zm = h.gain.z_med;
  h.P_bar = (p.nu - w * zm * h.N) / (Gm + w);
  h.sigma_bar = p.g > S(0) ? S(2) * w / p.g * (p.nu + Gm * zm * h.N) / (Gm + w) : S(0);
  h.lambda_bar = p.delta / Gm * h.sigma_bar;

  // 2 Delta W/(Gamma G) dG, with W/G = Gamma G/q cancelled by hand so nodes are regular.
  h.F = (ke * p.nu + Meta * Gm * h.Z) / h.d_eff * S(2) * p.delta * h.G * h.dG / q;
  return h;
}

template <class S>
S dipole_force(const BasicParams<S>& p, S theta) {
  return extra_atom_steady(p, theta).F;
}

struct PotentialProfile {
  std::vector<double> theta;
  std::vector<double> V;
  double depth;
};

// V = -int_0^theta F; grid must span [0, pi] with at least 64 points.
PotentialProfile optical_potential(const SystemParams& p, const std::vector<double>& theta_grid);

std::vector<double> uniform_grid(double a, double b, int n);

struct EnhancementRatios {
  double force_ratio;
  double friction_ratio;
};

EnhancementRatios enhancement_ratios(double zeta);

}  // namespace hotcavity
