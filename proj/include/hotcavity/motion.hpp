#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "hotcavity/steady_state.hpp"

namespace hotcavity {

// kExact is the linear response of the extra-atom equations with Z following
// the atom adiabatically; kPaper keeps the two explicit kappa terms of the
// published listing.
enum class FrictionForm { kExact, kPaper };

// kDerived is the full quadratic form in the noise matrix; kPaper is the
// published single-atom listing with its undefined Gamma_eff.
enum class DsinForm { kDerived, kPaper };

enum class GammaEffMode { kGamma, kGammaZeta, kKappaShift };

struct MotionOptions {
  FrictionForm friction_form = FrictionForm::kExact;
  DsinForm dsin_form = DsinForm::kDerived;
  GammaEffMode gamma_eff_mode = GammaEffMode::kGamma;
  double geom_factor = 1.0;
  int quadrature_nodes = 64;
};

std::string to_string(FrictionForm f);
std::string to_string(DsinForm f);
std::string to_string(GammaEffMode m);
FrictionForm parse_friction_form(const std::string& s);
DsinForm parse_dsin_form(const std::string& s);
GammaEffMode parse_gamma_eff_mode(const std::string& s);

template <class S>
S gamma_eff(const BasicParams<S>& p, const BasicGainReport<S>& gr, GammaEffMode mode) {
  switch (mode) {
    case GammaEffMode::kGammaZeta: return p.Gamma() * (S(1) - gr.zeta);
    case GammaEffMode::kKappaShift: return gr.kappa_eff + p.Gamma() - p.kappa;
    case GammaEffMode::kGamma: break;
  }
  return p.Gamma();
}

// beta = dG * Lambda^1.  All inverse powers of G are cancelled by hand:
//   W^2/G^3 = Gamma^2 G/q^2,  W dW/G^3 = 2 Gamma^2 dG/q^2,  q = Gamma^2 + Delta^2.
template <class S>
S friction_from_point(const BasicParams<S>& p, const BasicHotCavityPoint<S>& h, FrictionForm form) {
  const S Gm = p.Gamma();
  const S Dl = p.delta;
  const S q = Gm * Gm + Dl * Dl;
  const S ke = h.gain.kappa_eff;
  const S Meta = S(p.m_atoms) * h.gain.eta;
  const S k = form == FrictionForm::kPaper ? p.kappa : S(0);
  const S G = h.G, dG = h.dG, W = h.W, Z = h.Z, D = h.d_eff;
  const S G2 = G * G;
  const S dW = S(2) * Gm * G * dG / q;
  const S dZ = h.dZdW * dW;
  const S D3 = D * D * D;

  const S t1 = -Dl * (Gm * Gm * G / (q * q)) * dZ / (Gm * Gm * D3) * (p.nu * W + Meta * (Gm + W)) *
               (S(4) * ke * ke * Gm * Gm * Gm + G2 * (ke * ke * (Gm - k) + Gm * Gm * (Gm - S(2) * ke) * Z));
  const S t2 = -Dl * (S(2) * Gm * Gm * dG / (q * q)) / (Gm * Gm * D3) * (ke * p.nu + Meta * Gm * Z) *
               (S(2) * ke * Gm * Gm * (ke * (Gm - W) + Gm * W * Z) -
                G2 * (k * ke * ke - Gm * Gm * (Gm - ke) * Z + W * (ke - Gm * Z) * (ke - Gm * Z)));
  return dG * (t1 + t2);
}

template <class S>
S friction(const BasicParams<S>& p, S theta, FrictionForm form = FrictionForm::kExact) {
  return friction_from_point(p, extra_atom_steady(p, theta), form);
}

template <class S>
struct BasicMotionPoint {
  S theta;
  S beta;
  S d_act, d_sin, d_se, d_tot;
};
using MotionPoint = BasicMotionPoint<double>;

// Medium-noise part of the force diffusion.
template <class S>
S diffusion_active(const BasicParams<S>& p, const BasicHotCavityPoint<S>& h) {
  const S Gm = p.Gamma();
  const S Dl = p.delta;
  const S q = Gm * Gm + Dl * Dl;
  const S w = emission_rate(p);
  const S M = S(p.m_atoms);
  if (p.m_atoms == 0 || p.g == S(0)) return S(0);
  const S D = q * h.d_eff;
  const S pre = Gm * Gm * Dl * Dl * h.G * h.G * h.Z * h.Z * h.dG * h.dG / (D * D) * M * w /
                (Gm * (Gm + w) * (Gm + w));
  const S brace = Gm * Gm * Gm * h.N + (p.kappa * Gm * Gm + (p.gamma - p.nu) * w * Gm) * h.P_bar +
                  Gm * Gm / p.g * (p.kappa * (Gm + w) + w * (p.gamma - p.nu)) * (Gm * Gm - Dl * Dl) /
                      (Gm * Gm) * h.sigma_bar +
                  p.nu * (w * Gm + Gm * Gm);
  return pre * brace;
}

// Single-atom and cavity-noise part.
template <class S>
S diffusion_single(const BasicParams<S>& p, const BasicHotCavityPoint<S>& h, DsinForm form,
                   GammaEffMode mode) {
  const S Gm = p.Gamma();
  const S Dl = p.delta;
  const S q = Gm * Gm + Dl * Dl;
  const S ke = h.gain.kappa_eff;
  const S k = p.kappa;
  const S Meta = S(p.m_atoms) * h.gain.eta;
  const S G = h.G, W = h.W, Z = h.Z, De = h.d_eff;
  const S G2 = G * G;
  const S D = q * De;
  const S nu = p.nu, ga = p.gamma;
  const S c = ke - Gm * Z;

  const S t1 = k * Gm * Gm * Dl * Dl * G2 * Z * Z * (nu * W + Meta * (Gm + W));
  const S t3 = S(2) * W * Dl * Dl * (ke * nu + Meta * Gm * Z) * (ke * (ga - nu) + k * Gm * Z) *
               (S(2) * ke * Gm + c * G2 / Gm);
  const S last = q * ke * ke * Gm * Gm + G2 * G2 * c * c + S(2) * ke * Gm * Gm * G2 * c;
  S t2, t4;
  if (form == DsinForm::kDerived) {
    t2 = ke * ke * Dl * Dl * G2 * (nu * (ke * W + S(2) * ga * (ke - W * Z)) + Meta * (nu - ga) * W * Z);
    t4 = (nu * (ke * Gm + (Gm + ke) * W - Gm * W * Z + k * (ke - W * Z)) +
          Meta * (Gm * (Gm + W) - k * W * Z)) * last;
  } else {
    const S ge = gamma_eff(p, h.gain, mode);
    t2 = ke * ke * Dl * Dl * G2 * (ke * W + S(2) * ga * (ke - W * Z) + Meta * (nu - ga) * W * Z);
    t4 = (nu * (ke * Gm + ge * W - Gm * W * Z) + Meta * (Gm * (Gm + W) - k * W * Z)) * last;
  }
  return h.dG * h.dG / (De * D * D) * (t1 + t2 + t3 + t4);
}

// One-dimensional spontaneous-recoil diffusion.
template <class S>
S diffusion_recoil(const BasicParams<S>& p, const BasicHotCavityPoint<S>& h, S geom) {
  return p.gamma * (S(1) + h.Z) / S(2) * geom * p.wavenumber * p.wavenumber;
}

template <class S>
BasicMotionPoint<S> motion_point(const BasicParams<S>& p, S theta, const MotionOptions& opt = {}) {
  const auto h = extra_atom_steady(p, theta);
  BasicMotionPoint<S> m;
  m.theta = theta;
  m.beta = friction_from_point(p, h, opt.friction_form);
  m.d_act = diffusion_active(p, h);
  m.d_sin = diffusion_single(p, h, opt.dsin_form, opt.gamma_eff_mode);
  m.d_se = diffusion_recoil(p, h, S(opt.geom_factor));
  m.d_tot = m.d_act + m.d_sin + m.d_se;
  return m;
}

inline MotionPoint diffusion(const SystemParams& p, double theta, const MotionOptions& opt = {}) {
  return motion_point(p, theta, opt);
}

enum class AveragedQuantity { kBeta, kDiffusion };

struct AverageResult {
  double value;
  int nodes_used;
};

// Uniform Gauss-Legendre average of f over (0, pi); the node count doubles
// from n0 until the relative change drops below rel_tol.
AverageResult average_over_period(const std::function<double(double)>& f, int n0, double rel_tol = 1e-6);

AverageResult spatial_average(const SystemParams& p, AveragedQuantity quantity, const MotionOptions& opt = {});

struct MotionReport {
  double beta_avg;
  double d_avg;
  bool cooling;
  double T;            // hbar kappa / k_B units (k_B = hbar = 1)
  double T_doppler;    // T / gamma; NaN when gamma = 0
  double depth;
  double kin_over_pot;
  double cooling_rate;  // |beta_avg| / m_at
};

MotionReport equilibrium_report(const SystemParams& p, const MotionOptions& opt = {});

}  // namespace hotcavity
