#pragma once

#include <cmath>
#include <map>
#include <string>

#include "hotcavity/error.hpp"

namespace hotcavity {

// All rates in units of the cavity half-linewidth, lengths in units of 1/k.
template <class Scalar>
struct BasicParams {
  Scalar gamma{0};
  Scalar nu{0};
  Scalar delta{0};
  Scalar g{0};
  Scalar kappa{1};
  int m_atoms{0};
  Scalar omega_rec{0.01};
  Scalar wavenumber{1};

  Scalar Gamma() const { return gamma + nu; }
};

using SystemParams = BasicParams<double>;

struct ModeSample {
  double f;
  double df;
};

// Keys: gamma nu delta g kappa m omega_rec wavenumber.  gamma, nu, delta, g
// are required; the rest default.
SystemParams validate_params(const std::map<std::string, double>& raw);

// Throws InvariantViolation naming the first broken bound.
void check_invariants(const SystemParams& p);

inline ModeSample mode(double theta) { return {std::cos(theta), -std::sin(theta)}; }

template <class S>
S emission_rate(const BasicParams<S>& p) {
  const S G = p.Gamma();
  return G * p.g * p.g / (G * G + p.delta * p.delta);
}

template <class S>
S emission_rate(const BasicParams<S>& p, S theta) {
  using std::cos;
  const S G = p.Gamma();
  const S c = p.g * cos(theta);
  return G * c * c / (G * G + p.delta * p.delta);
}

// Decoupled single-atom inversion (nu - gamma)/(nu + gamma).
template <class S>
S free_inversion(const BasicParams<S>& p) {
  return (p.nu - p.gamma) / p.Gamma();
}

}  // namespace hotcavity
