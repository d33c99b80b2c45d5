#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hotcavity/model.hpp"

namespace hotcavity {

struct EnsembleState {
  std::complex<double> alpha{0.0, 0.0};
  Eigen::VectorXcd s;
  Eigen::VectorXd z;
  Eigen::VectorXd theta;  // unwrapped phase k x
  Eigen::VectorXd p;      // momentum in hbar k

  explicit EnsembleState(int m = 0)
      : s(Eigen::VectorXcd::Zero(m)),
        z(Eigen::VectorXd::Zero(m)),
        theta(Eigen::VectorXd::Zero(m)),
        p(Eigen::VectorXd::Zero(m)) {}

  int atoms() const { return static_cast<int>(z.size()); }
  double photons() const { return std::norm(alpha); }

  // Flat layout: Re a, Im a, Re s, Im s, z, theta, p.
  std::vector<double> pack() const;
  static EnsembleState unpack(const std::vector<double>& y, int m);
};

// Pinned atoms keep theta and p fixed.
using PinMask = std::vector<bool>;

EnsembleState rhs(const EnsembleState& x, const SystemParams& p, const PinMask& pinned = {});

struct IntegratorStats {
  std::uint64_t steps = 0;
  std::uint64_t rejected = 0;
  std::uint64_t rhs_evals = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<EnsembleState> states;
  IntegratorStats stats;
};

struct IntegrateOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  PinMask pinned;
};

// Adaptive Dormand-Prince 5(4); the step is clipped to land on every sample time.
Trajectory integrate(const SystemParams& p, const EnsembleState& initial, const std::vector<double>& sample_times,
                     const IntegrateOptions& opt = {});

Trajectory integrate(const SystemParams& p, const EnsembleState& initial, double t_end, int samples,
                     const IntegrateOptions& opt = {});

EnsembleState sample_initial_ensemble(const SystemParams& p, int m, std::uint64_t seed, double v_scale);

// Doppler velocity gamma/k; falls back to kappa/k when gamma = 0.
double doppler_velocity(const SystemParams& p);

struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> N;
  std::vector<double> vbar;  // Doppler units
  std::vector<double> dbar;  // wavelengths
  std::vector<double> dmax;  // wavelengths
  std::vector<std::vector<double>> positions;  // unwrapped, wavelengths
};

double antinode_distance(double theta);  // wavelengths, in [0, 0.25]

ObservableSeries trajectory_observables(const Trajectory& traj, const SystemParams& p);

double energy_balance_residual(const EnsembleState& x, const SystemParams& p);

}  // namespace hotcavity
