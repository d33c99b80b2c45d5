#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hotcavity/motion.hpp"
#include "hotcavity/steady_state.hpp"

namespace hotcavity {

struct OracleReport {
  std::string quantity;
  std::string point;
  double analytic;
  double oracle;
  double rel_error;
  double tolerance;
  bool pass;
};

OracleReport compare(std::string quantity, std::string point, double analytic, double oracle, double tol);

struct CollectiveFixedPoint {
  double z;
  double Phi, P_bar, sigma_bar, lambda_bar;
  int iterations;
};

// Damped fixed-point iteration on the collective inversion of n antinode atoms.
CollectiveFixedPoint numeric_zM(const SystemParams& p, int atom_count, double tol = 1e-10,
                                int max_iter = 100000);

struct ExtraAtomNumeric {
  double Z;
  double N;
  double Pi, Sigma, Lambda;
  double F;
  double kappa_eff, m_eta;
};

// Medium quantities rebuilt from numeric_zM(M+1); Z by bracketing on the
// stationary four-variable system.
ExtraAtomNumeric numeric_extra_atom(const SystemParams& p, double theta, double zm_tol = 1e-13);

struct DragResult {
  double beta;
  std::vector<double> v;
  std::vector<double> f_odd;
};

DragResult dragged_friction(const SystemParams& p, double theta, const std::vector<double>& v_list = {1e-3, 2e-3});

struct DiffusionNumeric {
  double d;         // excludes spontaneous recoil
  double d_medium;  // part driven by medium noise and its cavity cross term
  Eigen::MatrixXd drift;
  Eigen::MatrixXd noise;
};

struct DiffusionOracleOptions {
  bool zero_noise = false;
  // Evaluate the zero-frequency algebra even when the frozen-inversion drift has a
  // growing mode; the result is then a formal value, not a stationary spectrum.
  bool allow_unstable = false;
};

DiffusionNumeric numeric_diffusion(const SystemParams& p, double theta, const DiffusionOracleOptions& opt = {});

// Solves A S + S A^T + Q = 0 through the Kronecker form.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

struct LangevinEstimate {
  double T;
  double stderr_T;
  std::uint64_t steps;
};

LangevinEstimate langevin_temperature(double beta, double d, double omega_rec, double duration, std::uint64_t seed);

struct PinnedPoint {
  std::string label;
  SystemParams params;
  double theta;
};

std::vector<PinnedPoint> pinned_grid();

struct ValidationOptions {
  bool quick = false;
  MotionOptions motion;
};

std::vector<OracleReport> run_validation(const ValidationOptions& opt = {});

}  // namespace hotcavity
