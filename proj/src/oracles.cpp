#include "hotcavity/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

namespace hotcavity {

namespace odeint = boost::numeric::odeint;
using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::Vector4d;
using Eigen::VectorXd;

OracleReport compare(std::string quantity, std::string point, double analytic, double oracle, double tol) {
  const double scale = std::max(std::abs(analytic), std::abs(oracle));
  const double err = scale == 0 ? 0.0 : std::abs(analytic - oracle) / scale;
  return {std::move(quantity), std::move(point), analytic, oracle, err, tol, err <= tol};
}

namespace {

// Stationary collective expectations (Phi, Pb, Sb, Lb) of n antinode atoms at inversion z.
Vector4d collective_stationary(const SystemParams& p, int n, double z) {
  const double Gm = p.Gamma();
  Matrix4d A;
  A << -2 * p.kappa, 0, n * p.g, 0,
       0, -2 * Gm, -p.g, 0,
       2 * p.g * z, 2 * p.g, -Gm, -p.delta,
       0, 0, p.delta, -Gm;
  const Vector4d b(0, 2 * p.nu, 0, 0);
  return A.partialPivLu().solve(-b);
}

// Phi-independent source and Phi-slope of the medium drive M g Sb, from the
// medium equations alone.
struct MediumDrive {
  double source;  // 2 M eta
  double slope;   // 2 kappa zeta
};

MediumDrive medium_drive(const SystemParams& p, double zm) {
  const double Gm = p.Gamma();
  Eigen::Matrix3d A;
  A << -2 * Gm, -p.g, 0,
       2 * p.g, -Gm, -p.delta,
       0, p.delta, -Gm;
  auto sigma_at = [&](double phi) {
    const Eigen::Vector3d b(2 * p.nu, 2 * p.g * zm * phi, 0);
    return Eigen::Vector3d(A.partialPivLu().solve(-b))[1];
  };
  const double s0 = sigma_at(0.0);
  const double s1 = sigma_at(1.0);
  return {p.m_atoms * p.g * s0, p.m_atoms * p.g * (s1 - s0)};
}

Matrix4d extra_atom_drift(const SystemParams& p, double kappa_eff, double G, double Z) {
  const double Gm = p.Gamma();
  Matrix4d A;
  A << -2 * kappa_eff, 0, G, 0,
       0, -2 * Gm, -G, 0,
       2 * G * Z, 2 * G, -Gm, -p.delta,
       0, 0, p.delta, -Gm;
  return A;
}

using Matrix7d = Eigen::Matrix<double, 7, 7>;
using Vector7d = Eigen::Matrix<double, 7, 1>;

// Medium (Phi, Pb, Sb, Lb) explicit plus the extra atom (Pi, Sigma, Lambda).
Matrix7d full_drift(const SystemParams& p, double zm, double G, double Z) {
  const double Gm = p.Gamma();
  const double Dl = p.delta;
  const double g = p.g;
  Matrix7d A = Matrix7d::Zero();
  A(0, 0) = -2 * p.kappa;
  A(0, 2) = p.m_atoms * g;
  A(0, 5) = G;
  A(1, 1) = -2 * Gm;
  A(1, 2) = -g;
  A(2, 0) = 2 * g * zm;
  A(2, 1) = 2 * g;
  A(2, 2) = -Gm;
  A(2, 3) = -Dl;
  A(3, 2) = Dl;
  A(3, 3) = -Gm;
  A(4, 4) = -2 * Gm;
  A(4, 5) = -G;
  A(5, 0) = 2 * G * Z;
  A(5, 4) = 2 * G;
  A(5, 5) = -Gm;
  A(5, 6) = -Dl;
  A(6, 5) = Dl;
  A(6, 6) = -Gm;
  return A;
}

Vector7d full_stationary(const SystemParams& p, double zm, double G, double Z) {
  Vector7d b = Vector7d::Zero();
  b(1) = 2 * p.nu;
  b(4) = 2 * p.nu;
  return full_drift(p, zm, G, Z).partialPivLu().solve(-b);
}

// Self-consistent extra-atom inversion: lowest root of 2 Pi(Z) - 1 - Z in
// the region where the photon number stays positive.
template <class Stationary>
double solve_inversion(Stationary&& stationary, double hint = std::numeric_limits<double>::quiet_NaN()) {
  auto residual = [&](double Z) {
    const auto [phi, pi] = stationary(Z);
    (void)phi;
    return 2 * pi - 1 - Z;
  };
  auto photons_ok = [&](double Z) { return stationary(Z).first > -1e-12; };

  double lo = -1.0, hi = std::numeric_limits<double>::quiet_NaN();
  if (std::isfinite(hint)) {
    for (double d = 1e-4; d < 2; d *= 4) {
      const double a = std::max(-1.0, hint - d), b = std::min(1.0, hint + d);
      if (photons_ok(a) && photons_ok(b) && residual(a) > 0 && residual(b) < 0) {
        lo = a;
        hi = b;
        break;
      }
    }
  }
  if (!std::isfinite(hi)) {
    double r_lo = residual(lo);
    if (r_lo == 0) return lo;
    const int steps = 400;
    for (int i = 1; i <= steps; ++i) {
      const double Z = -1.0 + 2.0 * i / steps;
      if (!photons_ok(Z)) break;
      const double r = residual(Z);
      if (r == 0) return Z;
      if ((r > 0) != (r_lo > 0)) {
        hi = Z;
        break;
      }
      lo = Z;
      r_lo = r;
    }
    if (!std::isfinite(hi)) throw Error(ErrorCode::NoConvergence, "no inversion root bracketed");
  }
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(53);
  auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, tol, iters);
  return 0.5 * (a + b);
}

struct ExtraAtomModel {
  const SystemParams& p;
  double kappa_eff;
  double source;

  Vector4d stationary(double G, double Z) const {
    const Vector4d b(source, 2 * p.nu, 0, 0);
    return extra_atom_drift(p, kappa_eff, G, Z).partialPivLu().solve(-b);
  }
  double inversion(double G, double hint) const {
    return solve_inversion(
        [&](double Z) {
          const Vector4d y = stationary(G, Z);
          return std::pair<double, double>(y[0], y[1]);
        },
        hint);
  }
};

ExtraAtomModel reduced_model(const SystemParams& p, double zm) {
  const auto drive = medium_drive(p, zm);
  return {p, p.kappa - 0.5 * drive.slope, drive.source};
}

}  // namespace

CollectiveFixedPoint numeric_zM(const SystemParams& p, int n, double tol, int max_iter) {
  auto step = [&](double z, Vector4d& y) {
    y = collective_stationary(p, n, z);
    return 2 * y[1] - 1;
  };
  auto admissible = [](const Vector4d& y) {
    return y.allFinite() && y[0] >= 0 && y[1] >= 0 && y[1] <= 1;
  };

  Vector4d y;
  double z = 0.0;
  double r = step(z, y) - z;
  double lam = 0.5;
  int it = 0;
  for (; it < max_iter && std::abs(r) > tol; ++it) {
    Vector4d y_new;
    const double z_new = z + lam * r;
    const double r_new = step(z_new, y_new) - z_new;
    if (!admissible(y_new) || !(std::abs(r_new) < std::abs(r))) {
      lam *= 0.5;  // overshoot or oscillation
      if (lam < 1e-300) break;
      continue;
    }
    z = z_new;
    r = r_new;
    y = y_new;
  }
  if (std::abs(r) > tol) throw Error(ErrorCode::NoConvergence, "collective fixed point");
  y = collective_stationary(p, n, z);
  return {z, y[0], y[1], y[2], y[3], it};
}

ExtraAtomNumeric numeric_extra_atom(const SystemParams& p, double theta, double zm_tol) {
  const double zm = numeric_zM(p, p.m_atoms + 1, zm_tol).z;
  const double G = p.g * std::cos(theta);
  const double dG = -p.g * std::sin(theta);
  const double Z = solve_inversion([&](double Zt) {
    const Vector7d y = full_stationary(p, zm, G, Zt);
    return std::pair<double, double>(y[0], y[4]);
  });
  const Vector7d y = full_stationary(p, zm, G, Z);
  const auto drive = medium_drive(p, zm);
  ExtraAtomNumeric r;
  r.Z = Z;
  r.N = y[0];
  r.Pi = y[4];
  r.Sigma = y[5];
  r.Lambda = y[6];
  r.F = dG * y[6];
  r.kappa_eff = p.kappa - 0.5 * drive.slope;
  r.m_eta = 0.5 * drive.source;
  return r;
}

DragResult dragged_friction(const SystemParams& p, double theta, const std::vector<double>& v_list) {
  const double zm = numeric_zM(p, p.m_atoms + 1, 1e-13).z;
  const ExtraAtomModel model = reduced_model(p, zm);
  const double G0 = p.g * std::cos(theta);
  const double dG0 = -p.g * std::sin(theta);
  const double Z0 = model.inversion(G0, std::numeric_limits<double>::quiet_NaN());

  Eigen::EigenSolver<Matrix4d> es(extra_atom_drift(p, model.kappa_eff, G0, Z0));
  double slowest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    if (!(es.eigenvalues()[i].real() < 0)) throw Error(ErrorCode::NoPeriodicState, "unstable internal dynamics");
    slowest = std::min(slowest, -es.eigenvalues()[i].real());
  }
  const double t_relax = 40.0 / slowest;

  using State = std::array<double, 4>;
  auto force_at = [&](double v) {
    double z_cache = Z0;
    auto coupling = [&](double t) { return p.g * std::cos(theta + v * (t - t_relax)); };
    auto sys = [&](const State& y, State& dy, double t) {
      const double G = coupling(t);
      z_cache = model.inversion(G, z_cache);
      const Matrix4d A = extra_atom_drift(p, model.kappa_eff, G, z_cache);
      const Vector4d Y(y[0], y[1], y[2], y[3]);
      const Vector4d d = A * Y + Vector4d(model.source, 2 * p.nu, 0, 0);
      for (int i = 0; i < 4; ++i) dy[i] = d[i];
    };
    const double G_start = coupling(0.0);
    const Vector4d y0 = model.stationary(G_start, model.inversion(G_start, Z0));
    State y{y0[0], y0[1], y0[2], y0[3]};
    odeint::integrate_adaptive(odeint::make_controlled(1e-14, 1e-12, odeint::runge_kutta_dopri5<State>()), sys, y,
                               0.0, t_relax, 1e-3);
    return dG0 * y[3];
  };

  DragResult out;
  std::vector<double> mags;
  for (double v : v_list) mags.push_back(std::abs(v));
  std::sort(mags.begin(), mags.end());
  mags.erase(std::unique(mags.begin(), mags.end()), mags.end());
  if (mags.empty() || mags.front() == 0) throw Error(ErrorCode::InvariantViolation, "drag speeds must be nonzero");

  for (double v : mags) {
    out.v.push_back(v);
    out.f_odd.push_back(0.5 * (force_at(v) - force_at(-v)));
  }
  if (mags.size() == 1) {
    out.beta = out.f_odd[0] / out.v[0];
    return out;
  }
  // Least squares in the odd basis v, v^3.
  Eigen::MatrixXd B(mags.size(), 2);
  Eigen::VectorXd f(mags.size());
  for (std::size_t i = 0; i < mags.size(); ++i) {
    B(i, 0) = mags[i];
    B(i, 1) = mags[i] * mags[i] * mags[i];
    f[i] = out.f_odd[i];
  }
  out.beta = B.colPivHouseholderQr().solve(f)[0];
  return out;
}

MatrixXd solve_lyapunov(const MatrixXd& A, const MatrixXd& Q) {
  const Eigen::Index n = A.rows();
  const MatrixXd I = MatrixXd::Identity(n, n);
  MatrixXd K(n * n, n * n);
  // vec(A S + S A^T) = (I kron A + A kron I) vec(S), column-major vec.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      K.block(i * n, j * n, n, n) = I(i, j) * A + A(i, j) * I;
  const VectorXd q = Eigen::Map<const VectorXd>(Q.data(), n * n);
  const VectorXd s = K.partialPivLu().solve(-q);
  return Eigen::Map<const MatrixXd>(s.data(), n, n);
}

DiffusionNumeric numeric_diffusion(const SystemParams& p, double theta, const DiffusionOracleOptions& opt) {
  const int M = p.m_atoms;
  const double zm = numeric_zM(p, M + 1, 1e-13).z;
  const double G = p.g * std::cos(theta);
  const double dG = -p.g * std::sin(theta);
  const double Z = solve_inversion([&](double Zt) {
    const Vector7d y = full_stationary(p, zm, G, Zt);
    return std::pair<double, double>(y[0], y[4]);
  });
  const Matrix7d A = full_drift(p, zm, G, Z);
  const Vector7d y = full_stationary(p, zm, G, Z);

  Eigen::EigenSolver<Matrix7d> es(A);
  for (int i = 0; i < 7; ++i)
    if (!(es.eigenvalues()[i].real() < 0) && !opt.allow_unstable)
      throw Error(ErrorCode::UnstableLinearization,
                  "drift eigenvalue with real part " + std::to_string(es.eigenvalues()[i].real()));

  // Symmetrised noise moments from the damping terms of the master equation.
  const double k = p.kappa, ga = p.gamma, nu = p.nu, Gm = p.Gamma();
  const double Phi = y[0], Pb = y[1], Sb = y[2], Lb = y[3], P = y[4], S = y[5], L = y[6];
  Matrix7d Qmed = Matrix7d::Zero(), Qrest = Matrix7d::Zero();
  if (M > 0) {
    const double inv = 1.0 / M;
    Qmed(1, 1) = (2 * ga * Pb + 2 * nu * (1 - Pb)) * inv;
    Qmed(1, 2) = Qmed(2, 1) = (ga - nu) * Sb * inv;
    Qmed(1, 3) = Qmed(3, 1) = (ga - nu) * Lb * inv;
    Qmed(2, 2) = Qmed(3, 3) = (2 * Gm * Phi + 2 * nu + 2 * k * Pb) * inv;
    Qmed(0, 2) = Qmed(2, 0) = k * Sb;
    Qmed(0, 3) = Qmed(3, 0) = k * Lb;
  }
  Qrest(0, 0) = 2 * k * Phi;
  Qrest(0, 5) = Qrest(5, 0) = k * S;
  Qrest(0, 6) = Qrest(6, 0) = k * L;
  Qrest(4, 4) = 2 * ga * P + 2 * nu * (1 - P);
  Qrest(4, 5) = Qrest(5, 4) = (ga - nu) * S;
  Qrest(4, 6) = Qrest(6, 4) = (ga - nu) * L;
  Qrest(5, 5) = Qrest(6, 6) = 2 * Gm * Phi + 2 * nu + 2 * k * P;
  if (opt.zero_noise) Qmed.setZero(), Qrest.setZero();

  // Zero-frequency correlation integral from the stationary covariance.
  const MatrixXd Ainv = MatrixXd(A).inverse();
  auto integral = [&](const Matrix7d& Q) {
    const MatrixXd Sst = solve_lyapunov(A, Q);
    const MatrixXd Kint = -(Ainv * Sst + Sst * Ainv.transpose());
    return 0.5 * dG * dG * Kint(6, 6);
  };
  DiffusionNumeric out;
  out.d_medium = integral(Qmed);
  out.d = out.d_medium + integral(Qrest);
  out.drift = A;
  out.noise = Qmed + Qrest;
  return out;
}

LangevinEstimate langevin_temperature(double beta, double d, double omega_rec, double duration, std::uint64_t seed) {
  if (!(beta < 0) || !(d > 0)) throw Error(ErrorCode::InvariantViolation, "need beta < 0 and d > 0");
  const double inv_mass = 2 * omega_rec;
  const double rate = -beta * inv_mass;
  const double dt = 0.01 / rate;
  const double amp = std::sqrt(2 * d * dt);
  const auto burn = static_cast<std::uint64_t>(10.0 / rate / dt);
  const auto steps = static_cast<std::uint64_t>(duration / dt);
  const std::uint64_t block = static_cast<std::uint64_t>(20.0 / rate / dt);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  double p = 0;
  for (std::uint64_t i = 0; i < burn; ++i) p += beta * inv_mass * p * dt + amp * n01(rng);

  std::vector<double> means;
  double acc = 0;
  std::uint64_t in_block = 0;
  for (std::uint64_t i = 0; i < steps; ++i) {
    p += beta * inv_mass * p * dt + amp * n01(rng);
    acc += p * p;
    if (++in_block == block) {
      means.push_back(acc / block);
      acc = 0;
      in_block = 0;
    }
  }
  if (means.size() < 2) throw Error(ErrorCode::InvariantViolation, "duration too short for blocking");
  double mean = 0;
  for (double m : means) mean += m;
  mean /= means.size();
  double var = 0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (means.size() - 1);
  return {inv_mass * mean, inv_mass * std::sqrt(var / means.size()), steps};
}

}  // namespace hotcavity
