#include <cmath>
#include <numbers>
#include <sstream>

#include "hotcavity/oracles.hpp"
#include "hotcavity/scaling.hpp"

namespace hotcavity {

namespace {

std::string describe(const SystemParams& p, double theta) {
  std::ostringstream os;
  os.precision(6);
  os << "gamma=" << p.gamma << " nu=" << p.nu << " delta=" << p.delta << " g=" << p.g << " kappa=" << p.kappa
     << " M=" << p.m_atoms << " theta=" << theta;
  return os.str();
}

}  // namespace

std::vector<PinnedPoint> pinned_grid() {
  constexpr double pi = std::numbers::pi;
  auto P = [](double gamma, double nu, double delta, double g, int m) {
    SystemParams p;
    p.gamma = gamma;
    p.nu = nu;
    p.delta = delta;
    p.g = g;
    p.m_atoms = m;
    return p;
  };
  SystemParams base6;
  base6.gamma = 0;
  base6.delta = 50;
  base6.g = 1;
  auto fig6 = [&](double y, int m) {
    SystemParams b = base6;
    b.nu = y * b.delta;
    return rescale(b, m, 2.0);
  };
  // The first eight points sit in the good-cavity regime of the Fig. 1/3/5 families.
  return {
      {"fig1-a", P(1, 20, 20, 5, 4), pi / 8},
      {"fig1-b", P(1, 30, 20, 5, 10), 0.3},
      {"fig3-a", P(10, 30, 40, 4, 10), pi / 8},
      {"fig3-b", P(10, 20, 40, 4, 50), 0.2},
      {"fig3-c", P(10, 40, 40, 4, 100), 0.7},
      {"fig5-a", P(10, 20, 40, 4, 10), pi / 8},
      {"fig5-b", P(10, 20, 20, 4, 30), 0.5},
      {"fig5-c", P(10, 20, 80, 4, 5), 1.2},
      {"fig1-c", P(1, 10, 20, 5, 20), 1.0},
      {"fig6-a", fig6(0.25, 10), 0.9},
      {"fig6-b", fig6(0.5, 50), 0.3},
      {"fig6-c", fig6(1.0, 100), 0.4},
  };
}

std::vector<OracleReport> run_validation(const ValidationOptions& opt) {
  std::vector<OracleReport> out;
  const auto grid = pinned_grid();
  const std::size_t n_friction = opt.quick ? 3 : 8;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& pt = grid[i];
    const auto& p = pt.params;
    const std::string where = pt.label + " (" + describe(p, pt.theta) + ")";
    try {
      const auto gr = gain_quantities(p, true);
      out.push_back(compare("z_{M+1}", where, gr.z_med, numeric_zM(p, p.m_atoms + 1).z, 1e-6));
      if (p.m_atoms >= 1)
        out.push_back(compare("z_M", where, gain_quantities(p, false).z_med, numeric_zM(p, p.m_atoms).z, 1e-6));

      const auto h = extra_atom_steady(p, pt.theta);
      const auto num = numeric_extra_atom(p, pt.theta);
      out.push_back(compare("Z", where, h.Z, num.Z, 1e-6));
      out.push_back(compare("N", where, h.N, num.N, 1e-6));
      out.push_back(compare("F", where, h.F, num.F, 1e-8));

      if (i < n_friction) {
        const double beta = friction_from_point(p, h, opt.motion.friction_form);
        out.push_back(compare("beta", where, beta, dragged_friction(p, pt.theta).beta, 1e-2));
      }
      MotionOptions mo = opt.motion;
      const auto mp = motion_point(p, pt.theta, mo);
      try {
        const auto nd = numeric_diffusion(p, pt.theta);
        out.push_back(compare("d_act+d_sin", where, mp.d_act + mp.d_sin, nd.d, 1e-6));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnstableLinearization) throw;
        const auto nd = numeric_diffusion(p, pt.theta, {.allow_unstable = true});
        out.push_back(compare("d_act+d_sin", where + " [formal: unstable linearization]", mp.d_act + mp.d_sin,
                              nd.d, 1e-6));
      }
    } catch (const std::exception& e) {
      out.push_back({"evaluation", where + ": " + e.what(), std::nan(""), std::nan(""), std::nan(""), 0.0, false});
    }
  }

  // Einstein relation against a constant-coefficient Langevin run at the Fig. 5 point.
  SystemParams p5;
  p5.gamma = 10;
  p5.nu = 20;
  p5.delta = 40;
  p5.g = 4;
  p5.m_atoms = 30;
  const auto rep = equilibrium_report(p5, opt.motion);
  if (rep.cooling) {
    const double duration = (opt.quick ? 2e4 : 1e5) / rep.cooling_rate;
    const auto est = langevin_temperature(rep.beta_avg, rep.d_avg, p5.omega_rec, duration, 7);
    out.push_back(compare("T_langevin", "fig5 M=30 delta=40", rep.T, est.T, 0.05));
  } else {
    out.push_back({"T_langevin", "fig5 M=30 delta=40: no cooling", std::nan(""), std::nan(""), std::nan(""), 0.05,
                   false});
  }
  return out;
}

}  // namespace hotcavity
