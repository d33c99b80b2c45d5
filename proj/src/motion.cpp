#include "hotcavity/motion.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace hotcavity {

std::string to_string(FrictionForm f) { return f == FrictionForm::kExact ? "exact" : "paper"; }
std::string to_string(DsinForm f) { return f == DsinForm::kDerived ? "derived" : "paper"; }
std::string to_string(GammaEffMode m) {
  switch (m) {
    case GammaEffMode::kGamma: return "gamma";
    case GammaEffMode::kGammaZeta: return "gamma-zeta";
    case GammaEffMode::kKappaShift: return "kappa-shift";
  }
  return "gamma";
}

FrictionForm parse_friction_form(const std::string& s) {
  if (s == "exact") return FrictionForm::kExact;
  if (s == "paper") return FrictionForm::kPaper;
  throw Error(ErrorCode::Usage, "friction form must be exact|paper, got " + s);
}

DsinForm parse_dsin_form(const std::string& s) {
  if (s == "derived") return DsinForm::kDerived;
  if (s == "paper") return DsinForm::kPaper;
  throw Error(ErrorCode::Usage, "dsin form must be derived|paper, got " + s);
}

GammaEffMode parse_gamma_eff_mode(const std::string& s) {
  if (s == "gamma") return GammaEffMode::kGamma;
  if (s == "gamma-zeta") return GammaEffMode::kGammaZeta;
  if (s == "kappa-shift") return GammaEffMode::kKappaShift;
  throw Error(ErrorCode::Usage, "gamma-eff mode must be gamma|gamma-zeta|kappa-shift, got " + s);
}

namespace {

struct Rule {
  std::vector<double> x, w;  // on [-1, 1]
};

template <unsigned N>
Rule make_rule() {
  using Q = boost::math::quadrature::gauss<double, N>;
  const auto& a = Q::abscissa();
  const auto& wt = Q::weights();
  Rule r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(wt[i]);
      continue;
    }
    r.x.push_back(a[i]);
    r.w.push_back(wt[i]);
    r.x.push_back(-a[i]);
    r.w.push_back(wt[i]);
  }
  return r;
}

const Rule& rule(int n) {
  static const std::array<Rule, 7> rules = {make_rule<16>(),  make_rule<32>(),  make_rule<64>(),
                                            make_rule<128>(), make_rule<256>(), make_rule<512>(),
                                            make_rule<1024>()};
  int idx = 0;
  for (int m = 16; m < n && idx < 6; m *= 2) ++idx;
  return rules[idx];
}

double apply(const Rule& r, const std::function<double(double)>& f) {
  constexpr double pi = std::numbers::pi;
  double acc = 0;
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const double th = 0.5 * pi * (r.x[i] + 1);
    if (std::abs(std::cos(th)) < 1e-6) continue;  // node neighbourhood
    acc += r.w[i] * f(th);
  }
  return 0.5 * acc;
}

}  // namespace

AverageResult average_over_period(const std::function<double(double)>& f, int n0, double rel_tol) {
  if (n0 < 16) throw Error(ErrorCode::InvariantViolation, "quadrature needs >= 16 nodes");
  int n = 16;
  while (n < n0 && n < 1024) n *= 2;
  double prev = apply(rule(n), f);
  while (n < 1024) {
    const int next = 2 * n;
    const double cur = apply(rule(next), f);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) || (cur == 0 && prev == 0)) return {prev, n};
    prev = cur;
    n = next;
  }
  throw Error(ErrorCode::NonConvergentQuadrature, "no convergence up to 1024 nodes");
}

AverageResult spatial_average(const SystemParams& p, AveragedQuantity quantity, const MotionOptions& opt) {
  if (quantity == AveragedQuantity::kBeta)
    return average_over_period([&](double t) { return friction(p, t, opt.friction_form); },
                               opt.quadrature_nodes);
  return average_over_period([&](double t) { return motion_point(p, t, opt).d_tot; }, opt.quadrature_nodes);
}

MotionReport equilibrium_report(const SystemParams& p, const MotionOptions& opt) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  MotionReport r;
  r.beta_avg = spatial_average(p, AveragedQuantity::kBeta, opt).value;
  r.d_avg = spatial_average(p, AveragedQuantity::kDiffusion, opt).value;
  r.cooling = r.beta_avg < 0;
  r.cooling_rate = std::abs(r.beta_avg) * 2 * p.omega_rec;
  const auto prof = optical_potential(p, uniform_grid(0, std::numbers::pi, 129));
  r.depth = prof.depth;
  if (!r.cooling) {
    r.T = r.T_doppler = r.kin_over_pot = nan;
    return r;
  }
  r.T = r.d_avg / std::abs(r.beta_avg);
  r.T_doppler = p.gamma > 0 ? r.T / p.gamma : nan;
  r.kin_over_pot = 0.5 * r.T / r.depth;
  return r;
}

}  // namespace hotcavity
