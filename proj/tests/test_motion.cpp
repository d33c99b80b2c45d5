#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hotcavity/motion.hpp"
#include "hotcavity/oracles.hpp"
#include "params.hpp"

using namespace hotcavity;
using fixtures::fig3;
using fixtures::fig5;
using fixtures::rel;

constexpr double kPi = std::numbers::pi;

TEST_CASE("friction vanishes at the antinode") {
  CHECK(friction(fig5(10), 0.0) == 0.0);
  CHECK(friction(fig5(10), 0.0, FrictionForm::kPaper) == 0.0);
}

TEST_CASE("friction is regular at the node and matches the dragged atom there") {
  // The coupling is linear in the displacement at a node, so the lag term survives.
  const auto p = fig5(10);
  const double b = friction(p, kPi / 2);
  CHECK(std::isfinite(b));
  CHECK(rel(b, dragged_friction(p, kPi / 2).beta) < 1e-2);
}

TEST_CASE("friction damps at the cooling point and matches the dragged atom") {
  const auto p = fig5(10);
  const double b = friction(p, kPi / 8);
  CHECK(b < 0);
  CHECK(rel(b, dragged_friction(p, kPi / 8).beta) < 1e-2);
}

TEST_CASE("the two friction forms agree when the cavity terms are small") {
  // They differ only by terms proportional to the bare kappa.
  auto p = fig5(10);
  const double e = friction(p, 0.4), q = friction(p, 0.4, FrictionForm::kPaper);
  CHECK(std::isfinite(q));
  CHECK(rel(q, e) < 0.5);
}

TEST_CASE("friction and diffusion are even about the antinode") {
  const auto p = fig3(20);
  for (double th : {0.1, 0.5, 1.2}) {
    CHECK(friction(p, th) == doctest::Approx(friction(p, -th)).epsilon(1e-13));
    CHECK(diffusion(p, th).d_tot == doctest::Approx(diffusion(p, -th).d_tot).epsilon(1e-13));
  }
}

TEST_CASE("diffusion components: limits") {
  CHECK(diffusion(fig5(0), 0.4).d_act == 0.0);
  CHECK(diffusion(fig5(10), 0.0).d_act == 0.0);
  CHECK(std::abs(diffusion(fig5(10), kPi / 2).d_act) < 1e-20);
  auto p = fig5(10);
  p.gamma = 0;
  CHECK(diffusion(p, 0.3).d_se == 0.0);
  const auto m = diffusion(fig5(10), 0.3);
  CHECK(m.d_tot == doctest::Approx(m.d_act + m.d_sin + m.d_se));
}

TEST_CASE("d_act is non-negative across the cooling regime") {
  for (int m : {1, 10, 30, 100}) {
    for (double delta : {20.0, 40.0, 80.0}) {
      for (int i = 1; i < 40; ++i) {
        const auto pt = diffusion(fig5(m, delta), i * kPi / 40);
        CHECK(pt.d_act >= 0);
        CHECK(pt.d_se >= 0);
      }
    }
  }
}

TEST_CASE("derived single-atom diffusion matches the fluctuation oracle") {
  const auto p = fig5(10);
  const auto m = diffusion(p, kPi / 8);
  CHECK(rel(m.d_act + m.d_sin, numeric_diffusion(p, kPi / 8).d) < 1e-6);
}

TEST_CASE("gamma_eff candidates") {
  const auto p = fig5(10);
  const auto gr = gain_quantities(p, true);
  CHECK(gamma_eff(p, gr, GammaEffMode::kGamma) == p.Gamma());
  CHECK(gamma_eff(p, gr, GammaEffMode::kGammaZeta) == doctest::Approx(p.Gamma() * (1 - gr.zeta)));
  CHECK(gamma_eff(p, gr, GammaEffMode::kKappaShift) == doctest::Approx(gr.kappa_eff + p.Gamma() - 1));
}

TEST_CASE("enum names round trip") {
  for (auto m : {GammaEffMode::kGamma, GammaEffMode::kGammaZeta, GammaEffMode::kKappaShift})
    CHECK(parse_gamma_eff_mode(to_string(m)) == m);
  for (auto f : {FrictionForm::kExact, FrictionForm::kPaper}) CHECK(parse_friction_form(to_string(f)) == f);
  for (auto f : {DsinForm::kDerived, DsinForm::kPaper}) CHECK(parse_dsin_form(to_string(f)) == f);
  CHECK_THROWS_AS(parse_dsin_form("nope"), Error);
}

TEST_CASE("period average of simple functions") {
  CHECK(average_over_period([](double) { return 3.5; }, 16).value == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(average_over_period([](double t) { return std::sin(t) * std::sin(t); }, 16).value ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(average_over_period([](double) { return 1.0; }, 8), Error);
}

TEST_CASE("period average reports non-convergence") {
  auto rough = [](double t) { return t < 1.0 ? 1.0 : 0.0; };
  CHECK_THROWS_AS(average_over_period(rough, 16, 1e-12), Error);
}

TEST_CASE("averaged friction without a medium equals the single-atom average") {
  const auto p = fig5(0);
  const double direct = spatial_average(p, AveragedQuantity::kBeta).value;
  const double manual = average_over_period([&](double t) { return friction(p, t); }, 64).value;
  CHECK(rel(direct, manual) < 1e-6);
}

TEST_CASE("sub-Doppler temperature at M = 30") {
  const auto r = equilibrium_report(fig5(30, 40));
  CHECK(r.cooling);
  CHECK(r.T_doppler < 1);
  CHECK(r.kin_over_pot < 1.1);
  CHECK(r.T == doctest::Approx(r.d_avg / std::abs(r.beta_avg)));
}

TEST_CASE("temperature has an interior minimum in M") {
  std::vector<double> T;
  for (int m = 0; m <= 200; m += 5) T.push_back(equilibrium_report(fig5(m, 40)).T);
  const auto it = std::min_element(T.begin(), T.end());
  CHECK(it != T.begin());
  CHECK(it != T.end() - 1);
}

TEST_CASE("no temperature when heating") {
  auto p = fig5(10, -40);
  const auto r = equilibrium_report(p);
  CHECK_FALSE(r.cooling);
  CHECK(std::isnan(r.T));
}
