#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hotcavity/oracles.hpp"
#include "params.hpp"

using namespace hotcavity;
using fixtures::fig3;
using fixtures::fig5;
using fixtures::rel;

constexpr double kPi = std::numbers::pi;

TEST_CASE("collective fixed point: decoupled limit") {
  auto p = fig3(10);
  p.g = 1e-6;
  CHECK(numeric_zM(p, 10).z == doctest::Approx(free_inversion(p)).epsilon(1e-9));
}

TEST_CASE("collective fixed point agrees with the closed form") {
  const auto p = fig3(10, 30);
  CHECK(rel(numeric_zM(p, 10).z, collective_inversion(p, 10)) < 1e-6);
}

TEST_CASE("collective fixed point gives zeta < 1 on random draws") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    auto p = fixtures::make(10 * u(rng), 0, 100 * (u(rng) - 0.5), 10 * u(rng), 1 + int(100 * u(rng)));
    p.nu = p.gamma + 40 * u(rng) + 1e-3;
    const double z = numeric_zM(p, p.m_atoms + 1).z;
    const double w = emission_rate(p);
    const double zeta = p.m_atoms * p.Gamma() * w * z / (p.kappa * (p.Gamma() + w));
    CHECK(zeta < 1);
  }
}

TEST_CASE("extra-atom oracle: symmetry points") {
  const auto p = fig3(10);
  CHECK(numeric_extra_atom(p, 0.0).F == 0.0);
  const auto at_node = numeric_extra_atom(p, kPi / 2);
  const auto h = extra_atom_steady(p, kPi / 2);
  CHECK(rel(at_node.N, h.N) < 1e-9);
}

TEST_CASE("extra-atom oracle force agrees with the closed form") {
  const auto p = fig3(10);
  CHECK(rel(numeric_extra_atom(p, kPi / 8).F, dipole_force(p, kPi / 8)) < 1e-8);
}

TEST_CASE("dragged friction: zero at the antinode, linear in small speeds") {
  const auto p = fig5(10);
  CHECK(std::abs(dragged_friction(p, 0.0).beta) < 1e-8);
  const auto d = dragged_friction(p, kPi / 8, {1e-3, 2e-3});
  const double s1 = d.f_odd[0] / d.v[0], s2 = d.f_odd[1] / d.v[1];
  CHECK(rel(s1, s2) < 1e-3);
  CHECK(rel(d.beta, friction(p, kPi / 8)) < 1e-2);
}

TEST_CASE("dragged friction rejects a zero speed") {
  CHECK_THROWS_AS(dragged_friction(fig5(10), 0.3, {0.0}), Error);
}

TEST_CASE("fluctuation oracle: zero noise and empty medium") {
  const auto p = fig5(10);
  CHECK(numeric_diffusion(p, kPi / 8, {.zero_noise = true}).d == 0.0);
  CHECK(numeric_diffusion(fig5(0), kPi / 8).d_medium == 0.0);
  const auto m = diffusion(p, kPi / 8);
  CHECK(rel(numeric_diffusion(p, kPi / 8).d, m.d_act + m.d_sin) < 1e-6);
}

TEST_CASE("fluctuation oracle refuses a growing mode unless asked") {
  const auto p = hotcavity::pinned_grid()[10];
  CHECK(p.label == "fig6-b");
  CHECK_THROWS_AS(numeric_diffusion(p.params, p.theta), Error);
  CHECK(std::isfinite(numeric_diffusion(p.params, p.theta, {.allow_unstable = true}).d));
}

TEST_CASE("Lyapunov solve on a scalar and a 2x2 system") {
  Eigen::MatrixXd A(1, 1), Q(1, 1);
  A << -2;
  Q << 4;
  CHECK(solve_lyapunov(A, Q)(0, 0) == doctest::Approx(1.0));
  Eigen::MatrixXd B(2, 2), R(2, 2);
  B << -1, 2, 0, -3;
  R << 1, 0.2, 0.2, 2;
  const Eigen::MatrixXd S = solve_lyapunov(B, R);
  CHECK((B * S + S * B.transpose() + R).norm() < 1e-12);
}

TEST_CASE("Ornstein-Uhlenbeck temperature") {
  const auto e = langevin_temperature(-1.0, 1.0, 0.05, 4e4, 3);
  CHECK(std::abs(e.T - 1.0) < 3 * e.stderr_T);
  const auto f = langevin_temperature(-1.0, 1.0, 0.05, 4e4, 3);
  CHECK(e.T == f.T);
  CHECK_THROWS_AS(langevin_temperature(1.0, 1.0, 0.05, 10, 1), Error);
}

TEST_CASE("Einstein relation against the Langevin run at the cooling point") {
  const auto p = fig5(30);
  const auto r = equilibrium_report(p);
  const auto e = langevin_temperature(r.beta_avg, r.d_avg, p.omega_rec, 1e5 / r.cooling_rate, 7);
  CHECK(rel(e.T, r.T) < 0.05);
}

TEST_CASE("pinned grid has twelve labelled points") {
  const auto g = pinned_grid();
  CHECK(g.size() == 12);
  for (const auto& pt : g) {
    CHECK_NOTHROW(check_invariants(pt.params));
    CHECK(pt.params.m_atoms >= 1);
  }
}

TEST_CASE("comparison records") {
  const auto r = compare("x", "pt", 1.0, 1.0 + 1e-9, 1e-8);
  CHECK(r.pass);
  CHECK_FALSE(compare("x", "pt", 1.0, 1.1, 1e-8).pass);
}
