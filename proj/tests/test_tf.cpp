#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atomtf/coulomb.hpp"
#include "atomtf/errors.hpp"
#include "atomtf/tf.hpp"

#include <cmath>

using namespace atomtf;

TEST_CASE("model constants") {
  const ModelConstants c = ModelConstants::defaults(3.0, 3.0);
  CHECK(c.c_tf == doctest::Approx(0.3 * std::pow(3.0 * M_PI * M_PI, 2.0 / 3.0)));
  CHECK(c.A_tf == c.recompute_A_tf());
  CHECK(c.B_tf == c.recompute_B_tf());
  CHECK(ModelConstants::zeta() > 0.77);
  CHECK(ModelConstants::zeta() < 0.7721);
  CHECK_THROWS_AS(ModelConstants::with_coefficients(-1.0, 0.5, 0.5, 1.0, 1.0),
                  parameter_error);
  CHECK_THROWS_AS(ModelConstants::with_coefficients(1.0, 0.5, 0.5, 1.0, 0.0),
                  parameter_error);
}

TEST_CASE("atomic TF solution at Z = 1") {
  const ModelConstants c = ModelConstants::defaults(1.0, 1.0);
  const GridPtr g = default_grid(c, 3000);
  const TFAtomicSolution sol = tf_atomic_solve(c, g);

  CHECK(sol.mu == 0.0);
  CHECK(std::abs(sol.mass - 1.0) < 1e-6);

  RadialFunction V(g, [&](double r) { return c.Z / r; }, 1.0);
  CHECK(tf_equation_residual(sol.rho, V, sol.mu, c) < 1e-6);

  const double cap = std::pow(3.0 * c.A_tf / (5.0 * c.c_tf), 1.5);
  for (std::size_t i = 0; i < g->size(); ++i) {
    CHECK(sol.phi.v[i] > 0);
    CHECK(sol.phi.v[i] <= c.A_tf / std::pow(g->r[i], 4) * (1.0 + 1e-6));
    CHECK(sol.rho.v[i] <= cap / std::pow(g->r[i], 6) * (1.0 + 1e-6));
  }
}

TEST_CASE("atomic TF energy obeys the Z^{7/3} scaling") {
  auto energy = [](double Z) {
    const ModelConstants c = ModelConstants::defaults(Z, Z);
    // independent discretizations: different n per Z
    const GridPtr g = default_grid(c, Z > 5 ? 4400 : 4000);
    return tf_atomic_solve(c, g).energy;
  };
  const double e1 = energy(1.0);
  const double e10 = energy(10.0);
  CHECK(std::abs(e10 / (std::pow(10.0, 7.0 / 3.0) * e1) - 1.0) < 1e-4);
}

TEST_CASE("atomic TF density collapses under the Z^{1/3} rescaling") {
  const ModelConstants c1 = ModelConstants::defaults(1.0, 1.0);
  const GridPtr g1 = build_grid(1e-6, 240.0, 4000);
  const TFAtomicSolution s1 = tf_atomic_solve(c1, g1);
  for (double Z : {8.0, 27.0}) {
    const double zc = std::cbrt(Z);
    const ModelConstants cz = ModelConstants::defaults(Z, Z);
    const GridPtr gz = build_grid(1e-6 / zc, 240.0 / zc, 4400);
    const TFAtomicSolution sz = tf_atomic_solve(cz, gz);
    // compare on the overlap, away from the extreme ends of either grid
    for (double r : {1e-4, 1e-2, 0.1, 0.5, 2.0, 10.0}) {
      const double lhs = sz.rho.at(r / zc);
      const double rhs = Z * Z * s1.rho.at(r);
      CHECK(std::abs(lhs - rhs) <= 1e-4 * std::abs(rhs));
    }
  }
}

TEST_CASE("general-potential TF solve") {
  const ModelConstants c = ModelConstants::defaults(4.0, 4.0);
  const GridPtr g = default_grid(c, 2500);
  RadialFunction V(g, [&](double r) { return c.Z / r; }, 1.0);

  SUBCASE("constrained branch: m = Z/2 gives mu > 0 and full budget") {
    const TFGeneralSolution sol = tf_general_solve(V, c.Z / 2.0, c);
    CHECK(sol.mu > 0);
    CHECK(std::abs(sol.attained_mass - c.Z / 2.0) <= 1e-6 * c.Z);
    CHECK(sol.attained_mass <= sol.mass_budget * (1.0 + 1e-8));
    // mass is nonincreasing along the recorded mu history
    for (std::size_t i = 0; i + 1 < sol.bisection_history.size(); ++i) {
      for (std::size_t j = i + 1; j < sol.bisection_history.size(); ++j) {
        if (sol.bisection_history[j].first >= sol.bisection_history[i].first)
          CHECK(sol.bisection_history[j].second
                <= sol.bisection_history[i].second + 1e-8 * c.Z);
      }
    }
  }
  SUBCASE("unconstrained branch: m = 2Z gives mu = 0 and mass Z") {
    const TFGeneralSolution sol = tf_general_solve(V, 2.0 * c.Z, c);
    CHECK(sol.mu == 0.0);
    CHECK(std::abs(sol.attained_mass - c.Z) <= 1e-6 * c.Z);
  }
  SUBCASE("zero potential binds nothing") {
    RadialFunction zero(g, std::vector<double>(g->size(), 0.0));
    const TFGeneralSolution sol = tf_general_solve(zero, 3.0, c);
    CHECK(sol.mu == 0.0);
    CHECK(sol.attained_mass == 0.0);
  }
  SUBCASE("non-vanishing potential is rejected") {
    RadialFunction bad(g, std::vector<double>(g->size(), 1.0));
    CHECK_THROWS_AS(tf_general_solve(bad, 1.0, c), parameter_error);
  }
}

TEST_CASE("local minimality: mass-preserving bumps never lower the energy") {
  const ModelConstants c = ModelConstants::defaults(2.0, 2.0);
  const GridPtr g = default_grid(c, 2000);
  const TFAtomicSolution sol = tf_atomic_solve(c, g);
  RadialFunction V(g, [&](double r) { return c.Z / r; }, 1.0);

  auto tf_energy = [&](const RadialFunction& rho) {
    double s = 0.0;
    const RadialFunction Vr = newton_potential(rho);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double r53 = rho.v[i] * std::cbrt(rho.v[i] * rho.v[i]);
      s += g->w[i] * (c.c_tf * r53 - V.v[i] * rho.v[i] + 0.5 * rho.v[i] * Vr.v[i]);
    }
    return s;
  };
  RadialFunction base(g, sol.rho.v);  // compact version of the minimizer
  const double e0 = tf_energy(base);
  for (int k = 0; k < 4; ++k) {
    // move 1% of the mass between two smooth bumps
    RadialFunction pert = base;
    const std::size_t i1 = g->size() / 3 + 100 * k, i2 = 2 * g->size() / 3 - 50 * k;
    std::vector<double> bump(g->size(), 0.0);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double u1 = (std::log(g->r[i]) - std::log(g->r[i1])) / 0.3;
      const double u2 = (std::log(g->r[i]) - std::log(g->r[i2])) / 0.3;
      bump[i] = std::exp(-u1 * u1) - std::exp(-u2 * u2);
    }
    RadialFunction bf(g, bump);
    const double bmass = integrate(bf);
    // remove the net mass so the perturbation is mass-preserving
    const double corr = bmass / integrate(base);
    double scale = 0.01 * sol.mass / integrate_abs_power(bf, 1.0);
    bool nonneg = true;
    for (std::size_t i = 0; i < g->size(); ++i) {
      pert.v[i] = base.v[i] * (1.0 - corr * scale) + scale * bump[i] * base.v[i];
      if (pert.v[i] < 0) nonneg = false;
    }
    if (!nonneg) continue;
    double pmass = integrate(pert);
    for (std::size_t i = 0; i < g->size(); ++i) pert.v[i] *= sol.mass / pmass;
    CHECK(tf_energy(pert) >= e0 - 1e-8 * std::abs(e0));
  }
}

TEST_CASE("exterior TF solve") {
  const ModelConstants c = ModelConstants::defaults(5.0, 5.0);
  const GridPtr g = default_grid(c, 2500);
  const TFAtomicSolution atom = tf_atomic_solve(c, g);
  const double r_cut = g->r[g->nearest_index(0.8 * std::pow(c.Z, -1.0 / 3.0))];

  // screened potential of the atomic density at cut radius r_cut
  const RadialFunction vin = partial_newton_potential(atom.rho, r_cut);
  RadialFunction phi_screened(g, std::vector<double>(g->size()));
  for (std::size_t i = 0; i < g->size(); ++i)
    phi_screened.v[i] = c.Z / g->r[i] - vin.v[i];

  // the exterior part of the atomic density (strictly beyond the cut node)
  RadialFunction outer(g, atom.rho.v, 6.0);
  const std::size_t last = g->last_index_below(r_cut);
  for (std::size_t i = 0; i <= last; ++i) outer.v[i] = 0.0;
  const double budget = integrate(outer);

  SUBCASE("TF screened data reproduces the restricted minimizer") {
    const ExteriorTFSolution sol = tf_exterior_solve(phi_screened, r_cut, budget, c);
    for (std::size_t i = 0; i <= last; ++i) CHECK(sol.rho_r.v[i] == 0.0);
    double l1 = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i)
      l1 += g->w[i] * std::abs(sol.rho_r.v[i] - outer.v[i]);
    CHECK(l1 <= 1e-4 * budget);
  }
  SUBCASE("zero budget gives the zero density") {
    const ExteriorTFSolution sol = tf_exterior_solve(phi_screened, r_cut, 0.0, c);
    for (double x : sol.rho_r.v) CHECK(x == 0.0);
  }
}

TEST_CASE("sommerfeld check flags envelope violations") {
  const ModelConstants c = ModelConstants::defaults(1.0, 1.0);
  const GridPtr g = build_grid(1e-3, 10.0, 100);
  // a pure 1.5 A r^{-4} profile sits above its own boundary envelope away
  // from the cut radius
  RadialFunction bad(g, [&](double r) { return 1.5 * c.A_tf / (r * r * r * r); });
  CHECK_THROWS_AS(sommerfeld_check(bad, c, 1e-2), invariant_violation);
  CHECK_THROWS_AS(sommerfeld_check(bad, c, 1e9), parameter_error);
}

TEST_CASE("sommerfeld envelope on the atomic solution") {
  const ModelConstants c = ModelConstants::defaults(100.0, 100.0);
  const GridPtr g = default_grid(c, 3000);
  const TFAtomicSolution sol = tf_atomic_solve(c, g);

  const double r = std::pow(c.Z, -1.0 / 3.0);
  const SommerfeldEnvelope env = sommerfeld_check(sol.phi, c, r);
  CHECK(env.envelope_holds);
  CHECK(env.a_r >= -1.0);
  for (double x : env.ratio_profile.v) CHECK(x <= 1.0 + 1e-6);

  // exterior solutions seeded by their own TF data: boundary constants
  // shrink monotonically with the cut radius over a decade
  double prev_a = 1e300, prev_A = 1e300;
  for (double rc : {0.3, 1.0, 3.0}) {
    const RadialFunction vin = partial_newton_potential(sol.rho, rc);
    RadialFunction phis(g, std::vector<double>(g->size()));
    for (std::size_t i = 0; i < g->size(); ++i)
      phis.v[i] = c.Z / g->r[i] - vin.v[i];
    RadialFunction outer(g, sol.rho.v, 6.0);
    for (std::size_t i = 0; i <= g->last_index_below(rc); ++i) outer.v[i] = 0.0;
    const ExteriorTFSolution ext =
        tf_exterior_solve(phis, rc, integrate(outer), c);
    const SommerfeldEnvelope e2 = sommerfeld_check(ext.phi_r, c, ext.rho_r.grid->r[g->last_index_below(rc) + 1], 1e-4);
    CHECK(std::abs(e2.a_r) < prev_a);
    CHECK(std::abs(e2.A_r) < prev_A);
    prev_a = std::abs(e2.a_r);
    prev_A = std::abs(e2.A_r);
  }
}
