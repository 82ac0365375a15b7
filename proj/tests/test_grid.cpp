#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atomtf/errors.hpp"
#include "atomtf/grid.hpp"

#include <cmath>

using namespace atomtf;

namespace {
constexpr double PI = 3.14159265358979323846;
}

TEST_CASE("build_grid basic contract") {
  const GridPtr g = build_grid(1e-6, 50.0, 2000);
  CHECK(g->size() == 2000);
  CHECK(g->r.front() == doctest::Approx(1e-6));
  CHECK(g->r.back() == doctest::Approx(50.0));
  for (std::size_t i = 0; i + 1 < g->size(); ++i) CHECK(g->r[i] < g->r[i + 1]);
  for (double w : g->w) CHECK(w > 0);

  CHECK_THROWS_AS(build_grid(0.0, 1.0, 100), parameter_error);
  CHECK_THROWS_AS(build_grid(2.0, 1.0, 100), parameter_error);
  CHECK_THROWS_AS(build_grid(1e-3, 1.0, 8), parameter_error);
}

TEST_CASE("coarse grids keep positive weights") {
  for (std::size_t n : {16u, 20u, 32u, 64u}) {
    const GridPtr g = build_grid(1e-6, 50.0, n);
    for (double w : g->w) CHECK(w > 0);
  }
}

TEST_CASE("quadrature of constants is exact") {
  const GridPtr g = build_grid(1.0, 2.0, 200);
  RadialFunction one(g, std::vector<double>(g->size(), 1.0));
  const double vol = 4.0 * PI / 3.0 * (8.0 - 1.0);
  CHECK(integrate(one) == doctest::Approx(vol).epsilon(1e-8));

  const GridPtr full = build_grid(1e-6, 50.0, 3000);
  RadialFunction onef(full, std::vector<double>(full->size(), 1.0));
  const double volf = 4.0 * PI / 3.0 * (std::pow(50.0, 3) - 1e-18);
  CHECK(std::abs(integrate(onef) - volf) / volf < 1e-10);
}

TEST_CASE("quadrature exactness for r^k on sub-intervals") {
  for (int k = 0; k <= 2; ++k) {
    const GridPtr g = build_grid(0.25, 9.0, 2500);
    RadialFunction f(g, [&](double r) { return std::pow(r, k); });
    const double exact =
        4.0 * PI / (3.0 + k) * (std::pow(9.0, 3 + k) - std::pow(0.25, 3 + k));
    CHECK(std::abs(integrate(f) - exact) / exact < 1e-8);
  }
}

TEST_CASE("exponential density integrates to one") {
  const GridPtr g = build_grid(1e-6, 50.0, 4000);
  RadialFunction f(g, [](double r) { return std::exp(-r) / (8.0 * PI); });
  CHECK(integrate(f) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("tail closure against truncated quadrature") {
  // f = r^{-6} on [1, inf): int 4 pi r^2 r^{-6} = 4 pi / 3
  const GridPtr g = build_grid(1.0, 10.0, 2000);
  RadialFunction f(g, [](double r) { return std::pow(r, -6.0); }, 6.0);
  const double exact = 4.0 * PI / 3.0;
  CHECK(std::abs(integrate(f) - exact) / exact < 1e-6);

  const GridPtr big = build_grid(1.0, 1e3, 4000);
  RadialFunction trunc(big, [](double r) { return std::pow(r, -6.0); });
  CHECK(std::abs(integrate(f) - integrate(trunc)) / exact < 1e-6);
}

TEST_CASE("divergent tails are rejected") {
  const GridPtr g = build_grid(1.0, 10.0, 200);
  RadialFunction f(g, [](double r) { return 1.0 / r; }, 2.5);
  CHECK_THROWS_AS(integrate(f), divergent_tail_error);
  RadialFunction zero_tail(g, [](double) { return 0.0; }, 2.5);
  CHECK(integrate(zero_tail) == 0.0);
}

TEST_CASE("zero function integrates to zero") {
  const GridPtr g = build_grid(1e-4, 10.0, 100);
  RadialFunction f(g, std::vector<double>(g->size(), 0.0));
  CHECK(integrate(f) == 0.0);
}

TEST_CASE("unit ball mass on a support-matched grid") {
  const GridPtr g = build_grid(1e-8, 1.0, 2000);
  RadialFunction f(g, std::vector<double>(g->size(), 3.0 / (4.0 * PI)));
  CHECK(std::abs(integrate(f) - 1.0) < 1e-8);
}

TEST_CASE("gradient energy of exp(-r/2) equals 2 pi") {
  const GridPtr g = build_grid(1e-6, 80.0, 4000);
  RadialFunction psi(g, [](double r) { return std::exp(-r / 2.0); });
  CHECK(std::abs(gradient_energy(psi) - 2.0 * PI) / (2.0 * PI) < 1e-4);
}

TEST_CASE("gradient energy of a constant is zero, grid too small rejected") {
  const GridPtr g = build_grid(1e-2, 1.0, 64);
  RadialFunction c(g, std::vector<double>(g->size(), 3.0), 0.0);
  // constant with zero declared tail jumps at r_max
  CHECK_THROWS_AS(gradient_energy(c), divergent_tail_error);
  RadialFunction z(g, std::vector<double>(g->size(), 0.0));
  CHECK(gradient_energy(z) == 0.0);
}

TEST_CASE("gradient energy scaling under dilation") {
  const std::size_t n = 3000;
  const GridPtr g = build_grid(1e-5, 60.0, n);
  RadialFunction psi(g, [](double r) { return std::exp(-r / 2.0); });
  const double lambda = 2.0;
  const GridPtr gs = build_grid(1e-5 / lambda, 60.0 / lambda, n);
  RadialFunction psis(gs, [&](double r) { return std::exp(-lambda * r / 2.0); });
  const double ge = gradient_energy(psi);
  CHECK(std::abs(gradient_energy(psis) - ge / lambda) / (ge / lambda) < 1e-6);
}

TEST_CASE("adding a positive constant to psi makes the tail divergent") {
  const GridPtr g = build_grid(1e-5, 60.0, 2000);
  RadialFunction psi(g, [](double r) { return std::exp(-r / 2.0) + 0.5; });
  CHECK_THROWS_AS(gradient_energy(psi), divergent_tail_error);
}

TEST_CASE("refinement converges at least second order") {
  auto bump = [](double r) {
    const double t = std::log(r);
    const double u = (t - std::log(0.5)) / 1.2;
    return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
  };
  auto I = [&](std::size_t n) {
    const GridPtr g = build_grid(1e-4, 30.0, n);
    return integrate(RadialFunction(g, bump));
  };
  const double d1 = std::abs(I(500) - I(1000));
  const double d2 = std::abs(I(1000) - I(2000));
  CHECK(d2 * 3.5 < d1);
}

TEST_CASE("interpolation and resampling") {
  const GridPtr g = build_grid(1e-4, 20.0, 3000);
  RadialFunction f(g, [](double r) { return r * r / (1.0 + r * r * r); });
  CHECK(f.at(0.37) == doctest::Approx(0.37 * 0.37 / (1.0 + std::pow(0.37, 3))).epsilon(1e-9));
  const GridPtr g2 = build_grid(1e-3, 10.0, 777);
  const RadialFunction f2 = f.resample(g2);
  CHECK(f2.at(1.234) == doctest::Approx(f.at(1.234)).epsilon(1e-8));
}

TEST_CASE("derivative matches analytic slope") {
  const GridPtr g = build_grid(1e-3, 30.0, 3000);
  RadialFunction f(g, [](double r) { return std::exp(-r); });
  const RadialFunction d = derivative(f);
  const std::size_t i = g->nearest_index(2.0);
  CHECK(d.v[i] == doctest::Approx(-std::exp(-g->r[i])).epsilon(1e-5));
}

TEST_CASE("density validation") {
  const GridPtr g = build_grid(1e-3, 1.0, 64);
  std::vector<double> v(g->size(), 1.0);
  v[5] = -1e-9;
  RadialFunction f(g, v);
  CHECK_THROWS_AS(validate_density(f), invariant_violation);
}
