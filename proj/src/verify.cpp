#include "atomtf/verify.hpp"

#include "atomtf/analysis.hpp"
#include "atomtf/constants.hpp"
#include "atomtf/coulomb.hpp"
#include "atomtf/drop.hpp"
#include "atomtf/errors.hpp"
#include "atomtf/grid.hpp"
#include "atomtf/table.hpp"
#include "atomtf/tf.hpp"
#include "atomtf/tfdw.hpp"

#include <cmath>
#include <ostream>
#include <random>

namespace atomtf {

namespace {

constexpr double PI = 3.14159265358979323846;

/// Smooth positive bumps in log r, supported well inside the grid.
RadialFunction random_density(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double t0 = std::log(g->r_min), t1 = std::log(g->r_max);
  const int nb = 1 + static_cast<int>(U(rng) * 3);
  std::vector<double> c(nb), mu(nb), sig(nb);
  for (int b = 0; b < nb; ++b) {
    c[b] = 0.1 + U(rng);
    mu[b] = t0 + (0.25 + 0.5 * U(rng)) * (t1 - t0);
    sig[b] = 0.02 * (t1 - t0) * (1.0 + 2.0 * U(rng));
  }
  return RadialFunction(g, [&](double r) {
    const double t = std::log(r);
    double s = 0.0;
    for (int b = 0; b < nb; ++b) {
      const double u = (t - mu[b]) / sig[b];
      s += c[b] * std::exp(-u * u);
    }
    return s;
  });
}

struct Check {
  std::ostream& os;
  int failures = 0;
  void operator()(const char* name, bool ok, double measure = 0) {
    os << (ok ? "pass" : "FAIL") << "  " << name;
    if (measure != 0) os << "  (" << format_number(measure) << ")";
    os << "\n";
    if (!ok) ++failures;
  }
};

} // namespace

int run_verify(std::uint64_t seed, std::ostream& os) {
  std::mt19937_64 rng(seed);
  Check check{os};

  // --- radial_core ---
  {
    const GridPtr g = build_grid(1e-6, 50.0, 2000);
    RadialFunction one(g, std::vector<double>(g->size(), 1.0));
    const double vol = 4.0 * PI / 3.0 * (std::pow(50.0, 3) - 1e-18);
    check("quadrature: constant over full grid", std::abs(integrate(one) - vol) <= 1e-10 * vol,
          std::abs(integrate(one) - vol) / vol);
    bool poly_ok = true;
    double worst = 0;
    for (int k = 0; k <= 2; ++k) {
      const GridPtr sub = build_grid(0.5, 7.0, 2000);
      RadialFunction f(sub, [&](double r) { return std::pow(r, k); });
      const double exact = 4.0 * PI / (3.0 + k)
                           * (std::pow(7.0, 3 + k) - std::pow(0.5, 3 + k));
      const double rel = std::abs(integrate(f) - exact) / exact;
      worst = std::max(worst, rel);
      poly_ok = poly_ok && rel <= 1e-8;
    }
    check("quadrature: r^k exactness on a sub-interval", poly_ok, worst);
    RadialFunction expdens(g, [](double r) { return std::exp(-r) / (8.0 * PI); });
    check("quadrature: exponential unit mass", std::abs(integrate(expdens) - 1.0) <= 1e-6,
          std::abs(integrate(expdens) - 1.0));
    RadialFunction psi(g, [](double r) { return std::exp(-r / 2.0); });
    check("gradient energy: exp(-r/2) -> 2 pi",
          std::abs(gradient_energy(psi) - 2.0 * PI) <= 1e-4 * 2.0 * PI,
          std::abs(gradient_energy(psi) - 2.0 * PI) / (2.0 * PI));
  }

  // --- coulomb ---
  {
    const GridPtr g = build_grid(1e-7, 1.0, 12000);
    RadialFunction ball(g, std::vector<double>(g->size(), 3.0 / (4.0 * PI)));
    const RadialFunction V = newton_potential(ball);
    check("newton: uniform ball boundary value", std::abs(V.v.back() - 1.0) <= 1e-8,
          std::abs(V.v.back() - 1.0));
    const double D = coulomb_norm(ball);
    check("coulomb norm: ball self-energy 3/5", std::abs(D - 0.6) <= 1e-6 * 0.6,
          std::abs(D - 0.6) / 0.6);

    const GridPtr gw = build_grid(1e-5, 80.0, 2500);
    bool newton_ok = true, pos_ok = true, tri_ok = true, dec_ok = true;
    for (int trial = 0; trial < 10; ++trial) {
      RadialFunction a = random_density(gw, rng);
      RadialFunction b = random_density(gw, rng);
      const RadialFunction Va = newton_potential(a);
      const double Qa = integrate(a);
      newton_ok = newton_ok
                  && std::abs(gw->r.back() * Va.v.back() - Qa) <= 1e-8 * std::abs(Qa);
      RadialFunction d(gw, std::vector<double>(gw->size()));
      for (std::size_t i = 0; i < d.size(); ++i) d.v[i] = a.v[i] - b.v[i];
      const double Dd = coulomb_norm(d);
      pos_ok = pos_ok && Dd >= -1e-12;
      tri_ok = tri_ok && Dd <= 2.0 * coulomb_norm(a) + 2.0 * coulomb_norm(b) + 1e-12;
      // interior + exterior potentials reassemble the full one
      const double rc = gw->r[gw->size() / 2];
      const RadialFunction Vin = partial_newton_potential(a, rc);
      RadialFunction outer(gw, a.v);
      for (std::size_t i = 0; i <= gw->last_index_below(rc); ++i) outer.v[i] = 0.0;
      const RadialFunction Vout = newton_potential(outer);
      for (std::size_t i = 0; i < gw->size(); ++i) {
        const double scale = std::max(std::abs(Va.v[i]), 1e-300);
        if (std::abs(Vin.v[i] + Vout.v[i] - Va.v[i]) > 1e-10 * scale) dec_ok = false;
      }
    }
    check("newton: r V(r) -> total charge beyond support", newton_ok);
    check("coulomb norm: positivity on signed differences", pos_ok);
    check("coulomb norm: D(f+g) <= 2D(f) + 2D(g)", tri_ok);
    check("newton: interior/exterior decomposition", dec_ok);
  }

  // --- tf_solver ---
  {
    const ModelConstants c = ModelConstants::defaults(1.0, 1.0);
    const GridPtr g = default_grid(c, 2500);
    const TFAtomicSolution sol = tf_atomic_solve(c, g);
    check("tf: atomic mass = Z", std::abs(sol.mass - 1.0) <= 1e-6,
          std::abs(sol.mass - 1.0));
    check("tf: mu = 0", sol.mu == 0.0);
    bool pos = true, rho_bound = true;
    const double rho_cap = std::pow(3.0 * c.A_tf / (5.0 * c.c_tf), 1.5);
    for (std::size_t i = 0; i < g->size(); ++i) {
      pos = pos && sol.phi.v[i] > 0;
      const double r6 = std::pow(g->r[i], 6);
      rho_bound = rho_bound && sol.rho.v[i] <= rho_cap / r6 * (1.0 + 1e-6);
    }
    check("tf: phi > 0 at every node", pos);
    check("tf: rho <= (3A/5c)^{3/2} r^{-6}", rho_bound);
    RadialFunction V(g, [&](double r) { return c.Z / r; }, 1.0);
    check("tf: equation residual", tf_equation_residual(sol.rho, V, 0.0, c) <= 1e-6,
          tf_equation_residual(sol.rho, V, 0.0, c));
    const auto env = sommerfeld_check(sol.phi, c, std::pow(c.Z, -1.0 / 3.0));
    check("tf: sommerfeld envelope", env.envelope_holds, env.worst_violation);
    bool ratio_ok = true;
    for (double x : env.ratio_profile.v) ratio_ok = ratio_ok && x <= 1.0 + 1e-6;
    check("tf: phi <= A r^{-4}", ratio_ok);
  }

  // --- tfdw_solver ---
  {
    const ModelConstants c = ModelConstants::defaults(2.0, 2.0);
    const GridPtr g = default_grid(c, 1500);
    FlowConfig fc;
    fc.max_iter = 3000;
    fc.tol_residual = 1e-7;
    const TFDWSolution sol = tfdw_minimize(c, g, fc);
    check("tfdw: converged", sol.converged, sol.residual);
    check("tfdw: mass conservation", sol.max_mass_drift <= 1e-10, sol.max_mass_drift);
    bool mono = true;
    for (std::size_t i = 0; i + 1 < sol.energy_history.size(); ++i)
      if (sol.energy_history[i + 1] > sol.energy_history[i]
                                          + 64 * 1e-16 * (std::abs(sol.energy_history[i]) + 1))
        mono = false;
    check("tfdw: energy history nonincreasing", mono);
    // directional finite-difference probe on a non-minimal state
    RadialFunction psi0(g, [](double r) { return std::exp(-0.7 * r); });
    const RadialFunction grad = tfdw_gradient(psi0, c);
    bool fd_ok = true;
    double fd_worst = 0;
    std::uniform_real_distribution<double> UB(std::log(0.3), std::log(3.0));
    for (int trial = 0; trial < 5; ++trial) {
      const double mu_b = UB(rng);
      RadialFunction eta(g, [&](double r) {
        const double u = (std::log(r) - mu_b) / 0.5;
        return std::exp(-u * u);
      });
      // make the direction mass-preserving: <2 psi, eta> = 0
      double ip = 0, nn = 0;
      for (std::size_t i = 0; i < g->size(); ++i) {
        ip += g->w[i] * psi0.v[i] * eta.v[i];
        nn += g->w[i] * psi0.v[i] * psi0.v[i];
      }
      for (std::size_t i = 0; i < g->size(); ++i) eta.v[i] -= ip / nn * psi0.v[i];
      double emax = 0;
      for (double x : eta.v) emax = std::max(emax, std::abs(x));
      for (std::size_t i = 0; i < g->size(); ++i) eta.v[i] /= emax;
      double gd = 0;
      for (std::size_t i = 0; i < g->size(); ++i) gd += g->w[i] * grad.v[i] * eta.v[i];
      const double h = 1e-5;
      RadialFunction plus = psi0, minus = psi0;
      for (std::size_t i = 0; i < g->size(); ++i) {
        plus.v[i] += h * eta.v[i];
        minus.v[i] -= h * eta.v[i];
      }
      const double fd = (tfdw_energy(plus, c).total() - tfdw_energy(minus, c).total())
                        / (2.0 * h);
      const double rel = std::abs(gd - fd) / std::max(std::abs(gd), 1e-300);
      fd_worst = std::max(fd_worst, rel);
      fd_ok = fd_ok && rel <= 1e-5;
    }
    check("tfdw: gradient matches finite differences", fd_ok, fd_worst);
  }

  // --- analysis ---
  {
    const GridPtr g = build_grid(1e-5, 40.0, 2000);
    bool id_ok = true, maj_ok = true;
    double id_worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      RadialFunction a = random_density(g, rng);
      RadialFunction b = random_density(g, rng);
      const double r = g->r[g->size() / 3 + (g->size() / 3) * (trial % 2)];
      const auto [lhs, rhs] = interior_mass_identity(a, b, 5.0, r);
      const double tol = 1e-8 * std::max(std::abs(lhs), std::abs(rhs)) + 1e-13;
      id_worst = std::max(id_worst, std::abs(lhs - rhs));
      id_ok = id_ok && std::abs(lhs - rhs) <= tol;
      if (trial < 10)
        maj_ok = maj_ok && harmonic_majorant_check(a, 5.0, g->r[g->size() / 2]).ok;
    }
    check("analysis: newton interior-mass identity", id_ok, id_worst);
    check("analysis: harmonic majorant at s = r", maj_ok);
  }

  // --- liquid_drop ---
  {
    const DropEnergy e = drop_energy(DropConfig::ball(4.0 * PI / 3.0, 0.0));
    const double surf = 4.0 * PI;
    const double rep = 0.6 * std::pow(4.0 * PI / 3.0, 2);
    check("drop: unit ball surface", std::abs(e.surface - surf) <= 1e-12 * surf);
    check("drop: unit ball self-energy", std::abs(e.repulsion - rep) <= 1e-6 * rep,
          std::abs(e.repulsion - rep) / rep);
    // additivity of the split side
    const double N = 5.0, m = 2.0, Z = 3.0;
    const double margin = binding_margin(N, Z, m);
    const double by_hand = drop_energy(DropConfig::ball(N - m, Z)).total
                           + drop_energy(DropConfig::ball(m, 0.0)).total
                           - drop_energy(DropConfig::ball(N, Z)).total;
    check("drop: binding margin additivity", std::abs(margin - by_hand) <= 1e-12);
    bool iso_ok = true;
    for (int trial = 0; trial < 5; ++trial) {
      std::uniform_real_distribution<double> U(0.2, 2.0);
      DropConfig cfg;
      cfg.Z = 1.0;
      const double a1 = U(rng), b1 = a1 + U(rng), a2 = b1 + U(rng), b2 = a2 + U(rng);
      cfg.shells = {{a1, b1}, {a2, b2}};
      const DropEnergy ee = drop_energy(cfg);
      const double vol = cfg.volume();
      iso_ok = iso_ok
               && ee.surface >= std::cbrt(36.0 * PI) * std::pow(vol, 2.0 / 3.0) - 1e-8;
    }
    check("drop: isoperimetric floor", iso_ok);
  }

  os << (check.failures == 0 ? "verify: all checks passed\n"
                             : "verify: checks FAILED\n");
  return check.failures;
}

} // namespace atomtf
