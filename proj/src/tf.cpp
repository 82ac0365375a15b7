#include "atomtf/tf.hpp"
#include "atomtf/coulomb.hpp"
#include "atomtf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace atomtf {

namespace {

constexpr double PI = 3.14159265358979323846;

double cbrt_pow32(double x) {  // x^{3/2} for x >= 0
  return x * std::sqrt(x);
}

/// rho = ((3/(5 c_tf)) [phi - mu]_+)^{3/2}, optionally restricted to a support
/// mask starting at node `first_node`.
void density_from_phi(const std::vector<double>& phi, double mu, double c_tf,
                      std::size_t first_node, std::vector<double>& rho) {
  const double a = 3.0 / (5.0 * c_tf);
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (i < first_node) {
      rho[i] = 0.0;
      continue;
    }
    const double x = phi[i] - mu;
    rho[i] = x > 0 ? cbrt_pow32(a * x) : 0.0;
  }
}

struct FixedPointResult {
  std::vector<double> phi;
  std::vector<double> rho;
  double mass = 0;
  std::size_t iterations = 0;
  double residual = 0;
  bool converged = false;
};

/// Damped fixed point phi <- V - (rho(phi) * |x|^{-1}) at fixed mu.
/// `tail` declares the density decay model used for the Newton closure
/// (6 for neutral TF profiles, 0 for compactly supported ones).
FixedPointResult fixed_point_phi(const RadialFunction& V, double mu, double tail,
                                 std::size_t first_node, const ModelConstants& c,
                                 const TfOptions& opt,
                                 const std::vector<double>* phi0 = nullptr) {
  const auto& g = *V.grid;
  const std::size_t n = g.size();
  FixedPointResult out;
  out.phi = phi0 ? *phi0 : V.v;
  out.rho.assign(n, 0.0);

  double alpha = opt.mixing;
  double last_res = std::numeric_limits<double>::infinity();
  double last_mass = -1.0;
  std::size_t calm = 0;  // consecutive residual decreases since last halving
  for (std::size_t it = 0; it < opt.max_iter; ++it) {
    density_from_phi(out.phi, mu, c.c_tf, first_node, out.rho);
    RadialFunction rho_f(V.grid, out.rho, out.rho.back() > 0 ? tail : 0.0);
    const RadialFunction Vrho = newton_potential(rho_f);
    double res = 0.0;
    const double eps_over_tol = 8.0 * 2.3e-16 / opt.tol_residual;
    for (std::size_t i = 0; i < n; ++i) {
      const double next = V.v[i] - Vrho.v[i];
      // phi is a difference of two near-equal potentials far out; where the
      // cancellation exceeds the attainable precision, measure the change
      // against the rounding floor instead of |phi| itself
      const double floor = eps_over_tol * (std::abs(V.v[i]) + std::abs(Vrho.v[i]));
      const double scale = std::max({std::abs(out.phi[i]), std::abs(mu), floor, 1e-300});
      res = std::max(res, std::abs(next - out.phi[i]) / scale);
    }
    const double mass = integrate(rho_f);
    const double drift = last_mass < 0 ? 1.0
                         : std::abs(mass - last_mass) / std::max(mass, 1e-300);
    last_mass = mass;
    out.residual = res;
    out.iterations = it + 1;
    if (res < opt.tol_residual && drift < opt.tol_mass_drift) {
      out.mass = mass;
      out.converged = true;
      return out;
    }
    if (res > last_res * (1.0 + 1e-12)) {
      if (alpha > 0.01) alpha *= 0.5;
      calm = 0;
    } else if (++calm >= 30 && alpha < opt.mixing) {
      alpha = std::min(alpha * 1.5, opt.mixing);
      calm = 0;
    }
    last_res = res;
    for (std::size_t i = 0; i < n; ++i)
      out.phi[i] = (1.0 - alpha) * out.phi[i] + alpha * (V.v[i] - Vrho.v[i]);
  }
  density_from_phi(out.phi, mu, c.c_tf, first_node, out.rho);
  out.mass = integrate(RadialFunction(V.grid, out.rho, out.rho.back() > 0 ? tail : 0.0));
  return out;
}

double tf_energy_value(const RadialFunction& rho, const RadialFunction& V,
                       const ModelConstants& c) {
  // Hartree part through coulomb_norm so that the value coincides exactly
  // with the TFDW functional at c_w = c_d = 0
  const auto& g = *rho.grid;
  double s = coulomb_norm(rho);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r53 = rho.v[i] * std::cbrt(rho.v[i] * rho.v[i]);
    s += g.w[i] * (c.c_tf * r53 - V.v[i] * rho.v[i]);
  }
  if (rho.has_tail() && rho.tail_value() != 0.0) {
    const double rm = g.r_max, fm = rho.tail_value(), p = rho.tail_exponent;
    const double f53 = fm * std::cbrt(fm * fm);
    s += 4.0 * PI * rm * rm * rm
         * (c.c_tf * f53 / (p * 5.0 / 3.0 - 3.0)
            - V.v.back() * fm / (p + 1.0 - 3.0));
  }
  return s;
}

} // namespace

GridPtr default_grid(const ModelConstants& c, std::size_t n) {
  const double zeff = std::max(1.0, c.Z);
  const double r_min = 1e-6 * std::pow(zeff, -1.0 / 3.0);
  // 60 per unit of anion excess for the flow box; at least 240 Z^{-1/3} so
  // that the slowly decaying Sommerfeld correction leaves the mass closure
  // below 1e-6 relative.
  const double r_max = std::max(60.0 * std::max(1.0, c.N - c.Z + 1.0),
                                240.0 * std::pow(zeff, -1.0 / 3.0));
  return build_grid(r_min, r_max, n);
}

TFAtomicSolution tf_atomic_solve(const ModelConstants& c, const GridPtr& grid,
                                 const TfOptions& opt) {
  if (!(c.Z > 0)) throw parameter_error("tf_atomic_solve: require Z > 0");
  const auto& g = *grid;
  RadialFunction V(grid, [&](double r) { return c.Z / r; }, 1.0);
  std::vector<double> phi0(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.r[i];
    phi0[i] = std::min(c.Z / r, c.A_tf / (r * r * r * r));
  }
  auto fp = fixed_point_phi(V, 0.0, 6.0, 0, c, opt, &phi0);
  if (!fp.converged)
    throw convergence_error("tf_atomic_solve: fixed point did not converge", fp.residual);

  TFAtomicSolution sol;
  sol.constants = c;
  sol.rho = RadialFunction(grid, std::move(fp.rho), 6.0);
  sol.phi = RadialFunction(grid, std::move(fp.phi));
  sol.mu = 0.0;
  sol.mass = fp.mass;
  sol.iterations = fp.iterations;
  sol.residual = fp.residual;
  sol.energy = tf_energy_value(sol.rho, V, c);
  return sol;
}

TFGeneralSolution tf_general_solve(const RadialFunction& V, double m,
                                   const ModelConstants& c, const TfOptions& opt) {
  if (!(m > 0)) throw parameter_error("tf_general_solve: require m > 0");
  if (!V.has_tail() || V.tail_exponent < 1.0) {
    double vmax = 0.0;
    for (double x : V.v) vmax = std::max(vmax, std::abs(x));
    if (vmax > 0 && std::abs(V.tail_value()) > 1e-10 * vmax)
      throw parameter_error("tf_general_solve: V must vanish at infinity");
  }

  TFGeneralSolution sol;
  sol.mass_budget = m;

  // Unconstrained (mu = 0) attempt first; its mass decides the branch.
  auto fp0 = fixed_point_phi(V, 0.0, 6.0, 0, c, opt);
  if (!fp0.converged)
    throw convergence_error("tf_general_solve: mu=0 fixed point did not converge",
                            fp0.residual);
  sol.bisection_history.emplace_back(0.0, fp0.mass);
  if (fp0.mass <= m * (1.0 + opt.mass_tol)) {
    sol.mu = 0.0;
    sol.rho = RadialFunction(V.grid, std::move(fp0.rho), 6.0);
    sol.phi = RadialFunction(V.grid, std::move(fp0.phi));
    sol.attained_mass = fp0.mass;
    sol.iterations = fp0.iterations;
    sol.residual = fp0.residual;
    return sol;
  }

  // Attained mass is decreasing in mu; bracket [0, max V].
  double mu_lo = 0.0;
  double mu_hi = *std::max_element(V.v.begin(), V.v.end());
  FixedPointResult best = std::move(fp0);
  double best_mu = 0.0;
  std::size_t total_iters = best.iterations;
  for (std::size_t k = 0; k < opt.max_bisect; ++k) {
    const double mu = 0.5 * (mu_lo + mu_hi);
    auto fp = fixed_point_phi(V, mu, 0.0, 0, c, opt, &best.phi);
    total_iters += fp.iterations;
    if (!fp.converged)
      throw convergence_error("tf_general_solve: inner fixed point did not converge",
                              fp.residual);
    sol.bisection_history.emplace_back(mu, fp.mass);
    if (fp.mass > m)
      mu_lo = mu;
    else
      mu_hi = mu;
    best = std::move(fp);
    best_mu = mu;
    if (std::abs(best.mass - m) <= opt.mass_tol * m) break;
  }
  if (std::abs(best.mass - m) > 10 * opt.mass_tol * m)
    throw convergence_error("tf_general_solve: mass bisection did not converge",
                            std::abs(best.mass - m) / m);
  sol.mu = best_mu;
  sol.rho = RadialFunction(V.grid, std::move(best.rho), 0.0);
  sol.phi = RadialFunction(V.grid, std::move(best.phi));
  sol.attained_mass = best.mass;
  sol.iterations = total_iters;
  sol.residual = best.residual;
  return sol;
}

ExteriorTFSolution tf_exterior_solve(const RadialFunction& phi_screened, double r_cut,
                                     double mass_budget, const ModelConstants& c,
                                     const TfOptions& opt) {
  if (mass_budget < 0) throw parameter_error("tf_exterior_solve: mass_budget < 0");
  const auto& g = *phi_screened.grid;
  const std::size_t last_in = g.last_index_below(r_cut);
  const std::size_t first = (last_in == static_cast<std::size_t>(-1)) ? 0 : last_in + 1;

  RadialFunction Vr(phi_screened.grid, phi_screened.v, 1.0);
  for (std::size_t i = 0; i < first; ++i) Vr.v[i] = 0.0;

  ExteriorTFSolution sol;
  sol.r_cut = r_cut;
  sol.v_r = Vr;
  sol.mass_budget = mass_budget;
  if (mass_budget == 0.0 || first >= g.size()) {
    sol.rho_r = RadialFunction(phi_screened.grid, std::vector<double>(g.size(), 0.0));
    sol.phi_r = Vr;
    sol.mu_r = 0.0;
    sol.attained_mass = 0.0;
    return sol;
  }

  auto fp0 = fixed_point_phi(Vr, 0.0, 6.0, first, c, opt);
  if (!fp0.converged)
    throw convergence_error("tf_exterior_solve: mu=0 fixed point did not converge",
                            fp0.residual);
  if (fp0.mass <= mass_budget * (1.0 + opt.mass_tol)) {
    sol.rho_r = RadialFunction(phi_screened.grid, std::move(fp0.rho), 6.0);
    sol.phi_r = RadialFunction(phi_screened.grid, std::move(fp0.phi));
    sol.mu_r = 0.0;
    sol.attained_mass = fp0.mass;
    sol.iterations = fp0.iterations;
    sol.residual = fp0.residual;
    return sol;
  }

  double mu_lo = 0.0, mu_hi = 0.0;
  for (std::size_t i = first; i < g.size(); ++i) mu_hi = std::max(mu_hi, Vr.v[i]);
  FixedPointResult best = std::move(fp0);
  double best_mu = 0.0;
  std::size_t total_iters = best.iterations;
  for (std::size_t k = 0; k < opt.max_bisect; ++k) {
    const double mu = 0.5 * (mu_lo + mu_hi);
    auto fp = fixed_point_phi(Vr, mu, 0.0, first, c, opt, &best.phi);
    total_iters += fp.iterations;
    if (!fp.converged)
      throw convergence_error("tf_exterior_solve: inner fixed point did not converge",
                              fp.residual);
    if (fp.mass > mass_budget)
      mu_lo = mu;
    else
      mu_hi = mu;
    best = std::move(fp);
    best_mu = mu;
    if (std::abs(best.mass - mass_budget) <= opt.mass_tol * mass_budget) break;
  }
  sol.rho_r = RadialFunction(phi_screened.grid, std::move(best.rho), 0.0);
  sol.phi_r = RadialFunction(phi_screened.grid, std::move(best.phi));
  sol.mu_r = best_mu;
  sol.attained_mass = best.mass;
  sol.iterations = total_iters;
  sol.residual = best.residual;
  return sol;
}

double tf_equation_residual(const RadialFunction& rho, const RadialFunction& V,
                            double mu, const ModelConstants& c) {
  const RadialFunction Vrho = newton_potential(rho);
  double worst = 0.0, phimax = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double phi = V.v[i] - Vrho.v[i];
    phimax = std::max(phimax, std::abs(phi));
    if (rho.v[i] == 0.0 && phi - mu <= 0) continue;
    const double lhs = (5.0 * c.c_tf / 3.0) * std::cbrt(rho.v[i] * rho.v[i]);
    const double rhs = std::max(phi - mu, 0.0);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return phimax > 0 ? worst / phimax : worst;
}

static SommerfeldEnvelope sommerfeldcheck_impl(const RadialFunction& phi,
                                               const ModelConstants& c, double r,
                                               double slack) {
  const auto& g = *phi.grid;
  if (!(r >= g.r_min) || !(r <= g.r_max))
    throw parameter_error("sommerfeld_check: r outside grid");
  const std::size_t ir = g.nearest_index(r);

  SommerfeldEnvelope env;
  env.r = g.r[ir];
  env.zeta = ModelConstants::zeta();
  std::vector<double> ratio(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.r[i];
    ratio[i] = phi.v[i] * x * x * x * x / c.A_tf;
  }
  env.ratio_profile = RadialFunction(phi.grid, ratio);

  const double rb = ratio[ir];
  if (!(rb > 0))
    throw invariant_violation("sommerfeld_check: nonpositive potential at boundary");
  env.a_r = 1.0 / std::sqrt(rb) - 1.0;
  env.A_r = rb - 1.0;

  env.envelope_holds = true;
  for (std::size_t i = ir; i < g.size(); ++i) {
    const double q = std::pow(env.r / g.r[i], env.zeta);
    const double lo = std::pow(1.0 + env.a_r * q, -2.0);
    const double hi = 1.0 + env.A_r * q;
    const double scale = std::max(std::abs(hi), 1.0);
    const double excess = std::max(lo - ratio[i], ratio[i] - hi) / scale;
    if (excess > env.worst_violation) env.worst_violation = excess;
    if (excess > slack) env.envelope_holds = false;
  }
  return env;
}

SommerfeldEnvelope sommerfeld_check(const RadialFunction& phi, const ModelConstants& c,
                                    double r, double slack) {
  auto env = sommerfeldcheck_impl(phi, c, r, slack);
  if (!env.envelope_holds)
    throw invariant_violation("sommerfeld_check: envelope violated beyond slack");
  return env;
}

} // namespace atomtf
