#include "atomtf/coulomb.hpp"
#include "atomtf/errors.hpp"

#include <cmath>

namespace atomtf {

namespace {
constexpr double PI = 3.14159265358979323846;

void require_integrable(const RadialFunction& f, const char* who) {
  if (f.has_tail() && f.tail_value() != 0.0 && f.tail_exponent <= 3.0)
    throw divergent_tail_error(std::string(who) + ": divergent tail");
}
} // namespace

double total_charge(const RadialFunction& f) { return integrate(f); }

std::vector<double> interior_mass_profile(const RadialFunction& f) {
  const auto& g = *f.grid;
  const std::size_t n = g.size();
  std::vector<double> M(n);
  M[0] = 0.0;
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    const auto& c = g.panel_w3[p];
    const std::size_t s = g.panel_stencil[p];
    acc += c[0] * f.v[s] + c[1] * f.v[s + 1] + c[2] * f.v[s + 2] + c[3] * f.v[s + 3];
    M[p + 1] = acc;
  }
  return M;
}

RadialFunction newton_potential(const RadialFunction& f) {
  require_integrable(f, "newton_potential");
  const auto& g = *f.grid;
  const std::size_t n = g.size();
  // panel-cumulative interior mass and outer integral: both integrands are
  // smooth on their side of the evaluation node, so each piece keeps the
  // full order of the product rule
  std::vector<double> V(n);
  double M = 0.0;
  V[0] = 0.0;
  for (std::size_t p = 0; p + 1 < n; ++p) {
    const auto& c = g.panel_w3[p];
    const std::size_t s = g.panel_stencil[p];
    M += c[0] * f.v[s] + c[1] * f.v[s + 1] + c[2] * f.v[s + 2] + c[3] * f.v[s + 3];
    V[p + 1] = M / g.r[p + 1];
  }
  double J = 0.0;
  if (f.has_tail() && f.tail_value() != 0.0)
    J = 4.0 * PI * f.tail_value() * g.r_max * g.r_max / (f.tail_exponent - 2.0);
  V[n - 1] += J;
  for (std::size_t p = n - 1; p-- > 0;) {
    const auto& c = g.panel_w2[p];
    const std::size_t s = g.panel_stencil[p];
    J += c[0] * f.v[s] + c[1] * f.v[s + 1] + c[2] * f.v[s + 2] + c[3] * f.v[s + 3];
    V[p] += J;
  }
  double tail_mass = 0.0;
  if (f.has_tail() && f.tail_value() != 0.0)
    tail_mass = 4.0 * PI * f.tail_value() * g.r_max * g.r_max * g.r_max / (f.tail_exponent - 3.0);
  const double Q = M + tail_mass;
  return RadialFunction(f.grid, std::move(V), Q != 0.0 ? 1.0 : 0.0);
}

RadialFunction newton_potential_nodal(const RadialFunction& f) {
  require_integrable(f, "newton_potential");
  const auto& g = *f.grid;
  const std::size_t n = g.size();
  std::vector<double> V(n);
  double M = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    M += g.w[i] * f.v[i];
    V[i] = M / g.r[i];
  }
  double J = 0.0;
  if (f.has_tail() && f.tail_value() != 0.0)
    J = 4.0 * PI * f.tail_value() * g.r_max * g.r_max / (f.tail_exponent - 2.0);
  V[n - 1] += J;
  for (std::size_t i = n - 1; i-- > 0;) {
    J += g.w[i + 1] / g.r[i + 1] * f.v[i + 1];
    V[i] += J;
  }
  return RadialFunction(f.grid, std::move(V), integrate(f) != 0.0 ? 1.0 : 0.0);
}

RadialFunction partial_newton_potential(const RadialFunction& f, double r_cut) {
  if (!(r_cut > 0) || !std::isfinite(r_cut) || r_cut > f.grid->r_max)
    throw parameter_error("partial_newton_potential: r_cut outside grid");
  RadialFunction inner(f.grid, f.v, 0.0);
  const std::size_t last = f.grid->last_index_below(r_cut);
  const std::size_t n = f.size();
  for (std::size_t i = (last == static_cast<std::size_t>(-1) ? 0 : last + 1); i < n; ++i)
    inner.v[i] = 0.0;
  return newton_potential(inner);
}

double coulomb_norm(const RadialFunction& f) {
  // the nodal kernel w_i w_j / max(r_i, r_j) is a positive-definite matrix
  // (a min-kernel), so D(f) >= 0 holds for signed data by construction
  require_integrable(f, "coulomb_norm");
  const RadialFunction V = newton_potential_nodal(f);
  const auto& g = *f.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.w[i] * f.v[i] * V.v[i];
  if (f.has_tail() && f.tail_value() != 0.0) {
    // product f*V decays like r^{-(p+1)} with value f_m V_m at r_max
    const double p = f.tail_exponent + 1.0;
    s += 4.0 * PI * f.tail_value() * V.v.back()
         * g.r_max * g.r_max * g.r_max / (p - 3.0);
  }
  return 0.5 * s;
}

std::pair<CoulombEstimateReport, CoulombEstimateReport>
check_coulomb_inequalities(const RadialFunction& f, double x) {
  require_integrable(f, "check_coulomb_inequalities");
  if (!(x > 0) || !std::isfinite(x))
    throw parameter_error("check_coulomb_inequalities: x must be positive");
  const double l53 = integrate_abs_power(f, 5.0 / 3.0);
  if (!std::isfinite(l53))
    throw divergent_tail_error("check_coulomb_inequalities: f not in L^{5/3}");
  const double norm53 = std::pow(l53, 3.0 / 5.0);
  const double D = coulomb_norm(f);

  auto make = [](double lhs, double rhs) {
    CoulombEstimateReport rep;
    rep.lhs = lhs;
    rep.rhs_without_constant = rhs;
    if (rhs == 0.0) {
      rep.degenerate = true;
      rep.implied_constant = 0.0;
    } else {
      rep.implied_constant = lhs / rhs;
    }
    return rep;
  };

  // beyond the grid the potentials continue by their Newton tails
  const double lhs1 = std::abs(newton_potential(f).at(x));
  const double rhs1 = std::pow(norm53, 5.0 / 7.0) * std::pow(std::max(D, 0.0), 1.0 / 7.0);

  const double x_cut = std::min(x, f.grid->r_max);
  const double lhs2 = std::abs(partial_newton_potential(f, x_cut).at(x));
  const double rhs2 =
      std::pow(norm53, 5.0 / 6.0) * std::pow(std::max(x * D, 0.0), 1.0 / 12.0);

  return {make(lhs1, rhs1), make(lhs2, rhs2)};
}

} // namespace atomtf
