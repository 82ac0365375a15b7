#include "atomtf/grid.hpp"
#include "atomtf/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace atomtf {

namespace {

constexpr double PI = 3.14159265358979323846;

// 8-point Gauss-Legendre on [-1,1]; plenty for the panel moment integrals.
constexpr std::array<double, 8> GL_X = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
     0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> GL_W = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// Per-panel weights of the product rule integrating the piecewise cubic
// interpolant of f(t) (4-node stencils, clamped at the ends) against
// 4 pi e^{q t} dt for q = 3 (volume) and q = 2 (outer Coulomb measure).
void product_panels_cubic(const std::vector<double>& t,
                          std::vector<std::array<double, 4>>& p3,
                          std::vector<std::array<double, 4>>& p2,
                          std::vector<std::size_t>& stencil) {
  const std::size_t n = t.size();
  p3.assign(n - 1, {0, 0, 0, 0});
  p2.assign(n - 1, {0, 0, 0, 0});
  stencil.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t s0;
    if (i == 0) s0 = 0;
    else if (i == n - 2) s0 = n - 4;
    else s0 = i - 1;
    stencil[i] = s0;
    const double a = t[i], b = t[i + 1];
    for (int q = 0; q < 8; ++q) {
      const double u = 0.5 * (b - a) * GL_X[q] + 0.5 * (a + b);
      const double base = 0.5 * (b - a) * GL_W[q] * 4.0 * PI;
      const double m3 = base * std::exp(3.0 * u);
      const double m2 = base * std::exp(2.0 * u);
      for (int k = 0; k < 4; ++k) {
        double L = 1.0;
        for (int j = 0; j < 4; ++j)
          if (j != k) L *= (u - t[s0 + j]) / (t[s0 + k] - t[s0 + j]);
        p3[i][k] += m3 * L;
        p2[i][k] += m2 * L;
      }
    }
  }
}

// Piecewise-linear product rule; weights are positive for any spacing.
std::vector<double> product_weights_linear(const std::vector<double>& t) {
  const std::size_t n = t.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = t[i + 1] - t[i];
    const double e3 = std::exp(3.0 * h);
    const double base = 4.0 * PI * std::exp(3.0 * t[i]);
    // exact moments of e^{3s} (h-s)/h and e^{3s} s/h over [0,h]
    w[i]     += base * (e3 - 1.0 - 3.0 * h) / (9.0 * h);
    w[i + 1] += base * ((3.0 * h - 1.0) * e3 + 1.0) / (9.0 * h);
  }
  return w;
}

} // namespace

std::size_t RadialGrid::last_index_below(double x) const {
  if (x < r.front()) return static_cast<std::size_t>(-1);
  auto it = std::upper_bound(r.begin(), r.end(), x);
  return static_cast<std::size_t>(it - r.begin()) - 1;
}

std::size_t RadialGrid::nearest_index(double x) const {
  if (x <= r.front()) return 0;
  if (x >= r.back()) return r.size() - 1;
  const double tx = std::log(x), t0 = std::log(r.front());
  auto i = static_cast<std::size_t>(std::lround((tx - t0) / step));
  return std::min(i, r.size() - 1);
}

GridPtr build_grid(double r_min, double r_max, std::size_t n) {
  if (!(r_min > 0) || !(r_max > r_min) || !std::isfinite(r_max))
    throw parameter_error("build_grid: require 0 < r_min < r_max");
  if (n < 16) throw parameter_error("build_grid: require n >= 16");

  auto g = std::make_shared<RadialGrid>();
  g->r_min = r_min;
  g->r_max = r_max;
  const double t0 = std::log(r_min), t1 = std::log(r_max);
  g->step = (t1 - t0) / static_cast<double>(n - 1);
  std::vector<double> t(n);
  g->r.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = t0 + g->step * static_cast<double>(i);
    g->r[i] = std::exp(t[i]);
  }
  g->r.front() = r_min;
  g->r.back() = r_max;
  t.front() = t0;
  t.back() = t1;

  product_panels_cubic(t, g->panel_w3, g->panel_w2, g->panel_stencil);
  g->w.assign(n, 0.0);
  for (std::size_t p = 0; p + 1 < n; ++p)
    for (int k = 0; k < 4; ++k) g->w[g->panel_stencil[p] + k] += g->panel_w3[p][k];
  if (std::any_of(g->w.begin(), g->w.end(), [](double x) { return !(x > 0); })) {
    g->w = product_weights_linear(t);
    // matching linear panel decomposition keeps cumulative integrals
    // consistent with the nodal weights
    g->panel_w3.assign(n - 1, {0, 0, 0, 0});
    g->panel_w2.assign(n - 1, {0, 0, 0, 0});
    for (std::size_t i = 0; i + 1 < n; ++i) {
      g->panel_stencil[i] = i > 0 ? i - 1 : 0;
      const int k0 = i > 0 ? 1 : 0;
      const double h = t[i + 1] - t[i];
      const double e3 = std::exp(3.0 * h), e2 = std::exp(2.0 * h);
      const double b3 = 4.0 * PI * std::exp(3.0 * t[i]);
      const double b2 = 4.0 * PI * std::exp(2.0 * t[i]);
      g->panel_w3[i][k0] = b3 * (e3 - 1.0 - 3.0 * h) / (9.0 * h);
      g->panel_w3[i][k0 + 1] = b3 * ((3.0 * h - 1.0) * e3 + 1.0) / (9.0 * h);
      g->panel_w2[i][k0] = b2 * (e2 - 1.0 - 2.0 * h) / (4.0 * h);
      g->panel_w2[i][k0 + 1] = b2 * ((2.0 * h - 1.0) * e2 + 1.0) / (4.0 * h);
    }
  }
  return g;
}

RadialFunction::RadialFunction(GridPtr g, std::vector<double> values, double tail)
    : grid(std::move(g)), v(std::move(values)), tail_exponent(tail) {
  if (!grid || v.size() != grid->size())
    throw parameter_error("RadialFunction: value count does not match grid");
}

RadialFunction::RadialFunction(GridPtr g, const std::function<double(double)>& f, double tail)
    : grid(std::move(g)), tail_exponent(tail) {
  if (!grid) throw parameter_error("RadialFunction: null grid");
  v.resize(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->r[i]);
}

double RadialFunction::at(double radius) const {
  const auto& r = grid->r;
  const std::size_t n = r.size();
  if (radius >= r.back()) {
    if (!has_tail()) return radius == r.back() ? v.back() : 0.0;
    return v.back() * std::pow(radius / r.back(), -tail_exponent);
  }
  if (radius <= r.front()) {
    // power extrapolation from the first two nodes when both are one-signed
    const double f0 = v[0], f1 = v[1];
    if (f0 == 0.0) return 0.0;
    if (f0 * f1 > 0) {
      const double p = std::log(f1 / f0) / grid->step;
      return f0 * std::exp(p * std::log(radius / r.front()) / 1.0);
    }
    return f0;
  }
  const double tx = std::log(radius);
  const double t0 = std::log(r.front());
  auto i = static_cast<std::size_t>((tx - t0) / grid->step);
  i = std::min(i, n - 2);
  std::size_t s0 = (i == 0) ? 0 : (i >= n - 2 ? n - 4 : i - 1);
  double ts[4], out = 0.0;
  for (int k = 0; k < 4; ++k) ts[k] = std::log(r[s0 + k]);
  for (int k = 0; k < 4; ++k) {
    double L = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != k) L *= (tx - ts[j]) / (ts[k] - ts[j]);
    out += v[s0 + k] * L;
  }
  return out;
}

RadialFunction RadialFunction::resample(const GridPtr& other) const {
  RadialFunction out(other, std::vector<double>(other->size(), 0.0), tail_exponent);
  for (std::size_t i = 0; i < other->size(); ++i) out.v[i] = at(other->r[i]);
  return out;
}

void validate_density(const RadialFunction& f, const char* what) {
  for (double x : f.v) {
    if (!std::isfinite(x)) throw invariant_violation(std::string(what) + ": non-finite value");
    if (x < 0) throw invariant_violation(std::string(what) + ": negative value");
  }
}

double integrate(const RadialFunction& f) {
  const auto& g = *f.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.w[i] * f.v[i];
  if (f.has_tail() && f.tail_value() != 0.0) {
    const double p = f.tail_exponent;
    if (p <= 3.0)
      throw divergent_tail_error("integrate: tail exponent <= 3 with nonzero tail value");
    s += 4.0 * PI * f.tail_value() * g.r_max * g.r_max * g.r_max / (p - 3.0);
  }
  return s;
}

double integrate_abs_power(const RadialFunction& f, double p) {
  if (!(p > 0)) throw parameter_error("integrate_abs_power: require p > 0");
  const auto& g = *f.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.w[i] * std::pow(std::abs(f.v[i]), p);
  if (f.has_tail() && f.tail_value() != 0.0) {
    const double q = f.tail_exponent * p;
    if (q <= 3.0)
      throw divergent_tail_error("integrate_abs_power: divergent tail");
    s += 4.0 * PI * std::pow(std::abs(f.tail_value()), p)
         * g.r_max * g.r_max * g.r_max / (q - 3.0);
  }
  return s;
}

std::vector<double> panel_gradient_coefficients(const RadialGrid& g) {
  const std::size_t n = g.size();
  std::vector<double> K(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dr = g.r[i + 1] - g.r[i];
    const double vol = 4.0 * PI / 3.0
                       * (g.r[i + 1] * g.r[i + 1] * g.r[i + 1] - g.r[i] * g.r[i] * g.r[i]);
    K[i] = vol / (dr * dr);
  }
  return K;
}

double gradient_energy(const RadialFunction& psi) {
  const auto& g = *psi.grid;
  const std::size_t n = g.size();
  if (n < 3) throw parameter_error("gradient_energy: need at least 3 nodes");
  double vmax = 0.0;
  for (double x : psi.v) vmax = std::max(vmax, std::abs(x));
  if (!psi.has_tail()) {
    if (vmax > 0 && std::abs(psi.tail_value()) > 1e-8 * vmax)
      throw divergent_tail_error(
          "gradient_energy: nonvanishing end value with zero tail declared");
  } else if (psi.tail_exponent <= 0.5 && psi.tail_value() != 0.0) {
    throw divergent_tail_error("gradient_energy: tail exponent <= 1/2");
  }
  const auto K = panel_gradient_coefficients(g);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = psi.v[i + 1] - psi.v[i];
    s += K[i] * d * d;
  }
  if (psi.has_tail() && psi.tail_value() != 0.0) {
    const double p = psi.tail_exponent, fm = psi.tail_value();
    s += 4.0 * PI * p * p * fm * fm * g.r_max / (2.0 * p - 1.0);
  }
  return s;
}

RadialFunction derivative(const RadialFunction& f) {
  const auto& g = *f.grid;
  const std::size_t n = g.size();
  if (n < 3) throw parameter_error("derivative: need at least 3 nodes");
  const double h = g.step;
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = (f.v[i + 1] - f.v[i - 1]) / (2.0 * h) / g.r[i];
  d[0] = (-3.0 * f.v[0] + 4.0 * f.v[1] - f.v[2]) / (2.0 * h) / g.r[0];
  d[n - 1] = (3.0 * f.v[n - 1] - 4.0 * f.v[n - 2] + f.v[n - 3]) / (2.0 * h) / g.r[n - 1];
  return RadialFunction(f.grid, std::move(d));
}

} // namespace atomtf
