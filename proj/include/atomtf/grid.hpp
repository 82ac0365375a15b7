#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace atomtf {

/// Logarithmic radial mesh with quadrature weights for integrals
/// of the form  int_0^inf f(r) 4 pi r^2 dr  over [r_min, r_max].
///
/// Nodes are log-spaced; the weights integrate the piecewise-cubic
/// interpolant of f in t = log r against the exact measure 4 pi e^{3t} dt,
/// so constants (and anything cubic in t) are integrated exactly.
/// On very coarse grids, where the cubic product weights would lose
/// positivity, the construction falls back to the piecewise-linear
/// product rule, which is positive unconditionally.
class RadialGrid {
public:
  std::vector<double> r;  ///< nodes, strictly increasing, all > 0
  std::vector<double> w;  ///< quadrature weights, all > 0
  double r_min = 0, r_max = 0;
  double step = 0;        ///< spacing in t = log r

  /// Per-panel product weights against 4 pi e^{3t} dt (volume measure) and
  /// 4 pi e^{2t} dt (the 4 pi y dy measure of outer Coulomb integrals), for
  /// the 4-node stencil starting at panel_stencil[p].  Cumulative (panel-by-
  /// panel) integrals built from these stay clear of the kernel kink that a
  /// nodal split would put inside a stencil.
  std::vector<std::array<double, 4>> panel_w3;
  std::vector<std::array<double, 4>> panel_w2;
  std::vector<std::size_t> panel_stencil;

  std::size_t size() const { return r.size(); }
  /// Index of the last node with r_i <= x (or npos if x < r_0).
  std::size_t last_index_below(double x) const;
  /// Index of the node closest to x in log distance.
  std::size_t nearest_index(double x) const;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Build a log-spaced grid on [r_min, r_max] with n nodes.
/// Requires 0 < r_min < r_max and n >= 16.
GridPtr build_grid(double r_min, double r_max, std::size_t n);

/// Sampled radial function.  tail_exponent == 0 means the function is
/// treated as identically zero beyond r_max; p > 0 declares the tail
/// model f(r) = f(r_max) (r / r_max)^{-p}.
struct RadialFunction {
  GridPtr grid;
  std::vector<double> v;
  double tail_exponent = 0;

  RadialFunction() = default;
  RadialFunction(GridPtr g, std::vector<double> values, double tail = 0);
  /// Sample a callable on the grid.
  RadialFunction(GridPtr g, const std::function<double(double)>& f, double tail = 0);

  std::size_t size() const { return v.size(); }
  bool has_tail() const { return tail_exponent != 0; }
  double tail_value() const { return v.empty() ? 0 : v.back(); }

  /// Pointwise evaluation: cubic interpolation in log r inside the grid,
  /// declared tail model beyond r_max, power extrapolation below r_min.
  double at(double radius) const;

  /// Resample onto another grid (via at()).
  RadialFunction resample(const GridPtr& other) const;
};

/// Throw invariant_violation unless all values are finite and >= 0.
void validate_density(const RadialFunction& f, const char* what = "density");

/// int f(r) 4 pi r^2 dr, with analytic tail closure when a tail is declared.
/// Throws divergent_tail_error if tail_exponent <= 3 with nonzero tail value.
double integrate(const RadialFunction& f);

/// int |f(r)|^p 4 pi r^2 dr (p > 0); tail closure requires p*tail_exponent > 3.
double integrate_abs_power(const RadialFunction& f, double p);

/// int (df/dr)^2 4 pi r^2 dr for psi >= 0 vanishing at infinity.
/// Uses panel (staggered) differences; see tfdw solver, which shares the form.
/// Throws divergent_tail_error for a nonvanishing end value with no declared
/// tail, or a declared tail with exponent <= 1/2.
double gradient_energy(const RadialFunction& psi);

/// Pointwise derivative df/dr by centered second-order differences in log r,
/// one-sided at the endpoints.
RadialFunction derivative(const RadialFunction& f);

/// Staggered panel coefficients K_i such that
/// gradient_energy(f) = sum_i K_i (f_{i+1} - f_i)^2.
std::vector<double> panel_gradient_coefficients(const RadialGrid& g);

} // namespace atomtf
