#pragma once

#include "atomtf/grid.hpp"

#include <utility>

namespace atomtf {

/// Newton potential (f * |.|^{-1})(r) of a radial charge distribution,
/// evaluated on f's grid:  V_i = M_i / r_i + J_i  with
///   M_i = sum_{j<=i} w_j f_j   (mass inside r_i, shell at r_i included)
///   J_i = sum_{j>i} (w_j / r_j) f_j  (+ analytic tail when declared).
/// The returned function carries tail exponent 1 when the total charge
/// is nonzero.
RadialFunction newton_potential(const RadialFunction& f);

/// Same potential through the nodal kernel w_j / max(r_i, r_j).  Half a
/// panel less accurate near the evaluation node, but exactly symmetric in
/// the grid inner product, which makes the Coulomb norm a positive form;
/// coulomb_norm and the TFDW Hartree term use this route.
RadialFunction newton_potential_nodal(const RadialFunction& f);

/// Potential of the interior part f * 1(r <= r_cut); the shell exactly at
/// r_cut belongs to the interior (closed ball).  r_cut below the first node
/// gives the zero potential; r_cut must be positive and <= r_max.
RadialFunction partial_newton_potential(const RadialFunction& f, double r_cut);

/// Coulomb norm  D(f) = 1/2 iint f(x) f(y) / |x-y|  for radial (possibly
/// signed) f, computed as 1/2 int f (f * |.|^{-1}).
double coulomb_norm(const RadialFunction& f);

/// Total charge int f (integrate with tail closure).
double total_charge(const RadialFunction& f);

/// Panel-cumulative interior masses M_i = int_{r_min}^{r_i} f 4 pi y^2 dy.
std::vector<double> interior_mass_profile(const RadialFunction& f);

/// One side of a Coulomb estimate: measured left side, the right side with
/// the universal constant stripped, and the implied constant lhs/rhs.
/// A 0/0 ratio is reported as 0 with degenerate = true.
struct CoulombEstimateReport {
  double lhs = 0;
  double rhs_without_constant = 0;
  double implied_constant = 0;
  bool degenerate = false;
};

/// Checks of the two Coulomb estimates
///   (f*|.|^{-1})(x)            <= C ||f||_{5/3}^{5/7} D(f)^{1/7}
///   int_{|y|<|x|} f/|x-y| dy   <= C ||f||_{5/3}^{5/6} (|x| D(f))^{1/12}
/// at the given radius.  Returns {first, second}.
std::pair<CoulombEstimateReport, CoulombEstimateReport>
check_coulomb_inequalities(const RadialFunction& f, double x);

} // namespace atomtf
