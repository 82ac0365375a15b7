#pragma once

#include "atomtf/constants.hpp"
#include "atomtf/grid.hpp"

#include <utility>
#include <vector>

namespace atomtf {

/// Iteration controls for the damped fixed point on the potential.
struct TfOptions {
  double mixing = 0.3;          ///< linear mixing, halved on residual increase
  double tol_residual = 1e-9;   ///< max-node relative change of phi
  double tol_mass_drift = 1e-10;///< relative mass change per iteration
  std::size_t max_iter = 6000;
  double mass_tol = 1e-8;       ///< relative tolerance of the mu bisection
  std::size_t max_bisect = 200;
};

/// Default grid for an atomic problem: resolves the Z^{-1/3} core and
/// reaches far enough that the r^{-6} tail closure is accurate.
GridPtr default_grid(const ModelConstants& c, std::size_t n = 4000);

/// Atomic TF minimizer (V = Z/|x|, mu = 0).
struct TFAtomicSolution {
  RadialFunction rho;   ///< minimizer density, tail exponent 6
  RadialFunction phi;   ///< Z/|x| - rho * |x|^{-1}
  double mu = 0;        ///< always 0 for the atomic problem
  double energy = 0;    ///< c_tf int rho^{5/3} - int Z rho/|x| + D(rho)
  double mass = 0;      ///< int rho (with tail closure)
  std::size_t iterations = 0;
  double residual = 0;
  ModelConstants constants;
};

TFAtomicSolution tf_atomic_solve(const ModelConstants& c, const GridPtr& grid,
                                 const TfOptions& opt = {});

/// Constrained TF minimizer for a general vanishing potential V.
struct TFGeneralSolution {
  RadialFunction rho;
  RadialFunction phi;   ///< V - rho * |x|^{-1}
  double mu = 0;
  double mass_budget = 0;
  double attained_mass = 0;
  std::size_t iterations = 0;
  double residual = 0;
  /// (mu, attained mass) pairs visited by the bisection, in order.
  std::vector<std::pair<double, double>> bisection_history;
};

TFGeneralSolution tf_general_solve(const RadialFunction& V, double m,
                                   const ModelConstants& c, const TfOptions& opt = {});

/// Exterior TF minimizer over densities supported on {r > r_cut} with
/// int rho <= mass_budget, for the screened potential V_r = chi_r^+ Phi_r.
/// The interior/exterior split is exact on the grid: the node at r_cut
/// belongs to the interior (closed ball) and is excluded from the support.
struct ExteriorTFSolution {
  double r_cut = 0;
  RadialFunction v_r;    ///< chi_r^+ Phi_r
  RadialFunction rho_r;
  RadialFunction phi_r;  ///< V_r - rho_r * |x|^{-1}
  double mu_r = 0;
  double mass_budget = 0;
  double attained_mass = 0;
  std::size_t iterations = 0;
  double residual = 0;
};

ExteriorTFSolution tf_exterior_solve(const RadialFunction& phi_screened, double r_cut,
                                     double mass_budget, const ModelConstants& c,
                                     const TfOptions& opt = {});

/// Max-node residual of the TF equation (5c/3) rho^{2/3} = [phi - mu]_+,
/// with phi recomputed from the stored density; normalized by max phi.
double tf_equation_residual(const RadialFunction& rho, const RadialFunction& V,
                            double mu, const ModelConstants& c);

/// Sommerfeld envelope diagnostics for a solved potential profile.
struct SommerfeldEnvelope {
  double r = 0;        ///< boundary radius (snapped to a node)
  double a_r = 0;      ///< (phi(r)/(A r^{-4}))^{-1/2} - 1
  double A_r = 0;      ///< phi(r)/(A r^{-4}) - 1
  double zeta = 0;
  RadialFunction ratio_profile;  ///< phi(x) / (A_tf |x|^{-4}) on the full grid
  bool envelope_holds = false;   ///< two-sided bound at every node >= r
  double worst_violation = 0;    ///< largest relative excursion outside the envelope
};

/// Verifies (1 + a_r (r/x)^zeta)^{-2} <= ratio <= 1 + A_r (r/x)^zeta for all
/// nodes >= r, with relative slack; throws invariant_violation beyond slack.
SommerfeldEnvelope sommerfeld_check(const RadialFunction& phi, const ModelConstants& c,
                                    double r, double slack = 1e-6);

} // namespace atomtf
