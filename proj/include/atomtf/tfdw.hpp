#pragma once

#include "atomtf/constants.hpp"
#include "atomtf/grid.hpp"

#include <optional>
#include <vector>

namespace atomtf {

/// Controls for the projected gradient flow on psi = sqrt(rho).
struct FlowConfig {
  double step = 0.5;             ///< initial step size
  std::size_t max_iter = 20000;
  double tol_residual = 1e-8;    ///< projected-gradient norm in the grid norm
  double tol_energy = 1e-13;     ///< relative energy-change floor (descent phase)
  double backtrack = 0.5;        ///< step reduction factor, in (0,1)
  double armijo = 1e-4;          ///< sufficient-decrease threshold
  double r_box_frac = 0.5;       ///< bound test box R_box = r_box_frac * r_max
  double delta_bound_frac = 1e-3;///< bound test mass tolerance, fraction of N
  std::size_t drift_steps = 500; ///< extra flow steps for the escape probe
  bool require_convergence = false; ///< throw on max_iter instead of returning

  void validate() const;
  bool operator==(const FlowConfig&) const = default;
};

struct TFDWEnergy {
  double tf = 0;        ///<  c_tf int rho^{5/3}
  double vw = 0;        ///<  c_w  int |grad sqrt(rho)|^2
  double attraction = 0;///< -Z int rho / |x|
  double hartree = 0;   ///<  D(rho)
  double dirac = 0;     ///< -c_d int rho^{4/3}
  double total() const { return tf + vw + attraction + hartree + dirac; }
};

enum class BoundState { bound, unbound, inconclusive };
const char* to_string(BoundState s);

struct TFDWSolution {
  RadialFunction psi;    ///< sqrt(rho0) >= 0
  RadialFunction rho0;   ///< psi^2
  double energy = 0;
  double mu = 0;         ///< dE/dN at the minimizer (Rayleigh quotient)
  std::size_t iterations = 0;
  double residual = 0;
  bool converged = false;
  double max_mass_drift = 0;       ///< largest |int psi^2 - N|/N seen over iterates
  std::vector<double> energy_history; ///< accepted descent-phase energies
  BoundState bound_flag = BoundState::inconclusive;
  ModelConstants constants;
};

/// Full TFDW energy of psi (rho = psi^2), term by term.  Terms with zero
/// coefficient are skipped (the gradient term of a TF profile diverges).
TFDWEnergy tfdw_energy(const RadialFunction& psi, const ModelConstants& c);

/// Exact discrete L2(4 pi r^2 dr) gradient of the energy above; the
/// pairing sum_i w_i g_i eta_i equals the directional derivative of
/// tfdw_energy along eta.
RadialFunction tfdw_gradient(const RadialFunction& psi, const ModelConstants& c);

/// Minimize the TFDW functional over {rho >= 0, int rho = N} by projected
/// gradient descent on psi with a block-Newton preconditioner, Armijo
/// backtracking, and multiplicative mass renormalization after every step.
/// Default init: sqrt of the atomic TF density rescaled to mass N.
TFDWSolution tfdw_minimize(const ModelConstants& c, const GridPtr& grid,
                           const FlowConfig& config = {},
                           const std::optional<RadialFunction>& init = std::nullopt);

struct BoundTestReport {
  BoundState state = BoundState::inconclusive;
  double mass_outside_box = 0;  ///< mass beyond R_box
  double tail_slope = 0;        ///< d log rho / d log r at the grid end
  double drift = 0;             ///< outer-third mass gain over the probe flow
  bool drift_monotone = false;
};

/// Numerical existence proxy.  Bound when the converged density sits inside
/// the box with a decaying tail; unbound when mass persistently drifts into
/// the outer grid third across `drift_steps` extra flow steps, or has already
/// escaped past R_box; inconclusive otherwise.
BoundTestReport bound_state_test(const TFDWSolution& sol, const FlowConfig& config);

} // namespace atomtf
