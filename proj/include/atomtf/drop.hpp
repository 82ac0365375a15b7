#pragma once

#include <cstddef>
#include <vector>

namespace atomtf {

/// Radial liquid drop configuration: a finite union of disjoint concentric
/// shells [a_k, b_k] (a_k = 0 makes the first piece a ball).
struct DropConfig {
  struct Shell {
    double a = 0, b = 0;
  };
  std::vector<Shell> shells;  ///< disjoint, ordered by radius
  double Z = 0;               ///< background nuclear charge

  double volume() const;
  /// Throws parameter_error for unordered or overlapping shells.
  void validate() const;

  static DropConfig ball(double volume, double Z);
};

struct DropEnergy {
  double surface = 0;     ///< sum 4 pi (a^2 + b^2), omitting a = 0 faces
  double attraction = 0;  ///< -Z sum 2 pi (b^2 - a^2)
  double repulsion = 0;   ///< D(chi_Omega)
  double total = 0;
};

/// Energy of a radial configuration.  Surface and attraction are closed
/// forms; the repulsion is the Coulomb norm of the indicator (per-shell
/// quadrature self-terms plus exact Newton cross terms).
DropEnergy drop_energy(const DropConfig& config);

/// Quadrature resolution used for the shell self-energies.
inline constexpr std::size_t kDropQuadratureNodes = 2000;

/// Stability of the ball of volume N against losing a ball of volume m to
/// infinity: true iff E_Z(ball N) <= E_Z(ball N-m) + E_0(ball m).
bool binding_test(double N, double Z, double m);

/// Signed stability margin of the same comparison (positive = bound).
double binding_margin(double N, double Z, double m);

enum class SplitFamily {
  equal_binary,  ///< m = N/2 only
  m_grid,        ///< fractional grid m = k N/16 plus a geometric absolute-mass grid
};

struct FissionThreshold {
  double N_star = 0;      ///< volume where stability first fails
  double best_split = 0;  ///< escaped mass realizing the threshold
};

/// Bisection on N of the stability predicate (min over the split family of
/// the binding margin), to 1e-6 relative.
FissionThreshold fission_threshold(double Z, SplitFamily family);

/// Split masses scanned for a drop of volume N.
std::vector<double> split_candidates(double N, SplitFamily family);

} // namespace atomtf
