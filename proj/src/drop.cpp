#include "atomtf/drop.hpp"
#include "atomtf/coulomb.hpp"
#include "atomtf/errors.hpp"
#include "atomtf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atomtf {

namespace {

constexpr double PI = 3.14159265358979323846;

double shell_volume(double a, double b) {
  return 4.0 * PI / 3.0 * (b * b * b - a * a * a);
}

/// Coulomb norm of the unit-density indicator of [a, b], evaluated as
/// (1/2) int chi (chi * |.|^{-1}) on the shell's own grid, where the
/// indicator is a smooth (constant) density and the potential is exact to
/// quadrature order.
double shell_self_energy(double a, double b) {
  const double lo = (a > 0) ? a : b * 1e-7;
  const GridPtr g = build_grid(lo, b, kDropQuadratureNodes);
  RadialFunction one(g, std::vector<double>(g->size(), 1.0));
  const RadialFunction V = newton_potential(one);
  RadialFunction prod(g, std::vector<double>(g->size()));
  for (std::size_t i = 0; i < g->size(); ++i) prod.v[i] = V.v[i];
  return 0.5 * integrate(prod);
}

} // namespace

double DropConfig::volume() const {
  double v = 0.0;
  for (const auto& s : shells) v += shell_volume(s.a, s.b);
  return v;
}

void DropConfig::validate() const {
  if (Z < 0) throw parameter_error("DropConfig: Z must be >= 0");
  double prev_b = 0.0;
  for (std::size_t k = 0; k < shells.size(); ++k) {
    const auto& s = shells[k];
    if (!(s.a >= 0) || !(s.b > s.a))
      throw parameter_error("DropConfig: shell bounds must satisfy 0 <= a < b");
    if (k > 0 && s.a < prev_b)
      throw parameter_error("DropConfig: shells must be disjoint and ordered");
    prev_b = s.b;
  }
}

DropConfig DropConfig::ball(double volume, double Z) {
  if (!(volume > 0)) throw parameter_error("DropConfig::ball: volume must be positive");
  DropConfig c;
  c.Z = Z;
  c.shells.push_back({0.0, std::cbrt(volume * 3.0 / (4.0 * PI))});
  return c;
}

DropEnergy drop_energy(const DropConfig& config) {
  config.validate();
  DropEnergy e;
  if (config.shells.empty()) return e;

  for (const auto& s : config.shells) {
    e.surface += 4.0 * PI * (s.a * s.a + s.b * s.b);
    e.attraction += -config.Z * 2.0 * PI * (s.b * s.b - s.a * s.a);
  }

  // repulsion: per-shell self terms by quadrature; cross terms by Newton
  // (an inner shell acts on an outer one as a point charge at the origin)
  for (std::size_t k = 0; k < config.shells.size(); ++k) {
    const auto& sk = config.shells[k];
    e.repulsion += shell_self_energy(sk.a, sk.b);
    const double mass_k = shell_volume(sk.a, sk.b);
    for (std::size_t l = k + 1; l < config.shells.size(); ++l) {
      const auto& sl = config.shells[l];
      e.repulsion += mass_k * 2.0 * PI * (sl.b * sl.b - sl.a * sl.a);
    }
  }
  e.total = e.surface + e.attraction + e.repulsion;
  return e;
}

double binding_margin(double N, double Z, double m) {
  if (!(m > 0) || !(m < N)) throw parameter_error("binding_test: require 0 < m < N");
  const DropEnergy whole = drop_energy(DropConfig::ball(N, Z));
  const DropEnergy kept = drop_energy(DropConfig::ball(N - m, Z));
  const DropEnergy escaped = drop_energy(DropConfig::ball(m, 0.0));
  return kept.total + escaped.total - whole.total;
}

bool binding_test(double N, double Z, double m) { return binding_margin(N, Z, m) >= 0.0; }

std::vector<double> split_candidates(double N, SplitFamily family) {
  std::vector<double> ms;
  if (family == SplitFamily::equal_binary) {
    ms.push_back(N / 2.0);
    return ms;
  }
  for (int k = 1; k <= 8; ++k) ms.push_back(N * static_cast<double>(k) / 16.0);
  // absolute-mass splits: the optimal escaped piece has Theta(1) volume at
  // large Z, which the fractional grid alone cannot reach
  for (double m = 0.5; m < N / 2.0; m *= 2.0) ms.push_back(m);
  std::sort(ms.begin(), ms.end());
  return ms;
}

namespace {

double min_margin(double N, double Z, SplitFamily family) {
  double worst = std::numeric_limits<double>::infinity();
  for (double m : split_candidates(N, family))
    worst = std::min(worst, binding_margin(N, Z, m));
  return worst;
}

} // namespace

FissionThreshold fission_threshold(double Z, SplitFamily family) {
  if (Z < 0) throw parameter_error("fission_threshold: Z must be >= 0");
  double lo = 0.5;  // stable for small drops
  if (min_margin(lo, Z, family) < 0)
    throw parameter_error("fission_threshold: no stable bracket at N = 0.5");
  double hi = std::max(4.0, 4.0 * Z + 40.0);
  std::size_t guard = 0;
  while (min_margin(hi, Z, family) >= 0) {
    hi *= 2.0;
    if (++guard > 60) throw convergence_error("fission_threshold: no unstable bracket", hi);
  }
  while ((hi - lo) > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (min_margin(mid, Z, family) >= 0)
      lo = mid;
    else
      hi = mid;
  }
  FissionThreshold out;
  out.N_star = 0.5 * (lo + hi);
  double worst = std::numeric_limits<double>::infinity();
  for (double m : split_candidates(hi, family)) {
    const double margin = binding_margin(hi, Z, m);
    if (margin < worst) {
      worst = margin;
      out.best_split = m;
    }
  }
  return out;
}

} // namespace atomtf
