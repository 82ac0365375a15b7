#include "atomtf/constants.hpp"
#include "atomtf/errors.hpp"

#include <cmath>

namespace atomtf {

namespace {
constexpr double PI = 3.14159265358979323846;
}

double ModelConstants::zeta() { return (std::sqrt(73.0) - 7.0) / 2.0; }

double ModelConstants::recompute_A_tf() const {
  const double f = 5.0 * c_tf;
  return f * f * f / (3.0 * PI * PI);
}

double ModelConstants::recompute_B_tf() const {
  return 5.0 * c_tf * std::cbrt(4.0 / (3.0 * PI * PI));
}

ModelConstants ModelConstants::with_coefficients(double c_tf, double c_w, double c_d,
                                                 double Z, double N) {
  ModelConstants c;
  c.c_tf = c_tf;
  c.c_w = c_w;
  c.c_d = c_d;
  c.Z = Z;
  c.N = N;
  c.A_tf = c.recompute_A_tf();
  c.B_tf = c.recompute_B_tf();
  c.validate();
  return c;
}

ModelConstants ModelConstants::defaults(double Z, double N) {
  const double c_tf = 0.3 * std::pow(3.0 * PI * PI, 2.0 / 3.0);
  const double c_w = 0.125;
  const double c_d = 0.75 * std::cbrt(3.0 / PI);
  return with_coefficients(c_tf, c_w, c_d, Z, N);
}

void ModelConstants::validate() const {
  if (!(c_tf > 0)) throw parameter_error("ModelConstants: c_tf must be positive");
  if (c_w < 0 || c_d < 0) throw parameter_error("ModelConstants: c_w, c_d must be >= 0");
  if (Z < 0) throw parameter_error("ModelConstants: Z must be >= 0");
  if (!(N > 0)) throw parameter_error("ModelConstants: N must be positive");
  if (A_tf != recompute_A_tf() || B_tf != recompute_B_tf())
    throw parameter_error("ModelConstants: stored derived constants are stale");
}

} // namespace atomtf
