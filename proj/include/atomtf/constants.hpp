#pragma once

namespace atomtf {

/// Model coefficients and charges for the TF / TFDW functionals, plus the
/// derived Sommerfeld constants.  Defaults follow the conventional atomic
/// values; every solver treats them as opaque parameters.
struct ModelConstants {
  double c_tf = 0;  ///< coefficient of int rho^{5/3}
  double c_w = 0;   ///< coefficient of int |grad sqrt(rho)|^2
  double c_d = 0;   ///< coefficient of int rho^{4/3} (subtracted)
  double Z = 0;     ///< nuclear charge
  double N = 0;     ///< electron number (mass constraint)

  double A_tf = 0;  ///< (5 c_tf)^3 / (3 pi^2)
  double B_tf = 0;  ///< 5 c_tf (4 / (3 pi^2))^{1/3}

  static double zeta();  ///< (sqrt(73) - 7) / 2

  /// Conventional defaults: c_tf = (3/10)(3 pi^2)^{2/3}, c_w = 1/8,
  /// c_d = (3/4)(3/pi)^{1/3}.
  static ModelConstants defaults(double Z, double N);

  /// Same charges with custom coefficients; derived constants recomputed.
  static ModelConstants with_coefficients(double c_tf, double c_w, double c_d,
                                          double Z, double N);

  double recompute_A_tf() const;
  double recompute_B_tf() const;

  /// Throws parameter_error unless c_tf > 0, c_w >= 0, c_d >= 0, Z >= 0,
  /// N > 0 and the stored derived constants match the recomputed ones.
  void validate() const;
};

} // namespace atomtf
