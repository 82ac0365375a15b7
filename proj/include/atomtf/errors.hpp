#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace atomtf {

namespace detail {
inline std::string residual_text(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}
} // namespace detail

/// Bad argument (bounds, counts, out-of-range radii, overlapping shells).
class parameter_error : public std::invalid_argument {
public:
  explicit parameter_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A declared power-law tail makes the requested integral infinite.
class divergent_tail_error : public std::runtime_error {
public:
  explicit divergent_tail_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iteration budget exhausted; carries the last residual.
class convergence_error : public std::runtime_error {
public:
  convergence_error(const std::string& msg, double last_residual)
      : std::runtime_error(msg + " (residual " + detail::residual_text(last_residual) + ")"),
        residual(last_residual) {}
  double residual;
};

/// A mathematical invariant the solver must maintain was violated.
class invariant_violation : public std::runtime_error {
public:
  explicit invariant_violation(const std::string& msg) : std::runtime_error(msg) {}
};

/// Not enough usable points for a least-squares fit.
class fit_error : public std::runtime_error {
public:
  explicit fit_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or unknown configuration input.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace atomtf
