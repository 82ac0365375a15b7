#pragma once

#include "atomtf/constants.hpp"
#include "atomtf/table.hpp"
#include "atomtf/tfdw.hpp"

#include <string>
#include <vector>

namespace atomtf {

/// Run configuration: model constants, grid and flow parameters, command
/// arguments, and output selection.  Parsed from a strict JSON document
/// (unknown keys are rejected by name) and overridable by CLI flags.
struct RunConfig {
  // model constants; Z/N lists drive sweeps, scalar commands use the front
  double c_tf, c_w, c_d;
  std::vector<double> Z_values{1.0};
  std::vector<double> N_values;  ///< empty = neutral (N = Z)

  // grid
  double r_min = 0;  ///< 0 = solver default
  double r_max = 0;  ///< 0 = solver default
  std::size_t grid_n = 4000;

  // flow
  FlowConfig flow;

  // command-specific
  std::vector<double> kappa_values{10.0, 30.0, 100.0};
  std::vector<double> r_values;
  double scan_step = 0.25;
  double d_fit = 0.5;

  std::string out_path;  ///< empty = stdout
  std::string format = "csv";
  std::size_t jobs = 1;
  std::uint64_t seed = 12345;

  RunConfig();

  ModelConstants constants(double Z, double N) const;
  GridPtr make_grid(const ModelConstants& c) const;

  /// Strict parse; throws config_error naming any unknown key.
  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_file(const std::string& path);
  /// Lossless serialization (parse(emit(c)) == c).
  std::string to_json_text() const;

  bool operator==(const RunConfig&) const = default;
};

} // namespace atomtf
