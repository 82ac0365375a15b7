#include "atomtf/config.hpp"
#include "atomtf/errors.hpp"
#include "atomtf/tf.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace atomtf {

using json = nlohmann::ordered_json;

namespace {

void expect_keys(const json& obj, const char* where,
                 std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) { known = true; break; }
    if (!known)
      throw config_error(std::string("unknown config key '") + it.key() + "' in " + where);
  }
}

template <typename T>
void maybe(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

} // namespace

RunConfig::RunConfig() {
  const ModelConstants d = ModelConstants::defaults(1.0, 1.0);
  c_tf = d.c_tf;
  c_w = d.c_w;
  c_d = d.c_d;
}

ModelConstants RunConfig::constants(double Z, double N) const {
  return ModelConstants::with_coefficients(c_tf, c_w, c_d, Z, N);
}

GridPtr RunConfig::make_grid(const ModelConstants& c) const {
  if (r_min > 0 && r_max > 0) return build_grid(r_min, r_max, grid_n);
  GridPtr def = default_grid(c, grid_n);
  const double lo = r_min > 0 ? r_min : def->r_min;
  const double hi = r_max > 0 ? r_max : def->r_max;
  return build_grid(lo, hi, grid_n);
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config root must be a JSON object");
  expect_keys(j, "root",
              {"constants", "grid", "flow", "Z", "N", "kappa", "r", "scan_step",
               "d_fit", "out", "format", "jobs", "seed"});
  RunConfig c;
  if (j.contains("constants")) {
    const auto& jc = j["constants"];
    expect_keys(jc, "constants", {"c_tf", "c_w", "c_d"});
    maybe(jc, "c_tf", c.c_tf);
    maybe(jc, "c_w", c.c_w);
    maybe(jc, "c_d", c.c_d);
  }
  if (j.contains("grid")) {
    const auto& jg = j["grid"];
    expect_keys(jg, "grid", {"r_min", "r_max", "n"});
    maybe(jg, "r_min", c.r_min);
    maybe(jg, "r_max", c.r_max);
    maybe(jg, "n", c.grid_n);
  }
  if (j.contains("flow")) {
    const auto& jf = j["flow"];
    expect_keys(jf, "flow",
                {"step", "max_iter", "tol_residual", "tol_energy", "backtrack",
                 "armijo", "r_box_frac", "delta_bound_frac", "drift_steps"});
    maybe(jf, "step", c.flow.step);
    maybe(jf, "max_iter", c.flow.max_iter);
    maybe(jf, "tol_residual", c.flow.tol_residual);
    maybe(jf, "tol_energy", c.flow.tol_energy);
    maybe(jf, "backtrack", c.flow.backtrack);
    maybe(jf, "armijo", c.flow.armijo);
    maybe(jf, "r_box_frac", c.flow.r_box_frac);
    maybe(jf, "delta_bound_frac", c.flow.delta_bound_frac);
    maybe(jf, "drift_steps", c.flow.drift_steps);
  }
  maybe(j, "Z", c.Z_values);
  maybe(j, "N", c.N_values);
  maybe(j, "kappa", c.kappa_values);
  maybe(j, "r", c.r_values);
  maybe(j, "scan_step", c.scan_step);
  maybe(j, "d_fit", c.d_fit);
  maybe(j, "out", c.out_path);
  maybe(j, "format", c.format);
  maybe(j, "jobs", c.jobs);
  maybe(j, "seed", c.seed);
  parse_format(c.format);  // validate early
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
  json j;
  j["constants"] = {{"c_tf", c_tf}, {"c_w", c_w}, {"c_d", c_d}};
  j["grid"] = {{"r_min", r_min}, {"r_max", r_max}, {"n", grid_n}};
  j["flow"] = {{"step", flow.step},
               {"max_iter", flow.max_iter},
               {"tol_residual", flow.tol_residual},
               {"tol_energy", flow.tol_energy},
               {"backtrack", flow.backtrack},
               {"armijo", flow.armijo},
               {"r_box_frac", flow.r_box_frac},
               {"delta_bound_frac", flow.delta_bound_frac},
               {"drift_steps", flow.drift_steps}};
  j["Z"] = Z_values;
  j["N"] = N_values;
  j["kappa"] = kappa_values;
  j["r"] = r_values;
  j["scan_step"] = scan_step;
  j["d_fit"] = d_fit;
  j["out"] = out_path;
  j["format"] = format;
  j["jobs"] = jobs;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

} // namespace atomtf
