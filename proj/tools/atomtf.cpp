// atomtf: radial Thomas-Fermi / TFDW solvers and the liquid drop model,
// with deterministic tabular output.
//
// Exit codes: 0 ok, 2 config error, 3 solver non-convergence,
// 4 invariant violation.

#include "atomtf/analysis.hpp"
#include "atomtf/config.hpp"
#include "atomtf/coulomb.hpp"
#include "atomtf/drop.hpp"
#include "atomtf/errors.hpp"
#include "atomtf/table.hpp"
#include "atomtf/tf.hpp"
#include "atomtf/tfdw.hpp"
#include "atomtf/verify.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace atomtf;

int log_level() {
  const char* env = std::getenv("ATOMTF_LOG");
  if (!env) return 1;
  const std::string s = env;
  if (s == "error") return 0;
  if (s == "debug") return 2;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::clog << "[atomtf] " << msg << "\n";
}

void write_out(const Table& t, const RunConfig& cfg) {
  const TableFormat f = parse_format(cfg.format);
  if (cfg.out_path.empty())
    emit_table(t, f, std::cout);
  else
    emit_table_to_file(t, f, cfg.out_path);
}

double neutral_N(const RunConfig& cfg, std::size_t i, double Z) {
  if (i < cfg.N_values.size()) return cfg.N_values[i];
  return Z;
}

/// Run `work(i)` for i in [0, count) with cfg.jobs workers; results land in
/// caller-owned slots indexed by i, so merge order is input order.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& work) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  const std::size_t k = std::min(jobs, count);
  std::vector<std::exception_ptr> errors(k);
  for (std::size_t t = 0; t < k; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

int cmd_tf(const RunConfig& cfg) {
  Table t;
  t.columns = {"Z", "r", "rho_tf", "phi_tf"};
  struct Piece {
    Table rows;
    double mass = 0, energy = 0, Z = 0;
  };
  std::vector<Piece> parts(cfg.Z_values.size());
  parallel_for(cfg.Z_values.size(), cfg.jobs, [&](std::size_t i) {
    const double Z = cfg.Z_values[i];
    const ModelConstants c = cfg.constants(Z, Z);
    const TFAtomicSolution sol = tf_atomic_solve(c, cfg.make_grid(c));
    Piece p;
    p.rows.columns = t.columns;
    for (std::size_t k = 0; k < sol.rho.size(); ++k)
      p.rows.add_row({Z, sol.rho.grid->r[k], sol.rho.v[k], sol.phi.v[k]});
    p.mass = sol.mass;
    p.energy = sol.energy;
    p.Z = Z;
    parts[i] = std::move(p);
  });
  for (auto& p : parts) {
    for (auto& row : p.rows.rows) t.rows.push_back(std::move(row));
    t.summary.emplace_back("mass_Z" + format_number(p.Z), p.mass);
    t.summary.emplace_back("energy_Z" + format_number(p.Z), p.energy);
  }
  write_out(t, cfg);
  return 0;
}

int cmd_tfdw(const RunConfig& cfg) {
  Table t;
  t.columns = {"Z", "N", "r", "rho0", "psi"};
  for (std::size_t i = 0; i < cfg.Z_values.size(); ++i) {
    const double Z = cfg.Z_values[i];
    const double N = neutral_N(cfg, i, Z);
    const ModelConstants c = cfg.constants(Z, N);
    const TFDWSolution sol = tfdw_minimize(c, cfg.make_grid(c), cfg.flow);
    for (std::size_t k = 0; k < sol.rho0.size(); ++k)
      t.add_row({Z, N, sol.rho0.grid->r[k], sol.rho0.v[k], sol.psi.v[k]});
    t.summary.emplace_back("energy_Z" + format_number(Z), sol.energy);
    t.summary.emplace_back("mu_Z" + format_number(Z), sol.mu);
    t.summary.emplace_back("residual_Z" + format_number(Z), sol.residual);
    t.summary.emplace_back("converged_Z" + format_number(Z), sol.converged ? 1.0 : 0.0);
    if (!sol.converged) {
      write_out(t, cfg);
      std::cerr << "atomtf tfdw: flow did not converge (residual "
                << format_number(sol.residual) << ")\n";
      return 3;
    }
  }
  write_out(t, cfg);
  return 0;
}

int cmd_screen(const RunConfig& cfg) {
  Table t;
  t.columns = {"r", "phi_diag", "phi_tf_diag", "diff"};
  const double Z = cfg.Z_values.front();
  const double N = neutral_N(cfg, 0, Z);
  const ModelConstants c = cfg.constants(Z, N);
  const GridPtr grid = cfg.make_grid(c);
  info("screen: solving TF and TFDW at Z = " + format_number(Z));
  const TFAtomicSolution tf = tf_atomic_solve(cfg.constants(Z, Z), grid);
  const TFDWSolution dw = tfdw_minimize(c, grid, cfg.flow);
  if (!dw.converged) {
    std::cerr << "atomtf screen: flow did not converge\n";
    return 3;
  }
  const ScreenedPair pair = compare_screened(dw, tf, cfg.d_fit);
  for (std::size_t k = 0; k < pair.r_values.size(); ++k)
    t.add_row({pair.r_values[k], pair.phi_diag[k], pair.phi_tf_diag[k], pair.diff[k]});
  t.summary.emplace_back("fitted_slope", pair.fit.slope);
  t.summary.emplace_back("fit_points", static_cast<double>(pair.fit.points));
  write_out(t, cfg);
  return 0;
}

int cmd_radius(const RunConfig& cfg) {
  Table t;
  t.columns = {"Z", "N", "kappa", "R", "ratio"};
  const double Z = cfg.Z_values.front();
  const double N = neutral_N(cfg, 0, Z);
  const ModelConstants c = cfg.constants(Z, N);
  const TFDWSolution sol = tfdw_minimize(c, cfg.make_grid(c), cfg.flow);
  if (!sol.converged) {
    std::cerr << "atomtf radius: flow did not converge\n";
    return 3;
  }
  for (double kappa : cfg.kappa_values) {
    const RadiusResult r = radius_of_atom(sol, kappa);
    t.add_row({Z, N, kappa, r.R, r.ratio});
  }
  write_out(t, cfg);
  return 0;
}

int cmd_ionize(const RunConfig& cfg) {
  ScanOptions opt;
  opt.scan_step = cfg.scan_step;
  opt.grid_n = cfg.grid_n;
  opt.flow = cfg.flow;
  const IonizationCurve curve = ionization_scan(cfg.Z_values, opt);
  Table t;
  t.columns = {"Z", "Nc", "excess", "N_unbound", "bracket_ok", "scan_failed"};
  for (const auto& p : curve.points)
    t.add_row({p.Z, p.Nc, p.excess, p.N_unbound, p.bracket_ok ? 1.0 : 0.0,
               p.scan_failed ? 1.0 : 0.0});
  t.summary.emplace_back("fitted_C", curve.fitted_C);
  t.summary.emplace_back("excess_slope", curve.excess_slope);
  t.summary.emplace_back("coarse_bound_ok", curve.coarse_bound_ok ? 1.0 : 0.0);
  write_out(t, cfg);
  for (const auto& p : curve.points)
    if (p.scan_failed) return 3;
  return 0;
}

int cmd_drop(const RunConfig& cfg) {
  Table t;
  t.columns = {"Z", "N_star", "best_split"};
  std::vector<FissionThreshold> rs(cfg.Z_values.size());
  parallel_for(cfg.Z_values.size(), cfg.jobs, [&](std::size_t i) {
    rs[i] = fission_threshold(cfg.Z_values[i], SplitFamily::m_grid);
  });
  for (std::size_t i = 0; i < rs.size(); ++i)
    t.add_row({cfg.Z_values[i], rs[i].N_star, rs[i].best_split});
  write_out(t, cfg);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  std::ostringstream ss;
  const int failures = run_verify(cfg.seed, ss);
  std::cout << ss.str();
  if (!cfg.out_path.empty()) {
    std::ofstream os(cfg.out_path, std::ios::binary);
    os << ss.str();
  }
  return failures == 0 ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial Thomas-Fermi / TFDW / liquid drop toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path, format;
  std::vector<double> Zs, Ns, kappas;
  double scan_step = -1;
  std::size_t jobs = 0;
  std::uint64_t seed = 0;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--Z", Zs, "nuclear charge(s)");
  app.add_option("--N", Ns, "electron number(s), default neutral");
  app.add_option("--kappa", kappas, "exterior masses for the radius command");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--scan-step", scan_step, "ionization scan resolution");
  app.add_option("--jobs", jobs, "parallel workers for sweeps");
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized checks");

  for (const char* name :
       {"tf", "tfdw", "screen", "radius", "ionize", "drop", "verify"})
    app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::from_file(config_path);
    if (!Zs.empty()) cfg.Z_values = Zs;
    if (!Ns.empty()) cfg.N_values = Ns;
    if (!kappas.empty()) cfg.kappa_values = kappas;
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!format.empty()) cfg.format = format;
    if (scan_step > 0) cfg.scan_step = scan_step;
    if (jobs > 0) cfg.jobs = jobs;
    if (seed_opt->count() > 0) cfg.seed = seed;
    parse_format(cfg.format);

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "tf") return cmd_tf(cfg);
    if (sub == "tfdw") return cmd_tfdw(cfg);
    if (sub == "screen") return cmd_screen(cfg);
    if (sub == "radius") return cmd_radius(cfg);
    if (sub == "ionize") return cmd_ionize(cfg);
    if (sub == "drop") return cmd_drop(cfg);
    if (sub == "verify") return cmd_verify(cfg);
    std::cerr << "unknown command\n";
    return 2;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const parameter_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const convergence_error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const invariant_violation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
