// Experiment driver: fracfilt <subcommand> --config <path> [--out <dir>] [--seed <u64>]

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "fracfilt/acceptance.hpp"
#include "fracfilt/basis.hpp"
#include "fracfilt/config.hpp"
#include "fracfilt/duality.hpp"
#include "fracfilt/errors.hpp"
#include "fracfilt/evolve.hpp"
#include "fracfilt/extension.hpp"
#include "fracfilt/output.hpp"
#include "fracfilt/singular.hpp"

using namespace fracfilt;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kAcceptance = 3 };

struct Run {
  RunConfig cfg;
  json cfg_json;
  std::string out;
  json timings = json::object();

  std::string path(const std::string& name) const { return out + "/" + name; }

  json metadata(json results) const {
    return {{"config", cfg_json}, {"version", version()}, {"results", std::move(results)}};
  }

  template <class F>
  auto timed(const std::string& label, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    auto result = f();
    timings[label] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

  void finish() const { write_json(path("timings.json"), timings); }
};

BasisPtr main_basis(const RunConfig& c) { return build_basis(c.R, c.d, c.N); }

Field initial_field(const RunConfig& c, const BasisPtr& basis) {
  return Field::from_function(basis, c.u0.build(c.R));
}

int cmd_solve(Run& run) {
  const auto& c = run.cfg;
  const auto basis = main_basis(c);
  const Field u0 = initial_field(c, basis);
  const auto phi = c.nonlinearity.build();
  const auto traj = run.timed("evolve", [&] { return evolve(u0, c.T, c.solver(), phi, FracOrder(c.s)); });
  write_csv(run.path("trajectory.csv"), trajectory_table(traj), run.cfg_json);
  json diag = json::array();
  for (const auto& d : traj.diagnostics) {
    diag.push_back({{"newton", d.newton_iterations}, {"cg", d.cg_iterations}, {"residual", d.residual}});
  }
  write_json(run.path("metadata.json"),
             run.metadata({{"eps", traj.eps}, {"sup_norms", traj.sup_norms()}, {"steps", diag}}));
  return kOk;
}

int cmd_minimal(Run& run) {
  const auto& c = run.cfg;
  MinimalSetup setup;
  setup.radii = c.radii;
  setup.truncations = c.truncations.empty() ? std::vector<double>{c.radii.back()} : c.truncations;
  setup.spacing = c.spacing > 0.0 ? c.spacing : 2.0 * c.radii.front() / std::exp2(std::ceil(std::log2(c.N + 1.0)));
  setup.T = c.T;
  setup.tolerance = c.comparison_tol;
  const auto phi = c.nonlinearity.build();
  const auto datum = c.u0.build(c.radii.back());
  const auto rep = run.timed("minimal", [&] {
    return minimal_solution(datum, setup, c.solver(), phi, FracOrder(c.s));
  });
  Table table;
  table.columns = {"k", "R", "sup_final"};
  for (const auto& e : rep.solutions) table.rows.push_back({e.truncation, e.radius, e.trajectory.final().max_value()});
  write_csv(run.path("minimal.csv"), table, run.cfg_json);
  Trajectory limit;
  limit.times = {c.T};
  limit.fields = {*rep.limit};
  write_csv(run.path("limit.csv"), trajectory_table(limit), run.cfg_json);
  write_json(run.path("metadata.json"),
             run.metadata({{"spacing", setup.spacing},
                           {"domain_violation", rep.domain_violation},
                           {"truncation_violation", rep.truncation_violation},
                           {"successive_differences", rep.successive_differences},
                           {"cauchy_estimate", rep.cauchy_estimate},
                           {"monotone", rep.monotone}}));
  return kOk;
}

int cmd_compare(Run& run) {
  const auto& c = run.cfg;
  const auto basis = main_basis(c);
  const auto phi = c.nonlinearity.build();
  std::mt19937_64 rng(c.u0.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto upper_fn = c.u0.build(c.R);
  const Field w0 = Field::from_function(basis, upper_fn);
  Table table;
  table.columns = {"pair", "factor", "min_gap", "min_value", "max_value", "max_initial"};
  bool ok = true;
  run.timed("compare", [&] {
    for (int i = 0; i < c.pairs; ++i) {
      const double factor = unit(rng);
      const double freq = 1.0 + 6.0 * unit(rng), phase = 2.0 * M_PI * unit(rng);
      const Field u0 = Field::from_function(basis, [&](double x) {
        return upper_fn(x) * factor * 0.5 * (1.0 + std::sin(freq * x + phase));
      });
      const auto rep = compare(u0, w0, c.T, c.solver(), phi, FracOrder(c.s));
      ok = ok && rep.min_gap >= -c.comparison_tol;
      table.rows.push_back({double(i), factor, rep.min_gap, rep.min_value, rep.max_value, rep.max_initial});
    }
    return 0;
  });
  write_csv(run.path("comparison.csv"), table, run.cfg_json);
  write_json(run.path("metadata.json"), run.metadata({{"ordered", ok}}));
  return kOk;
}

json dtn_rows(const Field& f, FracOrder s, const std::vector<double>& heights, Table& table) {
  const Field target = spectral_frac_laplacian(f, s);
  json errs = json::array();
  for (double y : heights) {
    const double e = (dtn_flux(f, s, y) - target).l2_norm();
    table.rows.push_back({s.value(), y, e});
    errs.push_back(e);
  }
  return errs;
}

int cmd_extend(Run& run) {
  const auto& c = run.cfg;
  const auto basis = main_basis(c);
  const Field f = initial_field(c, basis);
  const FracOrder s(c.s);
  const auto ext = run.timed("extend", [&] { return extend_cylinder(f, s, c.y); });
  Table field;
  field.columns = {"y", "x", "value"};
  for (std::size_t iy = 0; iy < ext.y().size(); ++iy) {
    for (std::size_t ix = 0; ix < ext.x().size(); ++ix) field.rows.push_back({ext.y()[iy], ext.x()[ix], ext.at(iy, ix)});
  }
  write_csv(run.path("extension.csv"), field, run.cfg_json);
  Table dtn;
  dtn.columns = {"s", "y", "l2_error"};
  dtn_rows(f, s, c.y, dtn);
  write_csv(run.path("dtn.csv"), dtn, run.cfg_json);
  write_json(run.path("metadata.json"), run.metadata(json::object()));
  return kOk;
}

int cmd_dtn_check(Run& run) {
  const auto& c = run.cfg;
  const auto basis = main_basis(c);
  const Field f = initial_field(c, basis);
  Table dtn;
  dtn.columns = {"s", "y", "l2_error"};
  const auto errs = run.timed("dtn", [&] { return dtn_rows(f, FracOrder(c.s), c.y, dtn); });
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) monotone = monotone && errs[i + 1] < errs[i];
  write_csv(run.path("dtn.csv"), dtn, run.cfg_json);
  write_json(run.path("metadata.json"), run.metadata({{"errors", errs}, {"monotone", monotone}}));
  return kOk;
}

int cmd_energy_check(Run& run) {
  const auto& c = run.cfg;
  const auto basis = main_basis(c);
  const Field u0 = initial_field(c, basis);
  const FracOrder s(c.s);
  const auto phi = c.nonlinearity.build();
  const std::vector<double> y{c.y.front()};
  const auto energy = run.timed("energy", [&] { return weighted_energy(extend_cylinder(u0, s, y)); });
  const double hs = hs_norm(u0, s);
  const auto traj = run.timed("evolve", [&] { return evolve(u0, c.T, c.solver(), phi, s); });
  const auto local = run.timed("local", [&] { return local_energy_check(traj, c.r, phi, s); });
  Table table;
  table.columns = {"r", "lhs", "potential_term", "volume_term", "rhs", "measured_constant"};
  table.rows.push_back({local.radius, local.lhs, local.potential_term, local.volume_term, local.rhs,
                        local.measured_constant});
  write_csv(run.path("energy.csv"), table, run.cfg_json);
  write_json(run.path("metadata.json"),
             run.metadata({{"weighted_energy", energy.energy},
                           {"hs_norm", hs},
                           {"relative_error", hs > 0.0 ? std::abs(energy.energy / hs - 1.0) : 0.0},
                           {"tail_converged", energy.tail_converged},
                           {"local_energy_holds", local.holds},
                           {"constant", local.constant}}));
  return kOk;
}

int cmd_cutoff_scan(Run& run) {
  const auto& c = run.cfg;
  const FracOrder s(c.s);
  const double p = c.p > 0.0 ? c.p : default_holder_exponent(c.d, s);
  const double alpha = c.alpha > 0.0 ? c.alpha : default_weight_alpha(c.d, s);
  const auto scan = run.timed("scan", [&] { return cutoff_scaling_scan(s, c.radii, p, alpha); });
  Table table;
  table.columns = {"R", "lap_sup", "lap_scaled", "tp_sup", "tp_scaled", "q_l1"};
  for (const auto& r : scan.rows) table.rows.push_back({r.radius, r.lap_sup, r.lap_scaled, r.tp_sup, r.tp_scaled, r.q_l1});
  write_csv(run.path("cutoff.csv"), table, run.cfg_json);
  write_json(run.path("metadata.json"),
             run.metadata({{"p", p}, {"alpha", alpha}, {"lap_slope", scan.lap_slope},
                           {"tp_slope", scan.tp_slope}, {"q_slope", scan.q_slope}}));
  return kOk;
}

int cmd_duality(Run& run) {
  const auto& c = run.cfg;
  const auto basis = main_basis(c);
  const FracOrder s(c.s);
  const auto phi = c.nonlinearity.build();
  const Field u0 = initial_field(c, basis);
  const Field chi = Field::from_function(basis, [&](double x) {
    const double z = x / (0.6 * c.R);
    return std::abs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0;
  });
  SolverConfig coarse = c.solver();
  SolverConfig fine = coarse;
  fine.tau = 0.5 * coarse.tau;
  const auto u = run.timed("evolve_coarse", [&] { return evolve(u0, c.T, coarse, phi, s); });
  const auto w = run.timed("evolve_fine", [&] { return evolve(u0, c.T, fine, phi, s); });
  const auto wit = run.timed("witness", [&] {
    return uniqueness_witness(u, w, chi, c.k, c.n, phi, s, c.inner_steps);
  });
  Trajectory ws;
  ws.times = u.times;
  for (double t : u.times) ws.fields.push_back(w.at(t));
  const auto beta = smooth_coefficient(build_coefficient(u, ws, phi), c.k, c.n);
  const auto psi = run.timed("backward", [&] { return backward_solve(beta, chi, s, c.inner_steps); });
  const auto id = energy_identity_check(psi, beta, chi, s);
  write_csv(run.path("psi.csv"), trajectory_table(psi), run.cfg_json);
  write_json(run.path("metadata.json"),
             run.metadata({{"witness", wit.witness},
                           {"bound", wit.bound},
                           {"controlled", wit.controlled},
                           {"c_r", wit.c_r},
                           {"psi_range", {wit.psi_min, wit.psi_max}},
                           {"approx_error", beta.approx_error},
                           {"partition_error", beta.partition_error},
                           {"energy_identity", {{"lhs", id.lhs}, {"rhs", id.rhs}, {"residual", id.residual}}}}));
  return kOk;
}

int cmd_selftest(Run& run) {
  Table table;
  table.columns = {"criterion", "pass", "seconds", "budget"};
  json details = json::array();
  bool all = true;
  for (int id : criterion_ids()) {
    const auto r = run_criterion(id);
    std::cout << format_result(r) << std::endl;
    all = all && r.pass;
    table.rows.push_back({double(r.id), r.pass ? 1.0 : 0.0, r.seconds, r.budget});
    run.timings["criterion_" + std::to_string(id)] = r.seconds;
    details.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"measured", r.measured}});
  }
  write_csv(run.path("acceptance.csv"), table, run.cfg_json);
  write_json(run.path("metadata.json"), run.metadata({{"criteria", details}, {"all_pass", all}}));
  return all ? kOk : kAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the fractional filtration equation"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  const std::map<std::string, std::pair<int (*)(Run&), const char*>> commands{
      {"solve", {cmd_solve, "Evolve the datum and dump the trajectory"}},
      {"minimal", {cmd_minimal, "Nested-ball solves and monotonicity report"}},
      {"compare", {cmd_compare, "Ordered-pair comparison sweep"}},
      {"extend", {cmd_extend, "Cylinder extension and DtN table"}},
      {"dtn-check", {cmd_dtn_check, "DtN convergence as y -> 0"}},
      {"energy-check", {cmd_energy_check, "Weighted and local energy checks"}},
      {"cutoff-scan", {cmd_cutoff_scan, "Cut-off scaling tables"}},
      {"duality", {cmd_duality, "Backward solve, energy identity and witness"}},
      {"selftest", {cmd_selftest, "Run the full acceptance suite"}},
  };
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.second);
    sub->add_option("--config", config_path, "JSON run configuration")->required(name != "selftest");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Seed for random data");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  Run run;
  try {
    run.cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) run.cfg.u0.seed = *seed;
    if (!out_dir.empty()) run.cfg.out_dir = out_dir;
    validate(run.cfg);
    run.cfg_json = to_json(run.cfg);
    run.out = run.cfg.out_dir;
    ensure_directory(run.out);
  } catch (const ConfigError& e) {
    std::cerr << "config error in field '" << e.field() << "': " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const int code = commands.at(name).first(run);
    run.finish();
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "config error in field '" << e.field() << "': " << e.what() << '\n';
    return kValidation;
  } catch (const FeatureError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
