#include "fracfilt/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "fracfilt/basis.hpp"
#include "fracfilt/duality.hpp"
#include "fracfilt/errors.hpp"
#include "fracfilt/evolve.hpp"
#include "fracfilt/extension.hpp"
#include "fracfilt/quadrature.hpp"
#include "fracfilt/singular.hpp"
#include "fracfilt/specfun.hpp"

namespace fracfilt {

namespace {

using nlohmann::json;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double bump(double x, double center, double width) {
  const double z = (x - center) / width;
  return std::abs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0;
}

// Each check fills `detail`/`measured` and returns whether it passed.
struct Outcome {
  bool ok = true;
  std::string detail;
  json measured = json::object();
  void fail_if(bool bad) { ok = ok && !bad; }
};

Outcome bessel_layer() {
  Outcome o;
  double worst = 0.0;
  for (const double z : log_spaced(1e-3, 30.0, 200)) {
    const double exact = std::sqrt(M_PI / (2.0 * z)) * std::exp(-z);
    worst = std::max(worst, std::abs(bessel_k(0.5, z) - exact) / exact);
  }
  // K_{mu+1} = K_{1-mu} + (2 mu / z) K_mu, using K_{mu-1} = K_{1-mu}.
  double recurrence = 0.0;
  for (const double mu : {0.1, 0.25, 0.4}) {
    for (const double z : log_spaced(1e-3, 30.0, 60)) {
      const auto [k0, k1] = detail::bessel_k_pair(mu, z, true);
      const double km = bessel_k_scaled(1.0 - mu, z);
      recurrence = std::max(recurrence, std::abs(k1 - km - 2.0 * mu / z * k0) / k1);
    }
  }
  const FracOrder half(0.5);
  const double z = 1e-6;
  const double limit = std::abs(constants(1, half).c_s * std::sqrt(z) * bessel_k(0.5, z) - 1.0);
  const FracOrder quarter(0.25);
  const double limit_quarter =
      std::abs(constants(1, quarter).c_s * std::pow(z, 0.25) * bessel_k(0.25, z) - 1.0);
  o.fail_if(!(worst <= 1e-12));
  o.fail_if(!(recurrence <= 1e-9));
  o.fail_if(!(limit <= 1e-4));
  o.measured = {{"k_half_rel_error", worst},
                {"recurrence_residual", recurrence},
                {"limit_gap_s_half", limit},
                {"limit_gap_s_quarter", limit_quarter}};
  o.detail = "K_1/2 rel err " + sci(worst) + " (<=1e-12), recurrence " + sci(recurrence) +
             " (<=1e-9), c_s z^s K_s - 1 at z=1e-6, s=1/2: " + sci(limit) + " (<=1e-4)";
  return o;
}

Outcome extension_closed_form() {
  Outcome o;
  const auto basis = build_basis(1.0, 1, 64);
  const FracOrder s(0.5);
  double worst = 0.0;
  for (int k = 1; k <= 32; ++k) {
    const double lambda = basis->eigenvalue(k);
    for (const double y : log_spaced(1e-4, 10.0, 60)) {
      worst = std::max(worst, std::abs(profile_psi(lambda, s, y) - std::exp(-std::sqrt(lambda) * y)));
    }
  }
  o.fail_if(!(worst <= 1e-10));
  o.measured = {{"max_error", worst}};
  o.detail = "max |psi_k - exp(-sqrt(lambda_k) y)| = " + sci(worst) + " (<=1e-10)";
  return o;
}

Outcome dirichlet_to_neumann() {
  Outcome o;
  const auto basis = build_basis(1.0, 1, 256);
  const Field f = Field::mode(basis, 1) + Field::mode(basis, 3) * 0.5;
  const std::vector<double> heights{1e-1, 1e-2, 1e-3, 1e-4};
  std::ostringstream os;
  for (const double sv : {0.25, 0.5, 0.75}) {
    const FracOrder s(sv);
    const Field target = spectral_frac_laplacian(f, s);
    std::vector<double> errs;
    for (const double y : heights) errs.push_back((dtn_flux(f, s, y) - target).l2_norm());
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) monotone = monotone && errs[i + 1] < errs[i];
    const bool small = errs.back() <= 1e-3;
    o.fail_if(!(monotone && small));
    o.measured["s=" + sci(sv)] = errs;
    os << "s=" << sv << ": " << sci(errs.front()) << ".." << sci(errs.back())
       << (monotone ? " monotone" : " NOT monotone") << (small ? "" : " [>1e-3 at y=1e-4]") << "; ";
  }
  o.detail = os.str();
  return o;
}

Outcome energy_identity() {
  Outcome o;
  const auto basis = build_basis(1.0, 1, 256);
  const Field f = Field::mode(basis, 1) + Field::mode(basis, 4) * 0.5;
  std::ostringstream os;
  for (const double sv : {0.3, 0.5, 0.7}) {
    const FracOrder s(sv);
    const std::vector<double> y{0.1};
    const auto report = weighted_energy(extend_cylinder(f, s, y), 64);
    const double rel = std::abs(report.energy / hs_norm(f, s) - 1.0);
    const double tol = sv == 0.5 ? 1e-6 : 1e-3;
    o.fail_if(!(rel <= tol));
    o.measured["s=" + sci(sv)] = rel;
    os << "s=" << sv << ": " << sci(rel) << " (<=" << sci(tol) << "); ";
  }
  o.detail = os.str();
  return o;
}

Outcome poisson_kernel_check() {
  Outcome o;
  double worst_mass = 0.0, worst_slope = 0.0;
  std::ostringstream os;
  for (const double sv : {0.25, 0.5, 0.75}) {
    const FracOrder s(sv);
    for (const double y : {0.1, 1.0, 10.0}) {
      auto kernel = [&](double x) { return poisson_kernel(x, y, s); };
      const double mass = 2.0 * (quad::integrate(kernel, 0.0, 10.0 * y, 1e-13) +
                                 quad::integrate_tail(kernel, 10.0 * y, 1e-13));
      worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
    }
    const LineData data = sample_line([](double x) { return std::abs(x) < 1.0 ? 1.0 : 0.0; }, 1.0, 2);
    const std::vector<double> xs{20.0, 40.0, 80.0, 160.0, 320.0};
    const auto ext = poisson_extend(data, s, 1.0, xs);
    std::vector<double> mag;
    for (double v : ext.values) mag.push_back(std::abs(v));
    const double slope = loglog_slope(xs, mag);
    const double expected = -(1.0 + 2.0 * sv);
    const double rel = std::abs(slope / expected - 1.0);
    worst_slope = std::max(worst_slope, rel);
    o.measured["slope_s=" + sci(sv)] = slope;
    os << "slope(s=" << sv << ")=" << sci(slope) << " vs " << sci(expected) << "; ";
  }
  o.fail_if(!(worst_mass <= 1e-6));
  o.fail_if(!(worst_slope <= 0.05));
  o.measured["max_mass_error"] = worst_mass;
  o.detail = "mass err " + sci(worst_mass) + " (<=1e-6); " + os.str() + "max slope dev " +
             sci(worst_slope) + " (<=5%)";
  return o;
}

Outcome linear_oracle() {
  Outcome o;
  const auto basis = build_basis(1.0, 1, 128);
  const FracOrder s(0.5);
  const double T = 0.5;
  const Field u0 = Field::from_function(basis, [](double x) { return bump(x, 0.0, 0.5); });
  std::vector<double> exact(u0.coeffs().begin(), u0.coeffs().end());
  for (int k = 0; k < basis->size(); ++k) exact[k] *= std::exp(-std::pow(basis->eigenvalues()[k], 0.5) * T);
  const Field reference = Field::from_coeffs(basis, exact);
  std::vector<double> errs;
  for (const double tau : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    SolverConfig cfg;
    cfg.tau = tau;
    errs.push_back((evolve(u0, T, cfg, Nonlinearity::linear(), s).final() - reference).l2_norm());
  }
  const double o1 = std::log2(errs[0] / errs[1]);
  const double o2 = std::log2(errs[1] / errs[2]);
  o.fail_if(!(o1 >= 0.9 && o2 >= 0.9));
  o.measured = {{"errors", errs}, {"orders", {o1, o2}}};
  o.detail = "L2 errors " + sci(errs[0]) + ", " + sci(errs[1]) + ", " + sci(errs[2]) + "; orders " +
             sci(o1) + ", " + sci(o2) + " (>=0.9)";
  return o;
}

Outcome comparison_and_bounds() {
  Outcome o;
  const auto basis = build_basis(1.0, 1, 128);
  const FracOrder s(0.5);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::ostringstream os;
  for (const auto& phi : {Nonlinearity::linear(), Nonlinearity::porous_medium(2.0), Nonlinearity::stefan()}) {
    double gap = INFINITY, under = 0.0, over = 0.0;
    for (int pair = 0; pair < 50; ++pair) {
      const double amp = 0.5 + 2.0 * unit(rng);
      const double c1 = -0.4 + 0.8 * unit(rng), w1 = 0.2 + 0.4 * unit(rng);
      const double c2 = -0.4 + 0.8 * unit(rng), w2 = 0.2 + 0.4 * unit(rng);
      const double mix = unit(rng);
      const double freq = 1.0 + 6.0 * unit(rng), phase = 2.0 * M_PI * unit(rng), depth = unit(rng);
      auto upper = [&](double x) { return amp * (mix * bump(x, c1, w1) + (1.0 - mix) * bump(x, c2, w2)); };
      auto ratio = [&](double x) { return 1.0 - depth * 0.5 * (1.0 + std::sin(freq * x + phase)); };
      const Field w0 = Field::from_function(basis, upper);
      const Field u0 = Field::from_function(basis, [&](double x) { return ratio(x) * upper(x); });
      SolverConfig cfg;
      cfg.tau = 1.0 / 32.0;
      const auto rep = compare(u0, w0, 0.25, cfg, phi, s);
      gap = std::min(gap, rep.min_gap);
      for (const auto* traj : {&rep.lower, &rep.upper}) {
        const double bound = traj->initial().max_value();
        for (const auto& f : traj->fields) {
          under = std::max(under, -f.min_value());
          over = std::max(over, f.max_value() - bound);
        }
      }
    }
    o.fail_if(!(gap >= -1e-8 && under <= 1e-10 && over <= 1e-10));
    o.measured[phi.name()] = {{"min_gap", gap}, {"undershoot", under}, {"overshoot", over}};
    os << phi.name() << ": min(w-u) " << sci(gap) << ", below 0 by " << sci(under) << ", above sup by "
       << sci(over) << "; ";
  }
  o.detail = os.str();
  return o;
}

Outcome domain_monotonicity() {
  Outcome o;
  MinimalSetup setup;
  setup.radii = {2.0, 4.0, 8.0};
  setup.truncations = {8.0};
  setup.spacing = 1.0 / 16.0;
  setup.T = 0.5;
  setup.window = 2.0;
  SolverConfig cfg;
  cfg.tau = 1.0 / 32.0;
  const auto rep = minimal_solution([](double x) { return bump(x, 0.0, 1.0); }, setup, cfg,
                                    Nonlinearity::porous_medium(2.0), FracOrder(0.5));
  const auto& d = rep.successive_differences;
  o.fail_if(!(rep.domain_violation <= 1e-8));
  o.fail_if(!(d.size() == 2 && d[1] < d[0]));
  o.measured = {{"domain_violation", rep.domain_violation}, {"successive_differences", d}};
  o.detail = "max(u_R1 - u_R2) on B_R1 = " + sci(rep.domain_violation) + " (<=1e-8); sup diff on B_2: " +
             sci(d[0]) + " (2 vs 4) > " + sci(d[1]) + " (4 vs 8)";
  return o;
}

Outcome cutoff_scaling() {
  Outcome o;
  const FracOrder s(0.5);
  const double p = default_holder_exponent(1, s);
  const double alpha = default_weight_alpha(1, s);
  const auto scan = cutoff_scaling_scan(s, {1.0, 2.0, 4.0, 8.0}, p, alpha);
  const double pprime = p / (p - 1.0);
  const double e_lap = -1.0, e_tp = -p * 0.5, e_q = -(1.0 - 1.0 / pprime);
  const double d_lap = std::abs(scan.lap_slope / e_lap - 1.0);
  const double d_tp = std::abs(scan.tp_slope / e_tp - 1.0);
  const double d_q = std::abs(scan.q_slope / e_q - 1.0);
  o.fail_if(!(d_lap <= 0.15 && d_tp <= 0.15 && d_q <= 0.15));
  o.measured = {{"p", p}, {"alpha", alpha}, {"slopes", {scan.lap_slope, scan.tp_slope, scan.q_slope}},
                {"expected", {e_lap, e_tp, e_q}}};
  o.detail = "slopes " + sci(scan.lap_slope) + " vs " + sci(e_lap) + ", " + sci(scan.tp_slope) + " vs " +
             sci(e_tp) + ", " + sci(scan.q_slope) + " vs " + sci(e_q) + " (within 15%; p=" + sci(p) +
             ", alpha=" + sci(alpha) + ")";
  return o;
}

Outcome duality_suite() {
  Outcome o;
  const auto basis = build_basis(1.0, 1, 128);
  const FracOrder s(0.5);
  const double T = 0.5;
  const Field chi = Field::from_function(basis, [](double x) { return bump(x, 0.1, 0.6); });

  // Identity coefficient: closed form and energy identity refinement.
  std::vector<double> exact(chi.coeffs().begin(), chi.coeffs().end());
  double closed = 0.0;
  std::vector<double> residuals;
  for (const int steps : {1024, 2048}) {
    const auto beta = SmoothedCoefficient::constant(basis, T, 4, 1.0);
    const auto psi = backward_solve(beta, chi, s, steps);
    for (std::size_t i = 0; i < psi.fields.size(); ++i) {
      std::vector<double> c(exact);
      for (int k = 0; k < basis->size(); ++k) {
        c[k] *= std::exp(-std::sqrt(basis->eigenvalues()[k]) * (T - psi.times[i]));
      }
      closed = std::max(closed, (psi.fields[i] - Field::from_coeffs(basis, c)).l2_norm());
    }
    residuals.push_back(energy_identity_check(psi, beta, chi, s).residual);
  }
  const double ratio = residuals[0] / residuals[1];

  // Coefficient from two PME runs at tau and tau/2.
  const Field u0 = Field::from_function(basis, [](double x) { return 1.5 * bump(x, -0.1, 0.5); });
  const auto phi = Nonlinearity::porous_medium(2.0);
  SolverConfig coarse;
  coarse.tau = 1.0 / 32.0;
  SolverConfig fine = coarse;
  fine.tau = 1.0 / 64.0;
  const auto u = evolve(u0, T, coarse, phi, s);
  const auto w = evolve(u0, T, fine, phi, s);
  const auto wit = uniqueness_witness(u, w, chi, 16, 8, phi, s, 1024);

  o.fail_if(!(wit.psi_min >= -1e-8 && wit.psi_max <= 1.0 + 1e-8));
  o.fail_if(!(ratio >= 1.8 && ratio <= 2.2));
  o.fail_if(!(closed <= 1e-8));
  o.fail_if(!(std::abs(wit.witness) <= wit.bound + 1e-6));
  o.measured = {{"psi_range", {wit.psi_min, wit.psi_max}},
                {"energy_residuals", residuals},
                {"closed_form_error", closed},
                {"witness", wit.witness},
                {"bound", wit.bound}};
  o.detail = "psi in [" + sci(wit.psi_min) + ", " + sci(wit.psi_max) + "]; energy residual " +
             sci(residuals[0]) + " -> " + sci(residuals[1]) + " (ratio " + sci(ratio) +
             "); closed form " + sci(closed) + " (<=1e-8); |witness| " + sci(std::abs(wit.witness)) +
             " <= bound " + sci(wit.bound);
  return o;
}

Outcome translation_trick() {
  Outcome o;
  const auto basis = build_basis(1.0, 1, 128);
  const FracOrder s(0.5);
  const auto phi = Nonlinearity::porous_medium(3.0);
  const Field u0 = Field::from_function(basis, [](double x) { return std::sin(M_PI * (x + 1.0)); });
  const auto red = shift_reduce(u0, phi);
  SolverConfig cfg;
  cfg.tau = 1.0 / 32.0;
  cfg.eps = 0.0;
  const auto direct = evolve(u0, 0.5, cfg, phi.minus_constant(phi.phi(red.c)), s);
  const auto shifted = unshift(evolve(red.data, 0.5, cfg, red.phi, s), red.c);
  double diff = 0.0;
  for (std::size_t i = 0; i < direct.fields.size(); ++i) {
    const auto a = direct.fields[i].values();
    const auto b = shifted.fields[i].values();
    for (std::size_t j = 0; j < a.size(); ++j) diff = std::max(diff, std::abs(a[j] - b[j]));
  }
  o.fail_if(!(diff <= 1e-8));
  o.fail_if(!(std::abs(red.phi.phi(0.0)) == 0.0 && red.data.min_value() >= 0.0));
  o.measured = {{"c", red.c}, {"max_difference", diff}};
  o.detail = "c = " + sci(red.c) + ", max |direct - shifted| = " + sci(diff) + " (<=1e-8)";
  return o;
}

struct Entry {
  int id;
  const char* title;
  double budget;
  Outcome (*run)();
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table{
      {1, "Bessel layer", 1.0, bessel_layer},
      {2, "Extension closed form", 1.0, extension_closed_form},
      {3, "Dirichlet-to-Neumann limit", 5.0, dirichlet_to_neumann},
      {4, "Weighted energy identity", 10.0, energy_identity},
      {5, "Poisson kernel", 10.0, poisson_kernel_check},
      {6, "Linear evolution oracle", 30.0, linear_oracle},
      {7, "L-infinity bound and comparison", 180.0, comparison_and_bounds},
      {8, "Domain monotonicity", 120.0, domain_monotonicity},
      {9, "Cut-off scaling", 120.0, cutoff_scaling},
      {10, "Duality suite", 120.0, duality_suite},
      {11, "Translation trick", 60.0, translation_trick},
  };
  return table;
}

}  // namespace

std::vector<int> criterion_ids() {
  std::vector<int> ids;
  for (const auto& e : entries()) ids.push_back(e.id);
  return ids;
}

CriterionResult run_criterion(int id) {
  const auto& table = entries();
  const auto it = std::find_if(table.begin(), table.end(), [id](const Entry& e) { return e.id == id; });
  if (it == table.end()) throw DomainError("run_criterion: unknown criterion " + std::to_string(id));
  CriterionResult r;
  r.id = id;
  r.title = it->title;
  r.budget = it->budget;
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = it->run();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.checks_pass = o.ok;
  r.pass = o.ok && r.seconds < r.budget;
  r.detail = o.detail;
  r.measured = o.measured;
  return r;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  char timing[64];
  std::snprintf(timing, sizeof(timing), "(%.2f s / %.0f s)", r.seconds, r.budget);
  os << (r.pass ? "PASS" : "FAIL") << "  " << r.id << "  " << r.title << "  " << timing << "  ";
  if (r.checks_pass && !r.pass) os << "[over time budget] ";
  os << r.detail;
  return os.str();
}

}  // namespace fracfilt
