#include "fracfilt/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "fracfilt/errors.hpp"
#include "fracfilt/singular.hpp"

namespace fracfilt {

using nlohmann::json;

namespace {

template <class T>
void read(const json& j, const char* key, T& out, const std::string& prefix = "") {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(prefix + key, std::string("wrong type: ") + e.what());
  }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& prefix) {
  if (!j.is_object()) throw ConfigError(prefix.empty() ? "config" : prefix, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError(prefix + key, "unknown field");
  }
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

bool increasing(const std::vector<double>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i + 1] > v[i])) return false;
  }
  return true;
}

}  // namespace

Nonlinearity NonlinearitySpec::build() const {
  if (name == "linear") return Nonlinearity::linear();
  if (name == "pme") return Nonlinearity::porous_medium(m);
  if (name == "stefan") return Nonlinearity::stefan();
  if (name == "table") return Nonlinearity::table(u, phi);
  throw ConfigError("nonlinearity.name", "unknown nonlinearity '" + name + "'");
}

std::function<double(double)> InitialSpec::build(double radius) const {
  const double a = amplitude, c = center, w = width;
  if (shape == "bump") {
    return [a, c, w](double x) {
      const double z = (x - c) / w;
      return std::abs(z) < 1.0 ? a * std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0;
    };
  }
  if (shape == "plateau") {
    const CutoffGamma g(w);
    return [a, c, g](double x) { return a * g(x - c); };
  }
  if (shape == "step") {
    return [a, c, w](double x) { return std::abs(x - c) < w ? a : 0.0; };
  }
  if (shape == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> coef(modes);
    for (int k = 0; k < modes; ++k) coef[k] = dist(rng) / (k + 1);
    auto raw = [coef, radius](double x) {
      double v = 0.0;
      for (std::size_t k = 0; k < coef.size(); ++k) {
        v += coef[k] * std::sin((k + 1) * M_PI * (x + radius) / (2.0 * radius));
      }
      return v;
    };
    double peak = 0.0;
    for (int i = 0; i <= 1000; ++i) peak = std::max(peak, std::abs(raw(-radius + 2.0 * radius * i / 1000)));
    const double scale = peak > 0.0 ? a / peak : 0.0;
    return [raw, scale](double x) { return scale * raw(x); };
  }
  throw ConfigError("u0.shape", "unknown shape '" + shape + "'");
}

SolverConfig RunConfig::solver() const {
  SolverConfig c;
  c.tau = tau;
  c.eps = eps;
  c.newton_tol = newton_tol;
  c.cg_tol = cg_tol;
  return c;
}

void validate(const RunConfig& c) {
  require(c.s > 0.0 && c.s < 1.0, "s", "must lie in (0, 1)");
  require(c.d == 1, "d", "only d = 1 is implemented");
  require(c.R >= 1.0 && std::isfinite(c.R), "R", "must be at least 1");
  require(c.N >= 2 && c.N <= (1 << 16), "N", "must lie in [2, 65536]");
  const auto& nl = c.nonlinearity;
  require(nl.name == "linear" || nl.name == "pme" || nl.name == "stefan" || nl.name == "table",
          "nonlinearity.name", "must be linear, pme, stefan or table");
  if (nl.name == "pme") require(nl.m >= 1.0 && std::isfinite(nl.m), "nonlinearity.m", "must be at least 1");
  if (nl.name == "table") {
    require(nl.u.size() == nl.phi.size() && nl.u.size() >= 2, "nonlinearity.u",
            "u and phi need equal length, at least 2");
    require(increasing(nl.u), "nonlinearity.u", "must be strictly increasing");
    for (std::size_t i = 0; i + 1 < nl.phi.size(); ++i) {
      require(nl.phi[i + 1] >= nl.phi[i], "nonlinearity.phi", "must be nondecreasing");
    }
  }
  const auto& u0 = c.u0;
  require(u0.shape == "bump" || u0.shape == "plateau" || u0.shape == "step" || u0.shape == "random",
          "u0.shape", "must be bump, plateau, step or random");
  require(std::isfinite(u0.amplitude), "u0.amplitude", "must be finite");
  require(u0.width > 0.0, "u0.width", "must be positive");
  require(std::abs(u0.center) < c.R, "u0.center", "must lie inside B_R");
  require(u0.modes >= 1, "u0.modes", "must be at least 1");
  require(c.tau > 0.0, "tau", "must be positive");
  require(c.T >= 0.0 && std::isfinite(c.T), "T", "must be nonnegative");
  require(std::isfinite(c.eps), "eps", "must be finite");
  require(c.newton_tol > 0.0, "tolerances.newton", "must be positive");
  require(c.cg_tol > 0.0, "tolerances.cg", "must be positive");
  require(c.comparison_tol >= 0.0, "tolerances.comparison", "must be nonnegative");
  require(!c.radii.empty() && increasing(c.radii) && c.radii.front() >= 1.0, "radii",
          "must be increasing and at least 1");
  require(increasing(c.truncations), "truncations", "must be increasing");
  for (double k : c.truncations) require(k > 0.0, "truncations", "must be positive");
  require(c.spacing >= 0.0, "spacing", "must be nonnegative");
  if (c.spacing > 0.0) {
    for (double R : c.radii) {
      const double ratio = 2.0 * R / c.spacing;
      require(std::abs(ratio - std::round(ratio)) < 1e-9 && ratio >= 2.0, "spacing",
              "2R/spacing must be an integer for every radius");
    }
  }
  require(!c.y.empty(), "y", "needs at least one height");
  for (double y : c.y) require(y > 0.0, "y", "heights must be positive");
  require(c.r > 0.0, "r", "must be positive");
  require(c.k >= 1, "k", "must be at least 1");
  require(c.n >= 1, "n", "must be at least 1");
  require(c.inner_steps >= 1, "inner_steps", "must be at least 1");
  require(c.pairs >= 0, "pairs", "must be nonnegative");
  if (c.p != 0.0) {
    try {
      check_holder_exponent(c.d, FracOrder(c.s), c.p);
    } catch (const ConfigError& e) {
      throw ConfigError("p", e.what());
    }
  }
  if (c.alpha != 0.0) {
    require(c.alpha > c.d && c.alpha < c.d + 2.0 * c.s, "alpha", "must lie in (d, d + 2s)");
  }
}

RunConfig parse_config(const json& j) {
  reject_unknown(j,
                 {"s", "d", "R", "N", "nonlinearity", "u0", "tau", "T", "eps", "tolerances", "output",
                  "radii", "truncations", "spacing", "y", "r", "k", "n", "inner_steps", "pairs", "p",
                  "alpha"},
                 "");
  RunConfig c;
  read(j, "s", c.s);
  read(j, "d", c.d);
  read(j, "R", c.R);
  read(j, "N", c.N);
  if (j.contains("nonlinearity")) {
    const auto& nl = j.at("nonlinearity");
    reject_unknown(nl, {"name", "m", "u", "phi"}, "nonlinearity.");
    read(nl, "name", c.nonlinearity.name, "nonlinearity.");
    read(nl, "m", c.nonlinearity.m, "nonlinearity.");
    read(nl, "u", c.nonlinearity.u, "nonlinearity.");
    read(nl, "phi", c.nonlinearity.phi, "nonlinearity.");
  }
  if (j.contains("u0")) {
    const auto& u = j.at("u0");
    reject_unknown(u, {"shape", "amplitude", "center", "width", "modes", "seed"}, "u0.");
    read(u, "shape", c.u0.shape, "u0.");
    read(u, "amplitude", c.u0.amplitude, "u0.");
    read(u, "center", c.u0.center, "u0.");
    read(u, "width", c.u0.width, "u0.");
    read(u, "modes", c.u0.modes, "u0.");
    read(u, "seed", c.u0.seed, "u0.");
  }
  read(j, "tau", c.tau);
  read(j, "T", c.T);
  read(j, "eps", c.eps);
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    reject_unknown(t, {"newton", "cg", "comparison"}, "tolerances.");
    read(t, "newton", c.newton_tol, "tolerances.");
    read(t, "cg", c.cg_tol, "tolerances.");
    read(t, "comparison", c.comparison_tol, "tolerances.");
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    reject_unknown(o, {"dir"}, "output.");
    read(o, "dir", c.out_dir, "output.");
  }
  read(j, "radii", c.radii);
  read(j, "truncations", c.truncations);
  read(j, "spacing", c.spacing);
  read(j, "y", c.y);
  read(j, "r", c.r);
  read(j, "k", c.k);
  read(j, "n", c.n);
  read(j, "inner_steps", c.inner_steps);
  read(j, "pairs", c.pairs);
  read(j, "p", c.p);
  read(j, "alpha", c.alpha);
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json nl = {{"name", c.nonlinearity.name}, {"m", c.nonlinearity.m}};
  if (!c.nonlinearity.u.empty()) {
    nl["u"] = c.nonlinearity.u;
    nl["phi"] = c.nonlinearity.phi;
  }
  return {
      {"s", c.s},
      {"d", c.d},
      {"R", c.R},
      {"N", c.N},
      {"nonlinearity", nl},
      {"u0",
       {{"shape", c.u0.shape},
        {"amplitude", c.u0.amplitude},
        {"center", c.u0.center},
        {"width", c.u0.width},
        {"modes", c.u0.modes},
        {"seed", c.u0.seed}}},
      {"tau", c.tau},
      {"T", c.T},
      {"eps", c.eps},
      {"tolerances", {{"newton", c.newton_tol}, {"cg", c.cg_tol}, {"comparison", c.comparison_tol}}},
      {"output", {{"dir", c.out_dir}}},
      {"radii", c.radii},
      {"truncations", c.truncations},
      {"spacing", c.spacing},
      {"y", c.y},
      {"r", c.r},
      {"k", c.k},
      {"n", c.n},
      {"inner_steps", c.inner_steps},
      {"pairs", c.pairs},
      {"p", c.p},
      {"alpha", c.alpha},
  };
}

}  // namespace fracfilt
