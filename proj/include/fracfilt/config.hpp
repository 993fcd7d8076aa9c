#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracfilt/evolve.hpp"
#include "fracfilt/nonlinearity.hpp"

namespace fracfilt {

struct NonlinearitySpec {
  /// linear, pme, stefan or table.
  std::string name = "linear";
  double m = 2.0;
  std::vector<double> u;
  std::vector<double> phi;

  Nonlinearity build() const;
};

struct InitialSpec {
  /// bump, plateau, step or random.
  std::string shape = "bump";
  double amplitude = 1.0;
  double center = 0.0;
  double width = 0.5;
  /// Number of sine modes of the random shape.
  int modes = 8;
  std::uint64_t seed = 42;

  /// The datum as a function on [-R, R].
  std::function<double(double)> build(double radius) const;
};

struct RunConfig {
  double s = 0.5;
  int d = 1;
  double R = 1.0;
  int N = 128;
  NonlinearitySpec nonlinearity;
  InitialSpec u0;
  double tau = 1.0 / 64.0;
  double T = 0.5;
  /// Negative selects the automatic regularization.
  double eps = -1.0;
  double newton_tol = 1e-12;
  double cg_tol = 1e-14;
  double comparison_tol = 1e-8;
  std::string out_dir = ".";

  std::vector<double> radii{1.0, 2.0, 4.0, 8.0};
  std::vector<double> truncations;
  /// Grid spacing of the nested solves; 0 means 2R_min/(N+1) rounded to a power of 2.
  double spacing = 0.0;
  std::vector<double> y{1e-1, 1e-2, 1e-3, 1e-4};
  /// Half-disc radius of the local energy check.
  double r = 0.4;
  int k = 16;
  int n = 8;
  int inner_steps = 1024;
  int pairs = 50;
  /// 0 selects the default Hoelder exponent / weight decay.
  double p = 0.0;
  double alpha = 0.0;

  SolverConfig solver() const;
};

/// Parses and validates; unknown keys and out-of-range values raise
/// ConfigError naming the offending field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& c);
void validate(const RunConfig& c);

}  // namespace fracfilt
