#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ncshock/sweep.hpp"

namespace ncshock {

/// Everything one experiment needs, read from a flat JSON object whose keys
/// follow the usual symbols:
///   model, pressure (vdw_rt | vdw_zeta | piecewise_linear), R, T, zeta,
///   eps | c (eps = c h), alpha, delta | eta (delta = eta h),
///   u_L (u_minus), u_R (u_plus), tau_L, tau_R,
///   x_min, x_max, n, profile, x0, width, x1, x2, middle, boundary,
///   q, orders, scheme, cfl, dt, t_end, max_steps,
///   tol_plateau, min_width, tol_speed, min_jump,
///   parameter, values | (from, to, count), workers,
///   output, dump, require_pair.
struct ExperimentConfig {
  RiemannProblem problem;
  int q = 6;
  std::vector<int> orders;
  std::string scheme = "rk4";
  RunConfig run;
  ClassifyOptions classify;
  std::string parameter;
  std::vector<double> values;
  unsigned workers = 0;
  std::string output;
  std::string dump;
  bool require_pair = false;

  SweepConfig sweep() const;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
ExperimentConfig parse_config(const nlohmann::json& j);

/// Reads a JSON file; an empty path yields an empty object.
nlohmann::json load_json(const std::string& path);

/// Applies "--key=value" arguments: numbers become numbers, true/false
/// booleans, comma lists arrays of numbers, anything else a string.
void apply_overrides(nlohmann::json& j, const std::vector<std::string>& args);

}  // namespace ncshock
