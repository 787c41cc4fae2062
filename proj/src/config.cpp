#include "ncshock/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "ncshock/errors.hpp"

namespace ncshock {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "model", "pressure", "R", "T", "zeta", "eps", "c", "alpha", "delta", "eta",
      "u_L", "u_minus", "u_R", "u_plus", "tau_L", "tau_R", "x_min", "x_max", "n",
      "profile", "x0", "width", "x1", "x2", "middle", "boundary", "q", "orders",
      "scheme", "cfl", "dt", "t_end", "max_steps", "tol_plateau", "min_width",
      "tol_speed", "min_jump", "parameter", "values", "from", "to", "count", "workers",
      "output", "dump", "require_pair"};
  return keys;
}

double number(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

std::string text(const nlohmann::json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string("config key '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const nlohmann::json& v, const char* key) {
  std::vector<double> out;
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError(std::string("config key '") + key + "' must be a list");
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(std::string("config key '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

int integer(double v, const char* key) {
  if (v != static_cast<double>(static_cast<long long>(v)))
    throw ConfigError(std::string("config key '") + key + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace

SweepConfig ExperimentConfig::sweep() const {
  SweepConfig s;
  s.parameter = parameter.empty() ? "u_L" : parameter;
  s.values = values;
  s.orders = orders.empty() ? std::vector<int>{q} : orders;
  s.base = problem;
  s.run = run;
  s.scheme = scheme;
  s.classify = classify;
  s.workers = workers;
  return s;
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!known_keys().count(k)) throw ConfigError("unknown config key '" + k + "'");

  ExperimentConfig c;
  auto& p = c.problem;
  auto& m = p.model;
  m.kind = model_kind_from_string(text(j, "model", "cubic"));

  const std::string pressure = text(j, "pressure", "vdw_rt");
  if (pressure == "vdw_rt") m.pressure = PressureLaw::vdw_rt(number(j, "R", 8.0 / 3.0), number(j, "T", 1.005));
  else if (pressure == "vdw_zeta") m.pressure = PressureLaw::vdw_zeta(number(j, "zeta", 1.0));
  else if (pressure == "piecewise_linear") m.pressure = PressureLaw::piecewise_linear();
  else throw ConfigError("unknown pressure law '" + pressure + "'");

  const double n = number(j, "n", 1000);
  if (n < 1 || n != static_cast<double>(static_cast<std::size_t>(n)))
    throw ConfigError("config key 'n' must be a positive integer");
  p.grid = Grid1D(number(j, "x_min", 0.0), number(j, "x_max", 999.0), static_cast<std::size_t>(n));
  const double h = p.grid.h();

  m.alpha = number(j, "alpha", 0.0);
  m.eps = j.contains("c") ? number(j, "c", 0.0) * h : number(j, "eps", 0.0);
  m.delta = j.contains("eta") ? number(j, "eta", 0.0) * h : number(j, "delta", 0.1);
  if (j.contains("c") && j.contains("eps")) throw ConfigError("give either 'eps' or 'c', not both");
  if (j.contains("eta") && j.contains("delta")) throw ConfigError("give either 'delta' or 'eta', not both");

  p.u_left = number(j, "u_minus", number(j, "u_L", 0.0));
  p.u_right = number(j, "u_plus", number(j, "u_R", 0.0));
  p.tau_left = number(j, "tau_L", 1.0);
  p.tau_right = number(j, "tau_R", 1.0);
  p.profile = profile_from_string(text(j, "profile", "tanh_single"));
  // The classic setup puts the jump at x = 100 on the default 1000-node
  // grid; custom grids default to their midpoint.
  const bool default_grid = !j.contains("x_min") && !j.contains("x_max") && !j.contains("n");
  p.x0 = number(j, "x0", default_grid ? 100.0 : 0.5 * (p.grid.x_min() + p.grid.x_max()));
  p.width = number(j, "width", 1.0);
  p.x1 = number(j, "x1", 80.0);
  p.x2 = number(j, "x2", 130.0);
  p.middle = number(j, "middle", 0.35);
  const std::string boundary = text(j, "boundary", "constant");
  if (boundary == "constant") p.boundary = BoundaryTreatment::constant();
  else if (boundary == "periodic") p.boundary = BoundaryTreatment::periodic();
  else throw ConfigError("unknown boundary '" + boundary + "' (expected constant or periodic)");

  switch (m.kind) {
    case ModelKind::cubic: validate(CubicModel{m.eps, m.alpha}); break;
    case ModelKind::thin_film: validate(ThinFilmModel{m.delta}); break;
    case ModelKind::camassa_holm: validate(CamassaHolmModel{m.eps, m.alpha}); break;
    case ModelKind::psystem: validate(PSystemModel{m.pressure, m.eps, m.alpha}); break;
  }

  c.q = integer(number(j, "q", 6), "q");
  if (!is_supported_order(c.q)) throw ConfigError("unsupported order q=" + std::to_string(c.q));
  if (j.contains("orders"))
    for (double q : numbers(j.at("orders"), "orders")) c.orders.push_back(integer(q, "orders"));
  c.scheme = text(j, "scheme", "rk4");
  (void)builtin_tableau(c.scheme);

  c.run.cfl = number(j, "cfl", 0.5);
  c.run.t_end = number(j, "t_end", 0.0);
  if (j.contains("dt")) c.run.dt_override = number(j, "dt", 0.0);
  if (j.contains("max_steps"))
    c.run.max_steps = static_cast<std::size_t>(integer(number(j, "max_steps", 0), "max_steps"));
  RunConfig check = c.run;
  if (!(check.t_end > 0.0)) check.t_end = 1.0;
  validate(check);

  c.classify.tol_plateau = number(j, "tol_plateau", -1.0);
  c.classify.min_width = static_cast<std::size_t>(integer(number(j, "min_width", 10), "min_width"));
  c.classify.tol_speed = number(j, "tol_speed", -1.0);
  c.classify.min_jump = number(j, "min_jump", 0.005);
  if (!(c.classify.min_jump >= 0.0 && c.classify.min_jump < 1.0))
    throw ConfigError("config key 'min_jump' must lie in [0, 1)");

  c.parameter = text(j, "parameter", "");
  if (j.contains("values")) {
    c.values = numbers(j.at("values"), "values");
  } else if (j.contains("from") || j.contains("to") || j.contains("count")) {
    const double from = number(j, "from", 0.0), to = number(j, "to", 0.0);
    const int count = integer(number(j, "count", 2), "count");
    if (count < 1) throw ConfigError("config key 'count' must be at least 1");
    for (int k = 0; k < count; ++k)
      c.values.push_back(count == 1 ? from : from + (to - from) * k / (count - 1));
  }
  c.workers = static_cast<unsigned>(integer(number(j, "workers", 0), "workers"));
  c.output = text(j, "output", "");
  c.dump = text(j, "dump", "");
  if (j.contains("require_pair")) {
    if (!j.at("require_pair").is_boolean()) throw ConfigError("config key 'require_pair' must be true or false");
    c.require_pair = j.at("require_pair").get<bool>();
  }
  return c;
}

nlohmann::json load_json(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

void apply_overrides(nlohmann::json& j, const std::vector<std::string>& args) {
  const auto as_number = [](const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return !s.empty() && end == s.c_str() + s.size();
  };
  for (const auto& a : args) {
    const auto eq = a.find('=');
    if (a.rfind("--", 0) != 0 || eq == std::string::npos || eq == 2)
      throw ConfigError("expected --key=value, got '" + a + "'");
    const std::string key = a.substr(2, eq - 2), value = a.substr(eq + 1);
    double num = 0.0;
    if (value == "true" || value == "false") {
      j[key] = value == "true";
    } else if (as_number(value, num)) {
      j[key] = num;
    } else if (value.find(',') != std::string::npos) {
      auto arr = nlohmann::json::array();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!as_number(item, num)) throw ConfigError("'" + key + "': '" + item + "' is not a number");
        arr.push_back(num);
      }
      j[key] = arr;
    } else {
      j[key] = value;
    }
  }
}

}  // namespace ncshock
