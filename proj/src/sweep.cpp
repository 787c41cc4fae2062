#include "ncshock/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "ncshock/errors.hpp"

namespace ncshock {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double tanh_step(double x, double centre, double w, double left, double right) {
  return right + (left - right) * 0.5 * (std::tanh(-(x - centre) / w) + 1.0);
}

double profile_value(const RiemannProblem& p, double x, double left, double right,
                     double middle) {
  if (p.profile == Profile::tanh_single) return tanh_step(x, p.x0, p.width, left, right);
  const double split = 0.5 * (p.x1 + p.x2);
  if (x <= split) return tanh_step(x, p.x1, p.width, left, middle);
  return tanh_step(x, p.x2, p.width, middle, right);
}

void fill_component(std::span<double> out, const RiemannProblem& p, double left,
                    double right, double middle, const char* name) {
  const auto& g = p.grid;
  for (std::size_t i = 0; i < g.n(); ++i)
    out[i] = profile_value(p, g.x(i), left, right, middle);
  if (std::abs(out.front() - left) > 1e-10 || std::abs(out.back() - right) > 1e-10)
    throw ConfigError(std::string("domain too narrow: the ") + name +
                      " profile does not reach its far-field states to 1e-10");
}

bool same(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

bool same(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || same(*a, *b);
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan") return kNaN;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ConfigError("malformed number '" + s + "' in kinetic table");
  return v;
}

}  // namespace

const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::cubic: return "cubic";
    case ModelKind::thin_film: return "thin_film";
    case ModelKind::camassa_holm: return "camassa_holm";
    case ModelKind::psystem: return "psystem";
  }
  return "cubic";
}

ModelKind model_kind_from_string(const std::string& s) {
  for (auto k : {ModelKind::cubic, ModelKind::thin_film, ModelKind::camassa_holm,
                 ModelKind::psystem})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown model '" + s +
                    "' (expected cubic, thin_film, camassa_holm or psystem)");
}

FluxFn flux_for(ModelKind k) {
  if (k == ModelKind::psystem) throw ConfigError("the p-system has no scalar flux");
  return FluxFn{k == ModelKind::thin_film ? FluxKind::thin_film : FluxKind::cubic};
}

std::unique_ptr<SemiDiscreteSystem> make_system(const ModelSpec& m,
                                                const Discretization& disc,
                                                std::shared_ptr<HelmholtzSolver> solver) {
  switch (m.kind) {
    case ModelKind::cubic:
      return std::make_unique<CubicSystem>(CubicModel{m.eps, m.alpha}, disc);
    case ModelKind::thin_film:
      return std::make_unique<ThinFilmSystem>(ThinFilmModel{m.delta}, disc);
    case ModelKind::camassa_holm:
      return std::make_unique<CamassaHolmSystem>(CamassaHolmModel{m.eps, m.alpha},
                                                 disc, std::move(solver));
    case ModelKind::psystem:
      return std::make_unique<PSystem>(PSystemModel{m.pressure, m.eps, m.alpha}, disc);
  }
  throw ConfigError("unknown model");
}

const char* to_string(Profile p) {
  return p == Profile::tanh_single ? "tanh_single" : "tanh_double";
}

Profile profile_from_string(const std::string& s) {
  if (s == "tanh_single" || s == "ini1") return Profile::tanh_single;
  if (s == "tanh_double" || s == "ini2") return Profile::tanh_double;
  throw ConfigError("unknown profile '" + s + "' (expected tanh_single or tanh_double)");
}

StateField build_initial_data(const RiemannProblem& p) {
  if (!(p.width > 0.0)) throw ConfigError("profile width must be positive");
  if (p.profile == Profile::tanh_double && !(p.x1 < p.x2))
    throw ConfigError("tanh_double needs x1 < x2");
  const std::size_t n = p.grid.n();
  if (p.model.kind == ModelKind::psystem) {
    StateField s(n, 2);
    fill_component(s.component(0), p, p.tau_left, p.tau_right,
                   0.5 * (p.tau_left + p.tau_right), "tau");
    fill_component(s.component(1), p, p.u_left, p.u_right,
                   0.5 * (p.u_left + p.u_right), "u");
    return s;
  }
  StateField s(n, 1);
  fill_component(s.component(0), p, p.u_left, p.u_right, p.middle, "u");
  return s;
}

SpeedRange characteristic_speeds(const RiemannProblem& p) {
  SpeedRange r{0.0, 0.0};
  const auto sample = [&](double lo, double hi, auto&& f) {
    for (int k = 0; k <= 400; ++k) {
      const double v = f(lo + (hi - lo) * k / 400.0);
      if (!std::isfinite(v)) continue;
      r.slowest = std::min(r.slowest, v);
      r.fastest = std::max(r.fastest, v);
    }
  };
  if (p.model.kind == ModelKind::psystem) {
    const auto& law = p.model.pressure;
    const double lo = std::min(p.tau_left, p.tau_right);
    const double hi = std::max(p.tau_left, p.tau_right);
    sample(lo, hi, [&](double t) { return law.in_domain(t) ? law.sound_speed(t) : kNaN; });
    r.slowest = -r.fastest;  // two families, +-c
    return r;
  }
  double lo = std::min(p.u_left, p.u_right), hi = std::max(p.u_left, p.u_right);
  if (p.profile == Profile::tanh_double) {
    lo = std::min(lo, p.middle);
    hi = std::max(hi, p.middle);
  }
  const FluxFn f = flux_for(p.model.kind);
  if (f.kind == FluxKind::cubic) {
    // Nonclassical middle states satisfy |u_m| <= |u_-|.
    const double m = std::max(std::abs(lo), std::abs(hi));
    lo = -m;
    hi = m;
  } else {
    lo = std::max(0.0, std::min(lo, 1.0 / 3.0));
    hi = std::max({hi, 2.0 / 3.0 - lo, 1.0 / 3.0});
  }
  sample(lo, hi, [&](double u) { return f.derivative(u); });
  return r;
}

double max_wave_speed(const RiemannProblem& p) {
  const auto r = characteristic_speeds(p);
  return std::max({-r.slowest, r.fastest, 1e-12});
}

double default_t_end(const RiemannProblem& p) {
  const auto& g = p.grid;
  const double left = p.profile == Profile::tanh_single ? p.x0 : p.x1;
  const double right = p.profile == Profile::tanh_single ? p.x0 : p.x2;
  const double dl = left - g.x_min(), dr = g.x_max() - right;
  if (!(dl > 0.0) || !(dr > 0.0)) throw ConfigError("the initial jump lies outside the domain");
  const auto r = characteristic_speeds(p);
  double t = std::numeric_limits<double>::infinity();
  if (r.slowest < 0.0) t = std::min(t, dl / -r.slowest);
  if (r.fastest > 0.0) t = std::min(t, dr / r.fastest);
  if (!std::isfinite(t)) t = std::min(dl, dr) / 1e-12;
  return 0.8 * t;
}

bool KineticSample::operator==(const KineticSample& o) const {
  return model == o.model && profile_id == o.profile_id && q == o.q &&
         same(alpha, o.alpha) && same(eps, o.eps) && same(h, o.h) && same(c, o.c) &&
         same(u_minus, o.u_minus) && same(u_plus, o.u_plus) && same(speed, o.speed) &&
         same(dissipation, o.dissipation) && same(exact_u_plus, o.exact_u_plus) &&
         same(abs_error, o.abs_error) && structure == o.structure &&
         same(t_end, o.t_end) && status == o.status;
}

RunResult run_single(const RiemannProblem& problem, int q, const ButcherTableau& tab,
                     RunConfig cfg, const ClassifyOptions& classify,
                     std::shared_ptr<HelmholtzSolver> solver) {
  const Discretization disc{problem.grid, q, problem.boundary};
  const auto system = make_system(problem.model, disc, std::move(solver));
  const StateField initial = build_initial_data(problem);
  if (!(cfg.t_end > 0.0)) cfg.t_end = default_t_end(problem);
  if (cfg.output_times.empty())
    for (double f : {0.5, 0.7, 0.9, 0.98, 1.0}) cfg.output_times.push_back(f * cfg.t_end);

  RunResult res;
  auto& s = res.sample;
  const auto& m = problem.model;
  const double h = problem.grid.h();
  s.model = to_string(m.kind);
  s.profile_id = to_string(problem.profile);
  s.q = q;
  if (m.kind == ModelKind::thin_film) {
    s.alpha = kNaN;
    s.eps = m.delta;
  } else {
    s.alpha = m.alpha;
    s.eps = m.eps;
  }
  s.h = h;
  s.c = s.eps / h;
  s.t_end = cfg.t_end;
  s.u_minus = s.u_plus = s.speed = s.dissipation = kNaN;

  try {
    res.trajectory = integrate(*system, initial, tab, cfg);
  } catch (const RunAborted& e) {
    res.failure = e.kind();
    res.failure_reason = e.what();
    res.trajectory = e.partial();
    res.report.diagnostics = e.what();
    s.structure = to_string(Structure::unresolved);
    s.status = e.kind() == FailureKind::blowup   ? "blowup"
               : e.kind() == FailureKind::domain ? "domain"
                                                 : "linear_solve";
    return res;
  }

  const auto& snaps = res.trajectory.snapshots;
  if (m.kind == ModelKind::psystem) {
    res.report = classify_psystem(snaps, problem.grid, m.pressure, problem.tau_left,
                                  problem.u_left, problem.tau_right, problem.u_right,
                                  classify);
  } else {
    res.report = classify_scalar(snaps, problem.grid, flux_for(m.kind), problem.u_left,
                                 problem.u_right, classify);
  }
  const auto& rep = res.report;
  s.structure = to_string(rep.structure);
  s.status = rep.structure == Structure::unresolved ? "unresolved" : "ok";
  if (rep.kinetic_pair) {
    s.u_minus = rep.kinetic_pair->first;
    s.u_plus = rep.kinetic_pair->second;
    // Scalar rows carry the Rankine-Hugoniot speed of the pair, so that speed
    // and dissipation describe the same jump; the tracked speed is in the report.
    if (m.kind == ModelKind::psystem)
      s.speed = rep.nonclassical_speed().value_or(kNaN);
    else
      s.speed = shock_speed_rh(s.u_minus, s.u_plus, flux_for(m.kind));
    s.dissipation = rep.dissipation.value_or(kNaN);
    if (m.kind == ModelKind::cubic && m.alpha > 0.0) {
      s.exact_u_plus = exact_kinetic_cubic(s.u_minus, m.alpha);
      s.abs_error = std::abs(s.u_plus - *s.exact_u_plus);
    }
  }
  return res;
}

void validate(const SweepConfig& cfg) {
  if (cfg.values.empty()) throw ConfigError("sweep: no values given");
  if (cfg.orders.empty()) throw ConfigError("sweep: no scheme orders given");
  const bool up = cfg.values.size() < 2 || cfg.values[1] > cfg.values[0];
  for (std::size_t i = 1; i < cfg.values.size(); ++i)
    if (up ? !(cfg.values[i] > cfg.values[i - 1]) : !(cfg.values[i] < cfg.values[i - 1]))
      throw ConfigError("sweep: values must be strictly monotone");
  for (int q : cfg.orders)
    if (!is_supported_order(q)) throw ConfigError("sweep: unsupported order " + std::to_string(q));
  (void)with_parameter(cfg.base, cfg.parameter, cfg.values.front());
}

RiemannProblem with_parameter(const RiemannProblem& base, const std::string& name,
                              double value) {
  RiemannProblem p = base;
  const double h = p.grid.h();
  if (name == "u_L" || name == "u_minus") p.u_left = value;
  else if (name == "u_R" || name == "u_plus") p.u_right = value;
  else if (name == "tau_L") p.tau_left = value;
  else if (name == "tau_R") p.tau_right = value;
  else if (name == "alpha") p.model.alpha = value;
  else if (name == "eps") p.model.eps = value;
  else if (name == "c") p.model.eps = value * h;
  else if (name == "delta") p.model.delta = value;
  else if (name == "eta") p.model.delta = value * h;
  else
    throw ConfigError("sweep: unknown parameter '" + name +
                      "' (expected u_L, u_R, tau_L, tau_R, alpha, eps, c, delta or eta)");
  return p;
}

SweepResult sweep_kinetic(const SweepConfig& cfg) {
  validate(cfg);
  const ButcherTableau tab = builtin_tableau(cfg.scheme);

  std::vector<std::size_t> order(cfg.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return cfg.values[a] < cfg.values[b]; });
  std::vector<int> orders = cfg.orders;
  std::sort(orders.begin(), orders.end());

  struct Task {
    double value;
    int q;
  };
  std::vector<Task> tasks;
  for (std::size_t i : order)
    for (int q : orders) tasks.push_back({cfg.values[i], q});

  std::vector<RunResult> results(tasks.size());
  std::vector<std::string> errors(tasks.size());
  auto solver = std::make_shared<HelmholtzSolver>();
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        const auto p = with_parameter(cfg.base, cfg.parameter, tasks[k].value);
        results[k] = run_single(p, tasks[k].q, tab, cfg.run, cfg.classify, solver);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  unsigned n_workers = cfg.workers ? cfg.workers : std::thread::hardware_concurrency();
  n_workers = std::clamp<unsigned>(n_workers, 1, static_cast<unsigned>(tasks.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepResult out;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    if (!errors[k].empty()) throw ConfigError("sweep row " + fmt(tasks[k].value) + ": " + errors[k]);
    out.table.push_back(results[k].sample);
    out.reports.push_back(results[k].report);
    out.swept.push_back(tasks[k].value);
  }
  return out;
}

std::string monotonicity_summary(const KineticTable& table) {
  std::map<int, std::vector<std::pair<double, double>>> by_q;
  for (const auto& r : table)
    if (r.status == "ok" && std::isfinite(r.u_minus) && std::isfinite(r.u_plus))
      by_q[r.q].emplace_back(r.u_minus, r.u_plus);
  std::ostringstream os;
  for (auto& [q, pts] : by_q) {
    std::sort(pts.begin(), pts.end());
    bool dec = true, inc = true;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      dec = dec && pts[i].second < pts[i - 1].second;
      inc = inc && pts[i].second > pts[i - 1].second;
    }
    os << "# q=" << q << " rows=" << pts.size() << " u_plus vs u_minus: "
       << (pts.size() < 2 ? "too few rows" : dec ? "strictly decreasing"
                                         : inc ? "strictly increasing"
                                               : "not monotone")
       << "\n";
  }
  if (by_q.empty()) os << "# no resolved kinetic rows\n";
  return os.str();
}

ExactComparison compare_exact(const KineticTable& table, double alpha) {
  ExactComparison out;
  const bool cubic = !table.empty() && alpha > 0.0 &&
                     std::all_of(table.begin(), table.end(),
                                 [](const KineticSample& r) { return r.model == "cubic"; });
  if (!cubic) {
    out.verdict = "not-applicable";
    return out;
  }
  out.applicable = true;
  std::map<int, ErrorMetrics> m;
  for (const auto& r : table) {
    if (!std::isfinite(r.u_minus) || !std::isfinite(r.u_plus)) continue;
    const double err = std::abs(r.u_plus - exact_kinetic_cubic(r.u_minus, alpha));
    auto& e = m[r.q];
    e.q = r.q;
    ++e.rows;
    e.max_abs_error = std::max(e.max_abs_error, err);
    e.mean_abs_error += err;
  }
  for (auto& [q, e] : m) {
    e.mean_abs_error /= static_cast<double>(e.rows);
    out.per_q.push_back(e);
  }
  out.monotone_in_q = !out.per_q.empty();
  for (std::size_t i = 1; i < out.per_q.size(); ++i)
    out.monotone_in_q = out.monotone_in_q &&
                        out.per_q[i].max_abs_error <= out.per_q[i - 1].max_abs_error;
  out.verdict = out.monotone_in_q ? "pass" : "fail";
  return out;
}

std::string emit_csv(const KineticTable& table) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  const auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
  for (const auto& r : table) {
    os << r.model << ',' << r.profile_id << ',' << r.q << ',' << fmt(r.alpha) << ','
       << fmt(r.eps) << ',' << fmt(r.h) << ',' << fmt(r.c) << ',' << fmt(r.u_minus)
       << ',' << fmt(r.u_plus) << ',' << fmt(r.speed) << ',' << fmt(r.dissipation)
       << ',' << opt(r.exact_u_plus) << ',' << opt(r.abs_error) << ',' << r.structure
       << ',' << fmt(r.t_end) << ',' << r.status << "\n";
  }
  return os.str();
}

KineticTable parse_csv(const std::string& text) {
  KineticTable out;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kCsvHeader) throw ConfigError("kinetic table: unexpected header");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 16)
      throw ConfigError("kinetic table: expected 16 fields, got " + std::to_string(f.size()));
    KineticSample r;
    r.model = f[0];
    r.profile_id = f[1];
    r.q = static_cast<int>(parse_double(f[2]));
    r.alpha = parse_double(f[3]);
    r.eps = parse_double(f[4]);
    r.h = parse_double(f[5]);
    r.c = parse_double(f[6]);
    r.u_minus = parse_double(f[7]);
    r.u_plus = parse_double(f[8]);
    r.speed = parse_double(f[9]);
    r.dissipation = parse_double(f[10]);
    if (!f[11].empty()) r.exact_u_plus = parse_double(f[11]);
    if (!f[12].empty()) r.abs_error = parse_double(f[12]);
    r.structure = f[13];
    r.t_end = parse_double(f[14]);
    r.status = f[15];
    out.push_back(std::move(r));
  }
  if (!header) throw ConfigError("kinetic table: missing header");
  return out;
}

FigureKind figure_kind_from_string(const std::string& s) {
  if (s == "kinetic") return FigureKind::kinetic;
  if (s == "dissipation_vs_speed") return FigureKind::dissipation_vs_speed;
  if (s == "wave_structure") return FigureKind::wave_structure;
  throw ConfigError("unknown figure kind '" + s +
                    "' (expected kinetic, dissipation_vs_speed or wave_structure)");
}

std::string emit_gnuplot(const KineticTable& table, FigureKind kind,
                         const std::string& data_path) {
  if (table.empty()) throw ConfigError("cannot plot an empty table");
  std::ostringstream os;
  os << "set terminal pngcairo size 900,700\n";
  std::set<int> qs;
  bool exact = false;
  for (const auto& r : table) {
    qs.insert(r.q);
    exact = exact || r.exact_u_plus.has_value();
  }
  const auto per_q = [&](const std::string& x, const std::string& y) {
    std::string s;
    for (int q : qs) {
      if (!s.empty()) s += ", \\\n     ";
      s += "'" + data_path + "' using " + x + ":($3==" + std::to_string(q) + " ? " + y +
           " : 1/0) with linespoints title 'q=" + std::to_string(q) + "'";
    }
    return s;
  };
  switch (kind) {
    case FigureKind::kinetic:
      os << "set output 'kinetic.png'\nset datafile separator ','\n"
         << "set xlabel 'u_-'\nset ylabel 'u_+'\n"
         << "plot " << per_q("8", "$9");
      if (exact)
        os << ", \\\n     '" << data_path << "' using 8:12 with lines lw 2 title 'exact'";
      os << "\n";
      break;
    case FigureKind::dissipation_vs_speed:
      os << "set output 'dissipation.png'\nset datafile separator ','\n"
         << "set xlabel 's'\nset ylabel 'phi(s)/s^2'\n"
         << "plot " << per_q("10", "($11/($10**2))") << "\n";
      break;
    case FigureKind::wave_structure: {
      os << "set output 'wave_structure.png'\nset xlabel 'x'\n";
      if (table.front().model == "psystem")
        os << "plot '" << data_path << "' using 1:2 with lines title 'tau', '"
           << data_path << "' using 1:3 with lines title 'u'\n";
      else
        os << "plot '" << data_path << "' using 1:2 with lines title 'u'\n";
      break;
    }
  }
  return os.str();
}

void write_field_dump(std::ostream& os, const Grid1D& grid, const StateField& state) {
  char buf[40];
  for (std::size_t i = 0; i < grid.n(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", grid.x(i));
    os << buf;
    for (std::size_t c = 0; c < state.n_components(); ++c) {
      std::snprintf(buf, sizeof buf, " %.17g", state.component(c)[i]);
      os << buf;
    }
    os << "\n";
  }
}

}  // namespace ncshock
