// Command-line driver: run, sweep, validate, plot, regimes.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical blow-up (or a
// failed validation), 3 unresolved classification when a kinetic pair was
// required.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "ncshock/config.hpp"
#include "ncshock/errors.hpp"
#include "ncshock/stencil.hpp"
#include "ncshock/sweep.hpp"

using namespace ncshock;

namespace {

constexpr int kOk = 0, kConfig = 1, kBlowup = 2, kUnresolved = 3;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig load(const std::string& config, const std::vector<std::string>& extras) {
  auto j = load_json(config);
  apply_overrides(j, extras);
  return parse_config(j);
}

int cmd_run(const ExperimentConfig& c) {
  const auto res = run_single(c.problem, c.q, builtin_tableau(c.scheme), c.run, c.classify);
  std::cerr << res.report.describe();
  write_text(c.output, emit_csv({res.sample}));
  if (!c.dump.empty() && !res.trajectory.snapshots.empty()) {
    std::ofstream out(c.dump);
    if (!out) throw ConfigError("cannot write '" + c.dump + "'");
    write_field_dump(out, c.problem.grid, res.trajectory.snapshots.back().state);
  }
  if (res.failure) {
    std::cerr << "run aborted: " << res.failure_reason << "\n";
    return kBlowup;
  }
  if (c.require_pair &&
      (res.report.structure == Structure::unresolved || !res.report.kinetic_pair))
    return kUnresolved;
  return kOk;
}

int cmd_sweep(const ExperimentConfig& c) {
  const auto cfg = c.sweep();
  const auto res = sweep_kinetic(cfg);
  std::string text = emit_csv(res.table) + monotonicity_summary(res.table);
  const auto cmp = compare_exact(res.table, c.problem.model.alpha);
  if (cmp.applicable) {
    std::ostringstream os;
    os.precision(6);
    for (const auto& e : cmp.per_q)
      os << "# q=" << e.q << " rows=" << e.rows << " max_abs_error=" << e.max_abs_error
         << " mean_abs_error=" << e.mean_abs_error << "\n";
    os << "# exact comparison: " << cmp.verdict << "\n";
    text += os.str();
  }
  write_text(c.output, text);
  return kOk;
}

int cmd_validate() {
  bool ok = true;
  const auto checks = validate_stencils();
  std::cout << format_stencil_report(checks);
  for (const auto& s : checks) ok = ok && s.pass;

  const struct {
    const char* name;
    double lo, hi;
  } schemes[] = {{"rk4", 3.8, 4.2}, {"rk6", 5.8, 6.2}, {"rk8", 7.5, 1e9}};
  for (const auto& s : schemes) {
    const double order = verify_order(builtin_tableau(s.name));
    const bool pass = order >= s.lo && order <= s.hi;
    ok = ok && pass;
    std::cout << s.name << " measured order " << order << (pass ? "  ok\n" : "  FAIL\n");
  }

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  double worst = 0.0;
  const FluxFn cubic{FluxKind::cubic};
  for (int k = 0; k < 10000; ++k) {
    const double a = dist(rng), b = dist(rng);
    if (a == b) continue;
    const double s = shock_speed_rh(a, b, cubic);
    const double ref = 4.0 * (-s * (b * b - a * a) / 2.0 + 0.75 * (b * b * b * b - a * a * a * a));
    worst = std::max(worst, std::abs(entropy_dissipation_cubic(a, b) - ref) /
                                std::max(1.0, std::abs(ref)));
  }
  const bool id_ok = worst <= 1e-12;
  ok = ok && id_ok;
  std::cout << "cubic dissipation identity, worst relative error " << worst
            << (id_ok ? "  ok\n" : "  FAIL\n");

  double root = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double u = (2.0 / 3.0) * k / 101.0;
    root = std::max(root, std::abs(entropy_dissipation_thin_film(u, 2.0 / 3.0 - u)));
  }
  const bool root_ok = root <= 1e-12;
  ok = ok && root_ok;
  std::cout << "thin-film zero-dissipation root, worst |D| " << root
            << (root_ok ? "  ok\n" : "  FAIL\n");
  return ok ? kOk : kBlowup;
}

int cmd_plot(const std::string& table_path, const std::string& kind,
             const std::string& data_path, const std::string& output) {
  const auto table = parse_csv(read_text(table_path));
  const auto fig = figure_kind_from_string(kind);
  const std::string data = data_path.empty() ? table_path : data_path;
  write_text(output, emit_gnuplot(table, fig, data));
  return kOk;
}

// Piecewise-linear p-system scan over u_L at fixed (tau_L, tau_R, u_R).
int cmd_regimes(const std::string& config, std::vector<std::string> extras) {
  auto j = load_json(config);
  nlohmann::json defaults = {{"model", "psystem"}, {"pressure", "piecewise_linear"},
                             {"tau_L", 0.9},       {"tau_R", 4.0},
                             {"u_R", 1.0},         {"x_min", 0.0},
                             {"x_max", 0.9995},    {"n", 2000},
                             {"eps", 0.001},       {"width", 0.001},
                             {"t_end", 0.12},      {"q", 4},
                             {"values", {1.5, 1.0, 0.5, 0.0, -0.5, -1.0, -1.6, -2.0}}};
  for (auto& [k, v] : defaults.items())
    if (!j.contains(k)) j[k] = v;
  apply_overrides(j, extras);
  const auto c = parse_config(j);
  if (c.problem.model.kind != ModelKind::psystem)
    throw ConfigError("regimes: the scan needs the p-system model");

  std::vector<double> u_l = c.values;
  std::sort(u_l.begin(), u_l.end(), std::greater<>());
  const auto tab = builtin_tableau(c.scheme);
  std::vector<WaveReport> reports;
  KineticTable table;
  bool failed = false;
  for (double v : u_l) {
    auto res = run_single(with_parameter(c.problem, "u_L", v), c.q, tab, c.run, c.classify);
    failed = failed || res.failure.has_value();
    reports.push_back(res.report);
    table.push_back(res.sample);
  }
  const double tol = plateau_tolerance(c.classify, c.problem.tau_left, c.problem.tau_right);
  mark_saturation(reports, tol);

  std::ostringstream os;
  os << "u_L,structure,tau_minus,tau_plus,speed,status\n";
  os.precision(10);
  for (std::size_t i = 0; i < u_l.size(); ++i) {
    table[i].structure = to_string(reports[i].structure);
    os << u_l[i] << "," << table[i].structure << "," << table[i].u_minus << ","
       << table[i].u_plus << "," << table[i].speed << "," << table[i].status << "\n";
  }
  write_text(c.output, os.str());
  return failed ? kBlowup : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinetic functions of nonclassical shocks: runs, sweeps and checks"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "single Riemann experiment");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep producing a kinetic table");
  auto* regimes = app.add_subcommand("regimes", "p-system regime scan over u_L");
  for (auto* sub : {run, sweep, regimes}) {
    sub->add_option("-c,--config", config, "JSON config file");
    sub->allow_extras();
    sub->footer("Any config key can be overridden with --key=value.");
  }
  app.add_subcommand("validate", "stencil, tableau and identity oracles");

  std::string table, kind = "kinetic", data, output;
  auto* plot = app.add_subcommand("plot", "emit a gnuplot script for a kinetic table");
  plot->add_option("table", table, "kinetic CSV")->required();
  plot->add_option("-k,--kind", kind, "kinetic, dissipation_vs_speed or wave_structure");
  plot->add_option("-d,--data", data, "data file the script plots (default: the table)");
  plot->add_option("-o,--output", output, "script path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(load(config, run->remaining()));
    if (*sweep) return cmd_sweep(load(config, sweep->remaining()));
    if (*regimes) return cmd_regimes(config, regimes->remaining());
    if (app.got_subcommand("validate")) return cmd_validate();
    if (*plot) return cmd_plot(table, kind, data, output);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kBlowup;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBlowup;
  }
  return kOk;
}
