// Acceptance checks. One PASS/FAIL line per criterion; `acceptance 4 7` runs a
// subset, no arguments runs all of them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ncshock/config.hpp"
#include "ncshock/psystem.hpp"
#include "ncshock/runge_kutta.hpp"
#include "ncshock/scalar_models.hpp"
#include "ncshock/stencil.hpp"
#include "ncshock/sweep.hpp"
#include "ncshock/wave_analysis.hpp"

using namespace ncshock;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> info;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RunResult run(const json& j) {
  const auto c = parse_config(j);
  return run_single(c.problem, c.q, builtin_tableau(c.scheme), c.run, c.classify);
}

SweepResult sweep(const json& j) {
  return sweep_kinetic(parse_config(j).sweep());
}

Outcome stencils() {
  const auto checks = validate_stencils(1e-9);
  double worst = 0.0;
  bool ok = checks.size() == 12;
  for (const auto& c : checks) {
    ok = ok && c.pass;
    worst = std::max(worst, c.max_relative_error);
  }
  return {ok, fmt("%zu stencils, worst relative error %.2e", checks.size(), worst)};
}

Outcome rk_orders() {
  const double o4 = verify_order(builtin_tableau("rk4"));
  const double o6 = verify_order(builtin_tableau("rk6"));
  const double o8 = verify_order(builtin_tableau("rk8"));
  const bool ok = std::abs(o4 - 4.0) <= 0.2 && std::abs(o6 - 6.0) <= 0.2 && o8 >= 7.5 - 0.2;
  return {ok, fmt("rk4 %.3f, rk6 %.3f, rk8 %.3f", o4, o6, o8)};
}

Outcome conservation() {
  const std::size_t n = 512;
  const double len = 2.0 * M_PI, h = len / n;
  Discretization disc{Grid1D(0.0, len - h, n), 6, BoundaryTreatment::periodic()};
  CubicSystem sys(CubicModel{5.0 * h, 1.0}, disc);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = disc.grid.x(i);
    u[i] = 0.4 + 0.5 * std::sin(x) + 0.2 * std::cos(3.0 * x);
  }
  const auto total = [&] {
    long double s = 0.0L;
    for (double v : u) s += v;
    return static_cast<double>(s) * h;
  };
  const double m0 = total();
  const double dt = sys.stable_dt(u, 0.5);
  RungeKuttaStepper stepper(builtin_tableau("rk4"), n);
  const RhsFunction rhs = [&](std::span<const double> s, std::span<double> r) { sys.evaluate(s, r); };
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    stepper.step(u, rhs, dt);
    worst = std::max(worst, std::abs(total() - m0) / std::abs(m0));
  }
  return {worst <= 1e-10, fmt("max relative drift of sum(u) h over 10^4 steps: %.2e", worst)};
}

Outcome exact_kinetic() {
  // Reference values from the closed-form kinetic function, and from a
  // travelling-wave ansatz u' = k (u - a)(u - b) for this exact flux:
  // 2 alpha k^2 = 1 and a + b = 2k/3.
  const double alpha = 6.0, um = 2.0;
  const double closed_form = -um + std::sqrt(8.0 / (3.0 * alpha)) / 2.0;
  const double k = 1.0 / std::sqrt(2.0 * alpha);
  const double travelling = -um + 2.0 * k / 3.0;

  std::vector<double> err, err_tw;
  std::string detail;
  bool all_double = true;
  for (int q : {4, 6, 8}) {
    const auto r = run({{"model", "cubic"}, {"u_L", um}, {"u_R", -1.0}, {"alpha", alpha},
                        {"c", 10.0}, {"x_min", 0.0}, {"x_max", 9.995}, {"n", 2000},
                        {"x0", 1.0}, {"width", 0.02}, {"t_end", 0.6}, {"dt", 2.5e-6},
                        {"q", q}});
    const double up = r.sample.u_plus;
    all_double = all_double && r.report.kinetic_pair.has_value();
    err.push_back(std::abs(up - closed_form));
    err_tw.push_back(std::abs(up - travelling));
    detail += fmt("q=%d u+=%.6f err=%.4g; ", q, up, err.back());
  }
  const bool ok = all_double && err[1] < err[0] && err[2] < err[1] &&
                  err[2] <= 0.05 * std::abs(closed_form);
  Outcome o{ok, detail + fmt("reference %.6f", closed_form)};
  o.info.push_back(fmt("travelling-wave reference %.6f: errors %.3g %.3g %.3g", travelling,
                       err_tw[0], err_tw[1], err_tw[2]));
  return o;
}

Outcome cubic_dissipation() {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double a = d(rng), b = d(rng);
    if (a == b) continue;
    const double s = (b * b * b - a * a * a) / (b - a);
    const double dU = (b * b - a * a) / 2.0, dF = 0.75 * (b * b * b * b - a * a * a * a);
    const double ref = 4.0 * (-s * dU + dF);
    const double got = entropy_dissipation_cubic(a, b);
    worst = std::max(worst, std::abs(got - ref) / std::max(1.0, std::abs(ref)));
  }
  return {worst <= 1e-12, fmt("worst scaled difference over 10^4 pairs %.2e", worst)};
}

Outcome thin_film_zero() {
  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double u = (2.0 / 3.0) * i / 101.0;
    worst = std::max(worst, std::abs(entropy_dissipation_thin_film(u, 2.0 / 3.0 - u)));
  }
  return {worst <= 1e-12, fmt("max |D(u, 2/3 - u)| = %.2e", worst)};
}

Outcome thin_film_matrix() {
  struct Case {
    double ur, ul, dt, t_end;
    Structure want;
  };
  const Case cases[] = {
      {0.1, 0.5, 0.6481, 1037, Structure::double_shock},
      {0.1, 0.6, 0.6481, 1037, Structure::rarefaction_plus_nonclassical},
      {0.3, 0.05, 0.388, 698, Structure::classical_only},
      {0.3, 0.5, 0.388, 698, Structure::classical_only},
      {0.3, 0.6, 0.388, 698, Structure::classical_only},
      {0.6, 0.5, 0.37, 2148, Structure::classical_only},
      {0.6, 0.68, 0.37, 2148, Structure::classical_only},
  };
  bool ok = true;
  std::string detail;
  std::vector<double> nc_speed;
  for (const auto& c : cases) {
    const auto r = run({{"model", "thin_film"}, {"u_L", c.ul}, {"u_R", c.ur}, {"q", 6},
                        {"eta", 0.1}, {"dt", c.dt}, {"t_end", c.t_end}});
    const bool hit = r.report.structure == c.want;
    ok = ok && hit;
    if (c.ur == 0.1) {
      const auto s = r.report.nonclassical_speed();
      nc_speed.push_back(s ? *s : NAN);
    }
    detail += fmt("(%.2g,%.2g)%s%s ", c.ur, c.ul, to_string(r.report.structure), hit ? "" : "!");
  }
  const double spread = std::abs(nc_speed[0] - nc_speed[1]) / std::abs(nc_speed[0]);
  ok = ok && spread <= 0.02;
  return {ok, detail + fmt("front speeds %.5f %.5f (%.2f%%)", nc_speed[0], nc_speed[1], 100 * spread)};
}

Outcome thin_film_monotone() {
  const auto res = sweep({{"model", "thin_film"}, {"u_L", 0.05}, {"q", 6}, {"eta", 0.1},
                          {"x_min", 0.0}, {"x_max", 2999.0}, {"n", 3000}, {"x0", 100.0},
                          {"t_end", 8000.0}, {"parameter", "u_R"}, {"from", 0.45},
                          {"to", 0.8}, {"count", 8}});
  std::vector<std::pair<double, double>> rows;  // (u+, u-)
  for (std::size_t i = 0; i < res.table.size(); ++i) {
    const auto& r = res.table[i];
    if (r.status != "ok" || !std::isfinite(r.u_minus) || r.u_minus == r.u_plus) continue;
    const auto s = structure_from_string(r.structure);
    if (s != Structure::double_shock && s != Structure::rarefaction_plus_nonclassical) continue;
    rows.emplace_back(r.u_plus, r.u_minus);
  }
  std::sort(rows.begin(), rows.end());
  bool decreasing = rows.size() >= 3;
  for (std::size_t i = 1; i < rows.size(); ++i)
    decreasing = decreasing && rows[i].second < rows[i - 1].second;
  bool band = true, swapped = true;
  std::string detail;
  for (const auto& [up, um] : rows) {
    band = band && up >= (1.0 - um) / 2.0 && up < 2.0 / 3.0 - um;
    swapped = swapped && um >= 2.0 / 3.0 - up && um < (1.0 - up) / 2.0;
    detail += fmt("%.3f->%.5f ", up, um);
  }
  Outcome o{decreasing && band,
            fmt("%zu nonclassical rows, decreasing=%s, band=%s: ", rows.size(),
                decreasing ? "yes" : "no", band ? "yes" : "no") + detail};
  o.info.push_back(fmt("u- in [2/3 - u+, (1 - u+)/2) for every row: %s", swapped ? "yes" : "no"));
  return o;
}

Outcome camassa_holm() {
  // alpha = 0: the two models share every floating-point operation.
  const json zero = {{"u_L", 1.0}, {"u_R", -1.0}, {"c", 1.0}, {"alpha", 0.0}, {"q", 6},
                     {"t_end", 50.0}};
  auto jc = zero, jh = zero;
  jc["model"] = "cubic";
  jh["model"] = "camassa_holm";
  const auto rc = run(jc), rh = run(jh);
  bool identical = rc.trajectory.snapshots.size() == rh.trajectory.snapshots.size();
  for (std::size_t i = 0; identical && i < rc.trajectory.snapshots.size(); ++i)
    identical = rc.trajectory.snapshots[i].state == rh.trajectory.snapshots[i].state;

  const auto pair_of = [](const char* model, double c, double alpha, double ul) {
    const auto r = run({{"model", model}, {"u_L", ul}, {"u_R", -ul}, {"c", c},
                        {"alpha", alpha}, {"q", 6}});
    return r.report.kinetic_pair ? r.sample.u_plus : NAN;
  };
  bool small_ok = true, large_ok = true;
  std::string detail = fmt("alpha=0 identical=%s; small-u", identical ? "yes" : "no");
  for (double ul : {1.0, 1.5}) {
    const double a = pair_of("cubic", 0.1, 4.0, ul), b = pair_of("camassa_holm", 0.1, 4.0, ul);
    const double rel = std::abs(b - a) / std::abs(a);
    small_ok = small_ok && rel <= 0.05;
    detail += fmt(" %.1f:%.4f/%.4f(%.1f%%)", ul, a, b, 100 * rel);
  }
  detail += "; large-u";
  for (double ul : {0.2, 0.3, 0.4}) {
    const double a = pair_of("cubic", 0.005, 1.0, ul), b = pair_of("camassa_holm", 0.005, 1.0, ul);
    large_ok = large_ok && b > a;
    detail += fmt(" %.1f:%.6f/%.6f", ul, a, b);
  }
  return {identical && small_ok && large_ok, detail};
}

Outcome van_der_waals() {
  const auto pts = find_inflection_points(PressureLaw::vdw_rt());
  const bool infl = pts.size() == 2 && std::abs(pts[0] - 1.00996) <= 1e-3 &&
                    std::abs(pts[1] - 1.8515) <= 1e-3;
  const auto scan = [](double ur) {
    const auto res = sweep({{"model", "psystem"}, {"pressure", "vdw_rt"}, {"tau_L", 0.8},
                            {"tau_R", 2.0}, {"u_R", ur}, {"x_min", 0.0}, {"x_max", 0.9995},
                            {"n", 2000}, {"eps", 3e-5}, {"width", 0.001}, {"q", 6},
                            {"parameter", "u_L"}, {"from", 0.0}, {"to", 1.2}, {"count", 7}});
    std::vector<std::pair<double, double>> rows;  // (tau+, tau-)
    for (const auto& r : res.table)
      if (r.status == "ok" && std::isfinite(r.u_plus) &&
          structure_from_string(r.structure) != Structure::classical_only &&
          structure_from_string(r.structure) != Structure::unresolved)
        rows.emplace_back(r.u_plus, r.u_minus);
    return rows;
  };
  const auto a = scan(1.0), b = scan(1.5);
  // tau+ = phi(tau-) strictly decreasing
  auto by_minus = a;
  std::sort(by_minus.begin(), by_minus.end(),
            [](const auto& x, const auto& y) { return x.second < y.second; });
  bool mono = by_minus.size() >= 3;
  for (std::size_t i = 1; i < by_minus.size(); ++i)
    mono = mono && by_minus[i].second > by_minus[i - 1].second &&
           by_minus[i].first < by_minus[i - 1].first;

  auto sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double tol = plateau_tolerance({}, 0.8, 2.0);
  double worst = 0.0;
  std::size_t compared = 0;
  for (const auto& [tp, tm] : sb) {
    for (std::size_t i = 1; i < sa.size(); ++i) {
      if (tp < sa[i - 1].first || tp > sa[i].first) continue;
      const double w = (tp - sa[i - 1].first) / (sa[i].first - sa[i - 1].first);
      const double interp = sa[i - 1].second + w * (sa[i].second - sa[i - 1].second);
      worst = std::max(worst, std::abs(interp - tm));
      ++compared;
      break;
    }
  }
  const bool single = compared >= 2 && worst <= tol;
  return {infl && mono && single,
          fmt("inflection %.6f %.6f; %zu rows decreasing=%s; %zu overlap rows, worst %.2e (tol %.2e)",
              pts.size() > 0 ? pts[0] : NAN, pts.size() > 1 ? pts[1] : NAN, a.size(),
              mono ? "yes" : "no", compared, worst, tol)};
}

Outcome galilean() {
  const auto field = [](double shift) {
    auto c = parse_config({{"model", "psystem"}, {"pressure", "piecewise_linear"},
                           {"tau_L", 0.9}, {"tau_R", 4.0}, {"u_L", 1.0 + shift},
                           {"u_R", 1.0 + shift}, {"x_min", 0.0}, {"x_max", 0.9995},
                           {"n", 2000}, {"eps", 0.001}, {"width", 0.001}, {"q", 4},
                           {"t_end", 0.12}});
    const auto sys = make_system(c.problem.model, {c.problem.grid, c.q, c.problem.boundary});
    const auto traj = integrate(*sys, build_initial_data(c.problem), builtin_tableau("rk4"), c.run);
    const auto tau = traj.snapshots.back().state.component(0);
    return std::vector<double>(tau.begin(), tau.end());
  };
  const auto a = field(0.0), b = field(3.7);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return {worst <= 1e-12, fmt("max |tau(u) - tau(u + 3.7)| = %.2e", worst)};
}

Outcome regimes() {
  const std::vector<double> values{1.5, 1.0, 0.5, 0.0, -0.5, -1.0, -1.6, -2.0};
  std::vector<WaveReport> reports;
  for (double v : values)
    reports.push_back(run({{"model", "psystem"}, {"pressure", "piecewise_linear"},
                           {"tau_L", 0.9}, {"tau_R", 4.0}, {"u_L", v}, {"u_R", 1.0},
                           {"x_min", 0.0}, {"x_max", 0.9995}, {"n", 2000}, {"eps", 0.001},
                           {"width", 0.001}, {"q", 4}, {"t_end", 0.12}})
                          .report);
  const double tol = plateau_tolerance({}, 0.9, 4.0);
  mark_saturation(reports, tol);
  const auto& a = reports[0];
  const auto& b = reports[1];
  const auto& c = reports.back();
  const auto& limit = reports[reports.size() - 2];
  const double sa = a.nonclassical_speed().value_or(NAN);
  const bool ok_a = a.structure == Structure::stationary_shock;
  const bool ok_b = b.structure == Structure::moving_nonclassical;
  bool ok_c = c.structure == Structure::saturated_nonclassical && c.kinetic_pair && limit.kinetic_pair;
  if (ok_c)
    ok_c = std::abs(c.kinetic_pair->first - limit.kinetic_pair->first) <= tol &&
           std::abs(c.kinetic_pair->second - limit.kinetic_pair->second) <= tol;
  std::string detail = fmt("1.5:%s s=%.4f; 1.0:%s; -2:%s", to_string(a.structure), sa,
                           to_string(b.structure), to_string(c.structure));
  if (c.kinetic_pair && limit.kinetic_pair)
    detail += fmt(" (%.4f, %.4f) vs -1.6 (%.4f, %.4f) tol %.1e", c.kinetic_pair->first,
                  c.kinetic_pair->second, limit.kinetic_pair->first,
                  limit.kinetic_pair->second, tol);
  return {ok_a && ok_b && ok_c, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria = {
      {1, {"stencil exactness", stencils}},
      {2, {"Runge-Kutta orders", rk_orders}},
      {3, {"periodic conservation", conservation}},
      {4, {"exact kinetic convergence in q", exact_kinetic}},
      {5, {"cubic entropy dissipation identity", cubic_dissipation}},
      {6, {"thin-film zero dissipation", thin_film_zero}},
      {7, {"thin-film classification matrix", thin_film_matrix}},
      {8, {"thin-film kinetic monotonicity", thin_film_monotone}},
      {9, {"Camassa-Holm consistency", camassa_holm}},
      {10, {"van der Waals structure", van_der_waals}},
      {11, {"Galilean invariance", galilean}},
      {12, {"regime scan", regimes}},
  };
  std::vector<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.push_back(std::atoi(argv[i]));
  if (chosen.empty())
    for (const auto& [k, v] : criteria) chosen.push_back(k);

  int failures = 0;
  for (int k : chosen) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::printf("FAIL criterion %d: unknown\n", k);
      ++failures;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k,
                it->second.first, o.detail.c_str(), secs);
    for (const auto& line : o.info) std::printf("  info: %s\n", line.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
