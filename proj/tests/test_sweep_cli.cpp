#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "ncshock/config.hpp"
#include "ncshock/errors.hpp"
#include "ncshock/sweep.hpp"

using namespace ncshock;

namespace {

KineticSample cubic_row(int q, double um, double up, double alpha) {
  KineticSample r;
  r.model = "cubic";
  r.profile_id = "tanh_single";
  r.q = q;
  r.alpha = alpha;
  r.eps = 0.01;
  r.h = 0.001;
  r.c = 10;
  r.u_minus = um;
  r.u_plus = up;
  r.speed = um * um + um * up + up * up;
  r.dissipation = (up - um) * (up - um) * (up * up - um * um);
  r.exact_u_plus = exact_kinetic_cubic(um, alpha);
  r.abs_error = std::abs(up - *r.exact_u_plus);
  r.structure = "double_shock";
  r.t_end = 0.6;
  r.status = "ok";
  return r;
}

}  // namespace

TEST_SUITE("sweep_cli") {

TEST_CASE("single tanh profile") {
  RiemannProblem p;
  p.u_left = 0.6;
  p.u_right = 0.1;
  const auto s = build_initial_data(p);
  const auto u = s.component(0);
  CHECK(std::abs(u[0] - 0.6) <= 1e-10);
  CHECK(std::abs(u[p.grid.n() - 1] - 0.1) <= 1e-10);
  CHECK(u[100] == doctest::Approx(0.35));  // x0 = 100, tanh(0) = 0

  p.x0 = 10.0;
  CHECK_THROWS_AS(build_initial_data(p), ConfigError);
}

TEST_CASE("double tanh profile") {
  RiemannProblem p;
  p.profile = Profile::tanh_double;
  p.u_left = 0.05;
  p.u_right = 0.7;
  const auto s = build_initial_data(p);
  const auto u = s.component(0);
  CHECK(std::abs(u[0] - 0.05) <= 1e-10);
  CHECK(std::abs(u[999] - 0.7) <= 1e-10);
  CHECK(u[105] == doctest::Approx(0.35).epsilon(1e-6));
  CHECK(u[80] == doctest::Approx(0.2));
  CHECK(u[130] == doctest::Approx(0.525));
}

TEST_CASE("p-system data sets both components") {
  RiemannProblem p;
  p.model.kind = ModelKind::psystem;
  p.tau_left = 0.9;
  p.tau_right = 4.0;
  p.u_left = 1.5;
  p.u_right = 1.0;
  const auto s = build_initial_data(p);
  CHECK(s.n_components() == 2);
  CHECK(std::abs(s.component(0)[0] - 0.9) <= 1e-10);
  CHECK(std::abs(s.component(1)[999] - 1.0) <= 1e-10);
}

TEST_CASE("end time keeps waves inside") {
  RiemannProblem p;
  p.u_left = 1.0;
  p.u_right = -1.0;
  // cubic characteristics all move right, at most 3, 899 to the right edge
  CHECK(default_t_end(p) == doctest::Approx(0.8 * 899.0 / 3.0));
  CHECK(max_wave_speed(p) == doctest::Approx(3.0));
}

TEST_CASE("zero jump is trivially classical") {
  RiemannProblem p;
  p.u_left = p.u_right = 0.4;
  p.model.eps = 0.5;
  RunConfig cfg;
  cfg.t_end = 5.0;
  const auto r = run_single(p, 6, builtin_tableau("rk4"), cfg);
  CHECK(r.report.structure == Structure::classical_only);
  CHECK_FALSE(r.report.kinetic_pair);
  CHECK(r.sample.status == "ok");
}

TEST_CASE("cubic rows carry consistent speed and dissipation") {
  const auto c = parse_config({{"model", "cubic"}, {"u_L", 1.0}, {"u_R", -1.0}, {"c", 0.1},
                               {"alpha", 4.0}, {"q", 6}});
  const auto r = run_single(c.problem, c.q, builtin_tableau("rk4"), c.run, c.classify);
  REQUIRE(r.report.kinetic_pair);
  const double a = r.sample.u_minus, b = r.sample.u_plus;
  CHECK(r.sample.speed == doctest::Approx(a * a + a * b + b * b).epsilon(1e-12));
  CHECK(r.sample.dissipation == doctest::Approx((b - a) * (b - a) * (b * b - a * a)).epsilon(1e-12));
  CHECK(r.sample.dissipation <= 0.0);
  REQUIRE(r.sample.exact_u_plus);
  CHECK(*r.sample.abs_error == doctest::Approx(std::abs(b - *r.sample.exact_u_plus)));
}

TEST_CASE("numerical failures become rows") {
  const auto c = parse_config({{"model", "thin_film"}, {"u_L", 0.05}, {"u_R", 0.9}, {"q", 6},
                               {"dt", 5.0}, {"t_end", 200.0}});
  const auto r = run_single(c.problem, c.q, builtin_tableau("rk4"), c.run, c.classify);
  REQUIRE(r.failure);
  CHECK(r.sample.structure == "unresolved");
  CHECK(r.sample.status != "ok");
}

TEST_CASE("CSV round trip") {
  KineticTable t{cubic_row(4, 2.0, -1.8070071234567891, 6.0), cubic_row(8, 2.5, -2.3, 6.0)};
  KineticSample film;
  film.model = "thin_film";
  film.profile_id = "tanh_double";
  film.q = 6;
  film.alpha = NAN;
  film.u_minus = 0.2262612345678901;
  film.u_plus = 0.5;
  film.speed = film.dissipation = NAN;
  film.structure = "double_shock";
  film.status = "ok";
  t.push_back(film);
  const auto text = emit_csv(t);
  CHECK(text.rfind(kCsvHeader, 0) == 0);
  const auto back = parse_csv("# comment\n" + text);
  REQUIRE(back.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(back[i] == t[i]);
  CHECK(emit_csv(back) == text);
  CHECK_THROWS_AS(parse_csv("bad,header\n"), ConfigError);
}

TEST_CASE("exact comparison") {
  KineticTable exact;
  for (int q : {4, 6, 8})
    for (double um : {1.0, 2.0, 3.0}) exact.push_back(cubic_row(q, um, exact_kinetic_cubic(um, 6.0), 6.0));
  auto cmp = compare_exact(exact, 6.0);
  CHECK(cmp.applicable);
  REQUIRE(cmp.per_q.size() == 3);
  for (const auto& e : cmp.per_q) CHECK(e.max_abs_error == 0.0);
  CHECK(cmp.verdict == "pass");

  KineticTable shrinking;
  for (int q : {4, 6, 8})
    shrinking.push_back(cubic_row(q, 2.0, exact_kinetic_cubic(2.0, 6.0) + 0.1 / q, 6.0));
  cmp = compare_exact(shrinking, 6.0);
  CHECK(cmp.monotone_in_q);
  CHECK(cmp.verdict == "pass");

  KineticTable growing;
  for (int q : {4, 6, 8})
    growing.push_back(cubic_row(q, 2.0, exact_kinetic_cubic(2.0, 6.0) + 0.01 * q, 6.0));
  CHECK(compare_exact(growing, 6.0).verdict == "fail");

  KineticSample film;
  film.model = "thin_film";
  film.structure = "double_shock";
  film.status = "ok";
  cmp = compare_exact({film}, 0.0);
  CHECK_FALSE(cmp.applicable);
  CHECK(cmp.verdict == "not-applicable");
}

TEST_CASE("gnuplot scripts") {
  KineticTable t{cubic_row(6, 2.0, -1.8, 6.0), cubic_row(6, 3.0, -2.8, 6.0)};
  const auto k = emit_gnuplot(t, FigureKind::kinetic, "table.csv");
  CHECK(k.find("table.csv") != std::string::npos);
  CHECK(k.find("exact") != std::string::npos);
  const auto d = emit_gnuplot(t, FigureKind::dissipation_vs_speed, "table.csv");
  // phi / s^2 is recomputed from columns 10 (speed) and 11 (dissipation)
  CHECK(d.find("$11/($10**2)") != std::string::npos);
  const auto w = emit_gnuplot(t, FigureKind::wave_structure, "field.dat");
  CHECK(w.find("field.dat") != std::string::npos);
  CHECK_THROWS_AS(emit_gnuplot({}, FigureKind::kinetic, "x.csv"), ConfigError);
}

TEST_CASE("field dumps") {
  const Grid1D g(0.0, 1.0, 11);
  StateField s(11, 2);
  s.component(0)[1] = 0.25;
  s.component(1)[2] = -1.0;
  std::ostringstream os;
  write_field_dump(os, g, s);
  std::istringstream is(os.str());
  double x, a, b;
  std::vector<double> row;
  while (is >> x >> a >> b) row.insert(row.end(), {x, a, b});
  REQUIRE(row.size() == 33);
  CHECK(row[3] == doctest::Approx(0.1));
  CHECK(row[4] == 0.25);
  CHECK(row[8] == -1.0);
  CHECK(row[32] == 0.0);
}

TEST_CASE("config parsing") {
  auto c = parse_config({{"model", "thin_film"}, {"eta", 0.1}, {"u_L", 0.5}, {"u_R", 0.1}, {"q", 8}});
  CHECK(c.problem.model.kind == ModelKind::thin_film);
  CHECK(c.problem.model.delta == doctest::Approx(0.1));  // h = 1
  CHECK(c.q == 8);
  CHECK_THROWS_AS(parse_config({{"modle", "cubic"}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"q", "six"}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"model", "burgers"}}), ConfigError);

  nlohmann::json j = {{"model", "cubic"}};
  apply_overrides(j, {"--alpha=6", "--values=1,2,3", "--pressure=vdw_rt", "--require_pair=true"});
  CHECK(j["alpha"] == 6);
  CHECK(j["values"].size() == 3);
  CHECK(j["pressure"] == "vdw_rt");
  CHECK(j["require_pair"] == true);

  c = parse_config({{"parameter", "u_L"}, {"from", 1.0}, {"to", 2.0}, {"count", 5}});
  CHECK(c.values == std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0});
}

TEST_CASE("sweeps are deterministic and sorted") {
  auto j = nlohmann::json{{"model", "thin_film"}, {"u_R", 0.3}, {"q", 6}, {"dt", 0.388},
                          {"t_end", 300.0}, {"parameter", "u_L"}, {"values", {0.6, 0.5, 0.05}},
                          {"orders", {6, 8}}};
  const auto cfg = parse_config(j).sweep();
  const auto a = sweep_kinetic(cfg), b = sweep_kinetic(cfg);
  CHECK(emit_csv(a.table) == emit_csv(b.table));
  REQUIRE(a.table.size() == 6);
  for (std::size_t i = 1; i < a.swept.size(); ++i) CHECK(a.swept[i] >= a.swept[i - 1]);
  CHECK_FALSE(monotonicity_summary(a.table).empty());

  auto bad = cfg;
  bad.values = {0.5, 0.5};
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

}
