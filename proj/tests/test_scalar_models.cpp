#include <doctest.h>

#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "ncshock/errors.hpp"
#include "ncshock/scalar_models.hpp"

using namespace ncshock;

namespace {

Grid1D periodic_grid(std::size_t n) {
  const double h = 2.0 * M_PI / n;
  return Grid1D(0.0, 2.0 * M_PI - h, n);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("scalar_models") {

TEST_CASE("constant states are steady") {
  const Grid1D g(0.0, 99.0, 100);
  const auto b = BoundaryTreatment::constant();
  CHECK(max_abs(rhs_cubic(std::vector<double>(g.n(), 2.0), {0.5, 1.0}, 6, g, b)) == 0.0);
  CHECK(max_abs(rhs_thin_film(std::vector<double>(g.n(), 0.5), {0.1}, 6, g, b)) == 0.0);
  HelmholtzSolver solver;
  CHECK(max_abs(rhs_camassa_holm(std::vector<double>(g.n(), 2.0), {0.5, 1.0}, 6, g, b, solver)) ==
        doctest::Approx(0.0));
}

TEST_CASE("cubic flux derivative converges at the scheme order") {
  for (int q : {4, 6, 8}) {
    std::vector<double> err;
    for (std::size_t n : {32, 64}) {
      const auto g = periodic_grid(n);
      std::vector<double> u(n);
      for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(g.x(i));
      const auto r = rhs_cubic(u, {0.0, 0.0}, q, g, BoundaryTreatment::periodic());
      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = g.x(i);
        e = std::max(e, std::abs(r[i] + 3.0 * std::sin(x) * std::sin(x) * std::cos(x)));
      }
      err.push_back(e);
    }
    CAPTURE(q);
    CHECK(std::log2(err[0] / err[1]) == doctest::Approx(q).epsilon(0.1));
  }
}

TEST_CASE("q = 4 cubic matches the expanded five-point scheme") {
  const Grid1D g(0.0, 1.0, 30);
  const double h = g.h(), eps = 0.03, alpha = 2.0;
  std::vector<double> u(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) u[i] = std::tanh(6.0 * (g.x(i) - 0.4));
  const auto r = rhs_cubic(u, {eps, alpha}, 4, g, BoundaryTreatment::constant());
  const auto f = [&](std::size_t i) { return u[i] * u[i] * u[i]; };
  for (std::size_t i = 2; i + 2 < g.n(); ++i) {
    const double conv = (f(i - 2) - 8 * f(i - 1) + 8 * f(i + 1) - f(i + 2)) / (12 * h);
    const double visc = (-u[i - 2] + 16 * u[i - 1] - 30 * u[i] + 16 * u[i + 1] - u[i + 2]) / (12 * h * h);
    const double disp = (-u[i - 2] + 2 * u[i - 1] - 2 * u[i + 1] + u[i + 2]) / (2 * h * h * h);
    const double want = -conv + eps * visc + alpha * eps * eps * disp;
    CHECK(r[i] == doctest::Approx(want).epsilon(1e-11));
  }
}

TEST_CASE("cubic rhs is odd without capillarity") {
  const Grid1D g(0.0, 10.0, 80);
  std::vector<double> u(g.n()), v(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    u[i] = std::sin(g.x(i)) + 0.3 * std::cos(2.3 * g.x(i));
    v[i] = -u[i];
  }
  const auto a = rhs_cubic(u, {0.2, 0.0}, 6, g, BoundaryTreatment::constant());
  const auto b = rhs_cubic(v, {0.2, 0.0}, 6, g, BoundaryTreatment::constant());
  for (std::size_t i = 0; i < g.n(); ++i) CHECK(a[i] == -b[i]);
}

TEST_CASE("periodic rhs sums vanish") {
  const auto g = periodic_grid(128);
  std::vector<double> u(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) u[i] = 0.4 + 0.2 * std::sin(g.x(i)) + 0.05 * std::cos(5 * g.x(i));
  const auto p = BoundaryTreatment::periodic();
  const auto rc = rhs_cubic(u, {0.05, 1.0}, 8, g, p);
  const auto rt = rhs_thin_film(u, {0.1}, 6, g, p);
  CHECK(std::abs(std::accumulate(rc.begin(), rc.end(), 0.0)) <= 1e-12 * g.n());
  CHECK(std::abs(std::accumulate(rt.begin(), rt.end(), 0.0)) <= 1e-12 * g.n());
}

TEST_CASE("thin film against the symbolic flux derivative") {
  const double delta = 0.1;
  const auto exact = [&](double x) {
    const double u = 0.3 + 0.1 * std::sin(x), ux = 0.1 * std::cos(x), uxx = -0.1 * std::sin(x),
                 uxxx = -0.1 * std::cos(x), uxxxx = 0.1 * std::sin(x);
    const double gx = 2 * u * ux - 3 * u * u * ux - 3 * u * u * ux * (delta * ux - uxxx) -
                      u * u * u * (delta * uxx - uxxxx);
    return -gx;
  };
  for (int q : {6, 8}) {
    std::vector<double> err;
    for (std::size_t n : {32, 64}) {
      const auto g = periodic_grid(n);
      std::vector<double> u(n);
      for (std::size_t i = 0; i < n; ++i) u[i] = 0.3 + 0.1 * std::sin(g.x(i));
      const auto r = rhs_thin_film(u, {delta}, q, g, BoundaryTreatment::periodic());
      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) e = std::max(e, std::abs(r[i] - exact(g.x(i))));
      err.push_back(e);
    }
    CAPTURE(q);
    // the third-derivative stencil sets the rate: q - 2
    CHECK(std::log2(err[0] / err[1]) >= q - 2 - 0.5);
    CHECK(err[1] < 1e-4);
  }
}

TEST_CASE("thin film guards") {
  const Grid1D g(0.0, 99.0, 100);
  std::vector<double> u(g.n(), 0.5);
  CHECK_THROWS_AS(rhs_thin_film(u, {0.1}, 4, g, BoundaryTreatment::constant()), ConfigError);
  u[40] = 0.0;
  try {
    rhs_thin_film(u, {0.1}, 6, g, BoundaryTreatment::constant());
    FAIL("expected PositivityError");
  } catch (const PositivityError& e) {
    CHECK(e.node() == 40);
  }
  CHECK_THROWS_AS(validate(ThinFilmModel{-1.0}), ConfigError);
  CHECK_THROWS_AS(validate(CubicModel{-0.1, 1.0}), ConfigError);
}

TEST_CASE("Camassa-Holm without capillarity is the cubic rhs") {
  const Grid1D g(0.0, 99.0, 100);
  std::vector<double> u(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) u[i] = std::tanh(-(g.x(i) - 50.0) / 3.0);
  HelmholtzSolver solver;
  const auto b = BoundaryTreatment::constant();
  CHECK(rhs_camassa_holm(u, {0.7, 0.0}, 6, g, b, solver) == rhs_cubic(u, {0.7, 0.0}, 6, g, b));

  const Discretization disc{g, 6, b};
  CubicSystem cs({0.7, 0.0}, disc);
  CamassaHolmSystem hs({0.7, 0.0}, disc, std::make_shared<HelmholtzSolver>());
  std::vector<double> a(g.n()), c(g.n());
  cs.evaluate(u, a);
  hs.evaluate(u, c);
  CHECK(a == c);
}

TEST_CASE("Camassa-Holm rhs solves its Helmholtz system") {
  const auto g = periodic_grid(96);
  const double eps = 0.2, alpha = 1.5, kappa = alpha * eps * eps;
  const auto p = BoundaryTreatment::periodic();
  std::vector<double> u(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) u[i] = 0.1 * std::sin(g.x(i));
  HelmholtzSolver solver;
  const auto w = rhs_camassa_holm(u, {eps, alpha}, 6, g, p, solver);

  // explicit part assembled independently from the stencils
  const auto d1 = apply_stencil(u, make_stencil(6, 1), g, p);
  const auto d2 = apply_stencil(u, make_stencil(6, 2), g, p);
  const auto d3 = apply_stencil(u, make_stencil(6, 3), g, p);
  std::vector<double> f(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) f[i] = u[i] * u[i] * u[i];
  const auto fx = apply_stencil(f, make_stencil(6, 1), g, p);
  std::vector<double> r(g.n());
  for (std::size_t i = 0; i < g.n(); ++i)
    r[i] = -fx[i] + eps * d2[i] + kappa * (2 * d1[i] * d2[i] + u[i] * d3[i]);

  const auto w2 = apply_stencil(w, make_stencil(6, 2), g, p);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    worst = std::max(worst, std::abs(w[i] - kappa * w2[i] - r[i]));
    scale = std::max(scale, std::abs(r[i]));
  }
  CHECK(worst / scale <= 1e-12);
  CHECK(HelmholtzSolver::residual(w, r, g, 6, kappa, p) <= 1e-12);
}

TEST_CASE("Helmholtz factorizations are cached per configuration") {
  const auto g = periodic_grid(64);
  HelmholtzSolver solver;
  std::vector<double> r(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) r[i] = std::cos(3 * g.x(i));
  const auto a = solver.solve(r, g, 6, 0.01, BoundaryTreatment::periodic());
  const auto b = solver.solve(r, g, 6, 0.01, BoundaryTreatment::periodic());
  CHECK(a == b);
  CHECK(solver.cached_factorizations() == 1);
  solver.solve(r, g, 8, 0.01, BoundaryTreatment::periodic());
  CHECK(solver.cached_factorizations() == 2);
  CHECK(solver.bandwidth(8) == 4);
  // (I - kappa D2) cos(3x) = (1 + 9 kappa) cos(3x) up to the stencil error
  for (std::size_t i = 0; i < g.n(); ++i) CHECK(a[i] == doctest::Approx(r[i] / 1.09).epsilon(1e-6));
}

}
