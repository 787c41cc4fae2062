#include "ncshock/scalar_models.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ncshock/errors.hpp"

namespace ncshock {

namespace {

double max_abs(std::span<const double> u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

double min_positive_bound(std::initializer_list<double> bounds) {
  double best = std::numeric_limits<double>::infinity();
  for (double b : bounds)
    if (b > 0.0) best = std::min(best, b);
  return best;
}

// Index of the node whose value a ghost/wrapped stencil entry reads.
std::size_t resolve_column(std::ptrdiff_t j, std::size_t n, BoundaryTreatment b) {
  const auto sn = static_cast<std::ptrdiff_t>(n);
  if (b.kind == BoundaryKind::periodic) return static_cast<std::size_t>(((j % sn) + sn) % sn);
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0, sn - 1));
}

Eigen::SparseMatrix<double> helmholtz_matrix(const Grid1D& grid, int q,
                                             double kappa, BoundaryTreatment b) {
  const auto s = make_stencil(q, 2);
  const auto w = s.weights();
  const std::size_t n = grid.n();
  const double scale = kappa / (grid.h() * grid.h());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(n * w.size() + n);
  for (std::size_t i = 0; i < n; ++i) {
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
    for (int k = -s.half_width; k <= s.half_width; ++k) {
      const auto col = resolve_column(static_cast<std::ptrdiff_t>(i) + k, n, b);
      entries.emplace_back(static_cast<int>(i), static_cast<int>(col),
                           -scale * w[static_cast<std::size_t>(k + s.half_width)]);
    }
  }
  Eigen::SparseMatrix<double> m(static_cast<int>(n), static_cast<int>(n));
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  return m;
}

}  // namespace

const char* to_string(FluxKind kind) {
  return kind == FluxKind::cubic ? "cubic" : "thin_film";
}

void validate(const CubicModel& m) {
  if (!(m.eps >= 0.0) || !std::isfinite(m.eps))
    throw ConfigError("cubic model: eps must be finite and non-negative");
  if (!(m.alpha >= 0.0) || !std::isfinite(m.alpha))
    throw ConfigError("cubic model: alpha must be finite and non-negative");
}

void validate(const ThinFilmModel& m) {
  if (!(m.delta > 0.0) || !std::isfinite(m.delta))
    throw ConfigError("thin film model: delta must be positive");
  if (!(m.u_floor > 0.0) || m.u_floor >= 1e-2)
    throw ConfigError("thin film model: u_floor must lie in (0, 1e-2)");
}

void validate(const CamassaHolmModel& m) {
  if (!(m.eps >= 0.0) || !std::isfinite(m.eps))
    throw ConfigError("Camassa-Holm model: eps must be finite and non-negative");
  if (!(m.alpha >= 0.0) || !std::isfinite(m.alpha))
    throw ConfigError("Camassa-Holm model: alpha must be finite and non-negative");
}

// ---------------------------------------------------------------------------
// Helmholtz solve

struct HelmholtzSolver::Factorization {
  Eigen::SparseMatrix<double> matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

HelmholtzSolver::HelmholtzSolver() = default;
HelmholtzSolver::~HelmholtzSolver() = default;

std::shared_ptr<const HelmholtzSolver::Factorization> HelmholtzSolver::factor(
    const Grid1D& grid, int q, double kappa, BoundaryTreatment b) {
  const Key key{grid.x_min(), grid.x_max(), grid.n(), q, kappa,
                static_cast<int>(b.kind)};
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto f = std::make_shared<Factorization>();
  f->matrix = helmholtz_matrix(grid, q, kappa, b);
  f->lu.compute(f->matrix);
  if (f->lu.info() != Eigen::Success)
    throw LinearSolveError("Helmholtz factorization failed (kappa=" +
                           std::to_string(kappa) + ")");
  std::lock_guard lock(mutex_);
  auto [it, inserted] = cache_.emplace(key, std::move(f));
  return it->second;
}

std::size_t HelmholtzSolver::cached_factorizations() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

std::vector<double> HelmholtzSolver::solve(std::span<const double> rhs,
                                           const Grid1D& grid, int q,
                                           double kappa, BoundaryTreatment b) {
  if (rhs.size() != grid.n()) throw ConfigError("Helmholtz: size mismatch");
  const auto f = factor(grid, q, kappa, b);
  const Eigen::Map<const Eigen::VectorXd> r(rhs.data(),
                                            static_cast<Eigen::Index>(rhs.size()));
  Eigen::VectorXd w = f->lu.solve(r);
  if (f->lu.info() != Eigen::Success || !w.allFinite())
    throw LinearSolveError("Helmholtz solve failed");
  const double scale = std::max(r.cwiseAbs().maxCoeff(), 1e-300);
  const double res = (f->matrix * w - r).cwiseAbs().maxCoeff() / scale;
  if (res > 1e-12 && r.cwiseAbs().maxCoeff() > 0.0)
    throw LinearSolveError("Helmholtz residual " + std::to_string(res) +
                           " exceeds 1e-12");
  return {w.data(), w.data() + w.size()};
}

double HelmholtzSolver::residual(std::span<const double> w,
                                 std::span<const double> r, const Grid1D& grid,
                                 int q, double kappa, BoundaryTreatment b) {
  const auto m = helmholtz_matrix(grid, q, kappa, b);
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
  const double scale = std::max(rv.cwiseAbs().maxCoeff(), 1e-300);
  return (m * wv - rv).cwiseAbs().maxCoeff() / scale;
}

// ---------------------------------------------------------------------------
// Cubic

CubicSystem::CubicSystem(const CubicModel& m, const Discretization& disc)
    : model_(m),
      disc_(disc),
      d1_(make_stencil(disc.order, 1), disc.grid, disc.boundary),
      d2_(make_stencil(disc.order, 2), disc.grid, disc.boundary),
      d3_(make_stencil(disc.order, 3), disc.grid, disc.boundary),
      flux_(disc.grid.n()),
      work_(disc.grid.n()) {
  validate(m);
}

void CubicSystem::evaluate(std::span<const double> u,
                           std::span<double> rate) const {
  const std::size_t n = disc_.grid.n();
  for (std::size_t i = 0; i < n; ++i) flux_[i] = u[i] * u[i] * u[i];
  d1_.apply(flux_, rate);
  d2_.apply(u, work_);
  const double eps = model_.eps;
  for (std::size_t i = 0; i < n; ++i) rate[i] = -rate[i] + eps * work_[i];
  if (model_.alpha != 0.0) {
    const double ae2 = model_.alpha * eps * eps;
    d3_.apply(u, work_);
    for (std::size_t i = 0; i < n; ++i) rate[i] += ae2 * work_[i];
  }
}

double CubicSystem::stable_dt(std::span<const double> u, double cfl) const {
  const double h = disc_.grid.h();
  const double umax = max_abs(u);
  const double speed = 3.0 * umax * umax;
  const double eps = model_.eps;
  const double ae2 = model_.alpha * eps * eps;
  double bound = min_positive_bound({eps > 0 ? h * h / (2.0 * eps) : 0.0,
                                     ae2 > 0 ? h * h * h / (6.0 * ae2) : 0.0});
  if (speed > 0.0)
    bound = std::min(bound, h / speed);
  else if (!std::isfinite(bound))
    bound = h;
  return cfl * bound;
}

std::vector<double> rhs_cubic(std::span<const double> u, const CubicModel& m,
                              int q, const Grid1D& grid, BoundaryTreatment b) {
  std::vector<double> out(u.size());
  CubicSystem(m, {grid, q, b}).evaluate(u, out);
  return out;
}

// ---------------------------------------------------------------------------
// Thin film

ThinFilmSystem::ThinFilmSystem(const ThinFilmModel& m, const Discretization& disc)
    : model_(m),
      disc_(disc),
      d1_(make_stencil(disc.order, 1), disc.grid, disc.boundary),
      d3_(make_stencil(disc.order, 3), disc.grid, disc.boundary),
      ux_(disc.grid.n()),
      uxxx_(disc.grid.n()),
      g_(disc.grid.n()) {
  validate(m);
  if (disc.order < 6)
    throw ConfigError("thin film model needs a scheme of order >= 6 (got q=" +
                      std::to_string(disc.order) + ")");
}

void ThinFilmSystem::evaluate(std::span<const double> u,
                              std::span<double> rate) const {
  const std::size_t n = disc_.grid.n();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(u[i] > model_.u_floor)) {
      if (!std::isfinite(u[i]))
        throw BlowupError("non-finite film height at node " + std::to_string(i), i);
      throw PositivityError("film height " + std::to_string(u[i]) +
                                " at node " + std::to_string(i) +
                                " fell below the positivity floor",
                            i);
    }
  }
  d1_.apply(u, ux_);
  d3_.apply(u, uxxx_);
  const double delta = model_.delta;
  for (std::size_t i = 0; i < n; ++i) {
    const double u2 = u[i] * u[i];
    const double u3 = u2 * u[i];
    g_[i] = u2 - u3 - u3 * (delta * ux_[i] - uxxx_[i]);
  }
  d1_.apply(g_, rate);
  for (std::size_t i = 0; i < n; ++i) rate[i] = -rate[i];
}

double ThinFilmSystem::stable_dt(std::span<const double> u, double cfl) const {
  const double h = disc_.grid.h();
  double speed = 0.0;
  double umax = 0.0;
  for (double v : u) {
    speed = std::max(speed, std::abs(2.0 * v - 3.0 * v * v));
    umax = std::max(umax, std::abs(v));
  }
  // Second-order coefficient delta*u^3, fourth-order coefficient u^3.
  const double mobility = umax * umax * umax;
  double bound = min_positive_bound(
      {mobility > 0 ? h * h / (2.0 * model_.delta * mobility) : 0.0,
       mobility > 0 ? h * h * h * h / (8.0 * mobility) : 0.0});
  if (speed > 0.0)
    bound = std::min(bound, h / speed);
  else if (!std::isfinite(bound))
    bound = h;
  return cfl * bound;
}

std::vector<double> rhs_thin_film(std::span<const double> u,
                                  const ThinFilmModel& m, int q,
                                  const Grid1D& grid, BoundaryTreatment b) {
  std::vector<double> out(u.size());
  ThinFilmSystem(m, {grid, q, b}).evaluate(u, out);
  return out;
}

// ---------------------------------------------------------------------------
// Camassa-Holm

CamassaHolmSystem::CamassaHolmSystem(const CamassaHolmModel& m,
                                     const Discretization& disc,
                                     std::shared_ptr<HelmholtzSolver> solver)
    : model_(m),
      disc_(disc),
      solver_(solver ? std::move(solver) : std::make_shared<HelmholtzSolver>()),
      explicit_part_(CubicModel{m.eps, 0.0}, disc),
      d1_(make_stencil(disc.order, 1), disc.grid, disc.boundary),
      d2_(make_stencil(disc.order, 2), disc.grid, disc.boundary),
      d3_(make_stencil(disc.order, 3), disc.grid, disc.boundary),
      ux_(disc.grid.n()),
      uxx_(disc.grid.n()),
      uxxx_(disc.grid.n()) {
  validate(m);
}

void CamassaHolmSystem::evaluate(std::span<const double> u,
                                 std::span<double> rate) const {
  explicit_part_.evaluate(u, rate);
  if (model_.alpha == 0.0) return;
  const std::size_t n = disc_.grid.n();
  const double ae2 = model_.alpha * model_.eps * model_.eps;
  d1_.apply(u, ux_);
  d2_.apply(u, uxx_);
  d3_.apply(u, uxxx_);
  for (std::size_t i = 0; i < n; ++i)
    rate[i] += ae2 * (2.0 * ux_[i] * uxx_[i] + u[i] * uxxx_[i]);
  const auto w = solver_->solve(rate, disc_.grid, disc_.order, ae2, disc_.boundary);
  std::copy(w.begin(), w.end(), rate.begin());
}

double CamassaHolmSystem::stable_dt(std::span<const double> u, double cfl) const {
  const double h = disc_.grid.h();
  const double umax = max_abs(u);
  const double speed = 3.0 * umax * umax;
  const double eps = model_.eps;
  // Dispersion enters as alpha eps^2 u u_xxx, so its strength scales with |u|.
  const double ae2 = model_.alpha * eps * eps * std::max(1.0, umax);
  double bound = min_positive_bound({eps > 0 ? h * h / (2.0 * eps) : 0.0,
                                     ae2 > 0 ? h * h * h / (6.0 * ae2) : 0.0});
  if (speed > 0.0) bound = std::min(bound, h / speed);
  return cfl * bound;
}

std::vector<double> rhs_camassa_holm(std::span<const double> u,
                                     const CamassaHolmModel& m, int q,
                                     const Grid1D& grid, BoundaryTreatment b,
                                     HelmholtzSolver& solver) {
  std::vector<double> out(u.size());
  // Non-owning handle: the caller keeps `solver` alive for the call.
  std::shared_ptr<HelmholtzSolver> handle(&solver, [](HelmholtzSolver*) {});
  CamassaHolmSystem(m, {grid, q, b}, handle).evaluate(u, out);
  return out;
}

}  // namespace ncshock
