#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "ncshock/flux.hpp"
#include "ncshock/stencil.hpp"
#include "ncshock/system.hpp"

namespace ncshock {

/// u_t + (u^3)_x = eps u_xx + alpha eps^2 u_xxx
struct CubicModel {
  double eps = 0.0;
  double alpha = 0.0;
};

/// u_t + g(u)_x = 0 with g = u^2 - u^3 - u^3 (delta u_x - u_xxx), i.e. the
/// thin-film equation normalized to eps = delta, alpha eps^2 = 1.
struct ThinFilmModel {
  double delta = 0.1;
  double u_floor = 1e-6;
};

/// u_t + (u^3)_x = eps u_xx + alpha eps^2 (u_xxt + 2 u_x u_xx + u u_xxx)
struct CamassaHolmModel {
  double eps = 0.0;
  double alpha = 0.0;
};

void validate(const CubicModel& m);
void validate(const ThinFilmModel& m);
void validate(const CamassaHolmModel& m);

/// Solves (I - kappa D2) w = r for the order-q second-derivative stencil,
/// caching one sparse LU factorization per (grid, q, kappa, boundary).
/// Lookups are mutex-protected; factorizations are read-only once built.
class HelmholtzSolver {
 public:
  HelmholtzSolver();
  ~HelmholtzSolver();
  HelmholtzSolver(const HelmholtzSolver&) = delete;
  HelmholtzSolver& operator=(const HelmholtzSolver&) = delete;

  /// Throws LinearSolveError when the factorization fails or the relative
  /// residual exceeds 1e-12.
  std::vector<double> solve(std::span<const double> rhs, const Grid1D& grid,
                            int q, double kappa, BoundaryTreatment b);

  /// max |(I - kappa D2) w - r| / max |r| for a given candidate.
  static double residual(std::span<const double> w, std::span<const double> r,
                         const Grid1D& grid, int q, double kappa,
                         BoundaryTreatment b);

  std::size_t cached_factorizations() const;
  int bandwidth(int q) const { return make_stencil(q, 2).half_width; }

 private:
  struct Factorization;
  using Key = std::tuple<double, double, std::size_t, int, double, int>;
  std::shared_ptr<const Factorization> factor(const Grid1D& grid, int q,
                                              double kappa, BoundaryTreatment b);

  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const Factorization>> cache_;
};

std::vector<double> rhs_cubic(std::span<const double> u, const CubicModel& m,
                              int q, const Grid1D& grid, BoundaryTreatment b);

/// Requires q >= 6 and u > u_floor everywhere.
std::vector<double> rhs_thin_film(std::span<const double> u,
                                  const ThinFilmModel& m, int q,
                                  const Grid1D& grid, BoundaryTreatment b);

std::vector<double> rhs_camassa_holm(std::span<const double> u,
                                     const CamassaHolmModel& m, int q,
                                     const Grid1D& grid, BoundaryTreatment b,
                                     HelmholtzSolver& solver);

class CubicSystem final : public SemiDiscreteSystem {
 public:
  CubicSystem(const CubicModel& m, const Discretization& disc);

  std::size_t n_components() const override { return 1; }
  const Discretization& discretization() const override { return disc_; }
  void evaluate(std::span<const double> u, std::span<double> rate) const override;
  double stable_dt(std::span<const double> u, double cfl) const override;

 private:
  CubicModel model_;
  Discretization disc_;
  Differentiator d1_, d2_, d3_;
  mutable std::vector<double> flux_, work_;
};

class ThinFilmSystem final : public SemiDiscreteSystem {
 public:
  ThinFilmSystem(const ThinFilmModel& m, const Discretization& disc);

  std::size_t n_components() const override { return 1; }
  const Discretization& discretization() const override { return disc_; }
  void evaluate(std::span<const double> u, std::span<double> rate) const override;
  double stable_dt(std::span<const double> u, double cfl) const override;

 private:
  ThinFilmModel model_;
  Discretization disc_;
  Differentiator d1_, d3_;
  mutable std::vector<double> ux_, uxxx_, g_;
};

class CamassaHolmSystem final : public SemiDiscreteSystem {
 public:
  CamassaHolmSystem(const CamassaHolmModel& m, const Discretization& disc,
                    std::shared_ptr<HelmholtzSolver> solver);

  std::size_t n_components() const override { return 1; }
  const Discretization& discretization() const override { return disc_; }
  void evaluate(std::span<const double> u, std::span<double> rate) const override;
  double stable_dt(std::span<const double> u, double cfl) const override;

 private:
  CamassaHolmModel model_;
  Discretization disc_;
  std::shared_ptr<HelmholtzSolver> solver_;
  CubicSystem explicit_part_;
  Differentiator d1_, d2_, d3_;
  mutable std::vector<double> ux_, uxx_, uxxx_;
};

}  // namespace ncshock
