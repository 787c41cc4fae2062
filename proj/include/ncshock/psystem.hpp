#pragma once

#include <span>
#include <string>
#include <vector>

#include "ncshock/stencil.hpp"
#include "ncshock/system.hpp"

namespace ncshock {

enum class PressureKind { vdw_rt, vdw_zeta, piecewise_linear };

/// Pressure laws of van der Waals type.
///   vdw_rt:           p = R T / (tau - 1/3) - 3 / tau^2
///   vdw_zeta:         p = (3 tau - 1)^-(1 + 1/zeta) - 3 / tau^2
///   piecewise_linear: four affine pieces with breakpoints 1, 2, 4
/// Both van der Waals laws live on tau > 1/3; evaluating outside throws
/// DomainError.
class PressureLaw {
 public:
  static PressureLaw vdw_rt(double r = 8.0 / 3.0, double t = 1.005);
  static PressureLaw vdw_zeta(double zeta);
  static PressureLaw piecewise_linear();

  PressureKind kind() const { return kind_; }
  double r() const { return r_; }
  double t() const { return t_; }
  double zeta() const { return zeta_; }

  double operator()(double tau) const;
  /// dp/dtau; the piecewise-linear law takes the left slope at breakpoints.
  double derivative(double tau) const;
  double second_derivative(double tau) const;
  bool in_domain(double tau) const;
  /// Characteristic speed sqrt(-p'(tau)); NaN in the elliptic region p' > 0.
  double sound_speed(double tau) const;

  std::string describe() const;

 private:
  PressureKind kind_ = PressureKind::vdw_rt;
  double r_ = 8.0 / 3.0;
  double t_ = 1.005;
  double zeta_ = 1.0;
};

double pressure_eval(const PressureLaw& law, double tau);

/// Sign changes of a centred finite-difference p'' sampled on [0.4, 10],
/// refined by bisection to 1e-8. For the piecewise-linear law: breakpoints
/// whose kink convexity differs from the preceding kink.
std::vector<double> find_inflection_points(const PressureLaw& law);

/// Roots of p' on [0.34, 10] (edges of the elliptic region), bisected to 1e-12.
std::vector<double> find_spinodal_points(const PressureLaw& law);

struct PSystemModel {
  PressureLaw pressure = PressureLaw::vdw_rt();
  double eps = 0.0;
  double alpha = 0.0;
};

void validate(const PSystemModel& m);

/// State layout: component 0 is tau (specific volume), component 1 is u.
///   tau_t = D1[u]
///   u_t   = -D1[p(tau)] + eps D2[u] - alpha eps^2 D3[tau]
class PSystem final : public SemiDiscreteSystem {
 public:
  PSystem(const PSystemModel& m, const Discretization& disc);

  std::size_t n_components() const override { return 2; }
  const Discretization& discretization() const override { return disc_; }
  void evaluate(std::span<const double> state, std::span<double> rate) const override;
  double stable_dt(std::span<const double> state, double cfl) const override;
  const PSystemModel& model() const { return model_; }

 private:
  PSystemModel model_;
  Discretization disc_;
  Differentiator d1_, d2_, d3_;
  mutable std::vector<double> p_, work_;
};

/// Increment (tau_t, u_t) for a two-component state.
std::vector<double> rhs_psystem(std::span<const double> state,
                                const PSystemModel& m, int q,
                                const Grid1D& grid, BoundaryTreatment b);

}  // namespace ncshock
