#include "ncshock/psystem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "ncshock/errors.hpp"

namespace ncshock {

namespace {

struct Piece {
  double upper;  // piece applies for tau <= upper
  double slope;
  double intercept;
};

// Continuous piecewise-linear law with breakpoints 1, 2, 4 (values 3, 7, 2).
const std::vector<Piece>& linear_pieces() {
  static const std::vector<Piece> pieces = {
      {1.0, -7.0, 10.0},
      {2.0, 4.0, -1.0},
      {4.0, -2.5, 12.0},
      {std::numeric_limits<double>::infinity(), -0.2, 2.8},
  };
  return pieces;
}

const Piece& piece_for(double tau) {
  for (const auto& p : linear_pieces())
    if (tau <= p.upper) return p;
  return linear_pieces().back();
}

std::vector<double> bisect_sign_changes(const std::function<double(double)>& g,
                                        double lo, double hi, double step,
                                        double tol) {
  std::vector<double> roots;
  double a = lo;
  double ga = g(a);
  for (double b = lo + step; b <= hi + 0.5 * step; b += step) {
    const double gb = g(b);
    if (std::isfinite(ga) && std::isfinite(gb) && ga * gb < 0.0) {
      double x0 = a, x1 = b, g0 = ga;
      while (x1 - x0 > tol) {
        const double xm = 0.5 * (x0 + x1);
        const double gm = g(xm);
        if (gm == 0.0) { x0 = x1 = xm; break; }
        if ((gm < 0.0) == (g0 < 0.0)) {
          x0 = xm;
          g0 = gm;
        } else {
          x1 = xm;
        }
      }
      roots.push_back(0.5 * (x0 + x1));
    }
    a = b;
    ga = gb;
  }
  return roots;
}

}  // namespace

PressureLaw PressureLaw::vdw_rt(double r, double t) {
  if (!(r > 0.0) || !(t > 0.0))
    throw ConfigError("vdw_rt pressure: R and T must be positive");
  PressureLaw p;
  p.kind_ = PressureKind::vdw_rt;
  p.r_ = r;
  p.t_ = t;
  return p;
}

PressureLaw PressureLaw::vdw_zeta(double zeta) {
  if (!(zeta > 0.0)) throw ConfigError("vdw_zeta pressure: zeta must be positive");
  PressureLaw p;
  p.kind_ = PressureKind::vdw_zeta;
  p.zeta_ = zeta;
  return p;
}

PressureLaw PressureLaw::piecewise_linear() {
  const auto& pieces = linear_pieces();
  for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
    const double tau = pieces[k].upper;
    const double left = pieces[k].slope * tau + pieces[k].intercept;
    const double right = pieces[k + 1].slope * tau + pieces[k + 1].intercept;
    if (std::abs(left - right) > 1e-12)
      throw ConfigError("piecewise-linear pressure is discontinuous at tau=" +
                        std::to_string(tau));
  }
  PressureLaw p;
  p.kind_ = PressureKind::piecewise_linear;
  return p;
}

bool PressureLaw::in_domain(double tau) const {
  if (!std::isfinite(tau)) return false;
  if (kind_ == PressureKind::piecewise_linear) return tau > 0.0;
  return tau > 1.0 / 3.0;
}

double PressureLaw::operator()(double tau) const {
  if (!in_domain(tau))
    throw DomainError("specific volume " + std::to_string(tau) +
                      " outside the pressure-law domain");
  switch (kind_) {
    case PressureKind::vdw_rt:
      return r_ * t_ / (tau - 1.0 / 3.0) - 3.0 / (tau * tau);
    case PressureKind::vdw_zeta:
      return std::pow(3.0 * tau - 1.0, -(1.0 + 1.0 / zeta_)) - 3.0 / (tau * tau);
    case PressureKind::piecewise_linear: {
      const auto& p = piece_for(tau);
      return p.slope * tau + p.intercept;
    }
  }
  return 0.0;
}

double PressureLaw::derivative(double tau) const {
  if (!in_domain(tau))
    throw DomainError("specific volume " + std::to_string(tau) +
                      " outside the pressure-law domain");
  switch (kind_) {
    case PressureKind::vdw_rt: {
      const double s = tau - 1.0 / 3.0;
      return -r_ * t_ / (s * s) + 6.0 / (tau * tau * tau);
    }
    case PressureKind::vdw_zeta: {
      const double g = 1.0 + 1.0 / zeta_;
      return -3.0 * g * std::pow(3.0 * tau - 1.0, -g - 1.0) + 6.0 / (tau * tau * tau);
    }
    case PressureKind::piecewise_linear:
      return piece_for(tau).slope;
  }
  return 0.0;
}

double PressureLaw::second_derivative(double tau) const {
  if (!in_domain(tau))
    throw DomainError("specific volume " + std::to_string(tau) +
                      " outside the pressure-law domain");
  switch (kind_) {
    case PressureKind::vdw_rt: {
      const double s = tau - 1.0 / 3.0;
      return 2.0 * r_ * t_ / (s * s * s) - 18.0 / std::pow(tau, 4);
    }
    case PressureKind::vdw_zeta: {
      const double g = 1.0 + 1.0 / zeta_;
      return 9.0 * g * (g + 1.0) * std::pow(3.0 * tau - 1.0, -g - 2.0) -
             18.0 / std::pow(tau, 4);
    }
    case PressureKind::piecewise_linear:
      return 0.0;
  }
  return 0.0;
}

double PressureLaw::sound_speed(double tau) const {
  const double dp = derivative(tau);
  return dp <= 0.0 ? std::sqrt(-dp) : std::numeric_limits<double>::quiet_NaN();
}

std::string PressureLaw::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case PressureKind::vdw_rt:
      os << "vdw_rt(R=" << r_ << ", T=" << t_ << ")";
      break;
    case PressureKind::vdw_zeta:
      os << "vdw_zeta(zeta=" << zeta_ << ")";
      break;
    case PressureKind::piecewise_linear:
      os << "piecewise_linear";
      break;
  }
  return os.str();
}

double pressure_eval(const PressureLaw& law, double tau) { return law(tau); }

std::vector<double> find_inflection_points(const PressureLaw& law) {
  if (law.kind() == PressureKind::piecewise_linear) {
    std::vector<double> out;
    const auto& pieces = linear_pieces();
    int previous = 0;
    for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
      const double jump = pieces[k + 1].slope - pieces[k].slope;
      const int convexity = jump > 0 ? 1 : (jump < 0 ? -1 : 0);
      if (previous != 0 && convexity != 0 && convexity != previous)
        out.push_back(pieces[k].upper);
      if (convexity != 0) previous = convexity;
    }
    return out;
  }
  const double fd = 1e-4;
  auto p2 = [&](double tau) {
    return (law(tau + fd) - 2.0 * law(tau) + law(tau - fd)) / (fd * fd);
  };
  return bisect_sign_changes(p2, 0.4, 10.0, 1e-3, 1e-8);
}

std::vector<double> find_spinodal_points(const PressureLaw& law) {
  if (law.kind() == PressureKind::piecewise_linear) {
    std::vector<double> out;
    const auto& pieces = linear_pieces();
    for (std::size_t k = 0; k + 1 < pieces.size(); ++k)
      if ((pieces[k].slope > 0) != (pieces[k + 1].slope > 0))
        out.push_back(pieces[k].upper);
    return out;
  }
  auto dp = [&](double tau) { return law.derivative(tau); };
  return bisect_sign_changes(dp, 0.34, 10.0, 1e-3, 1e-12);
}

void validate(const PSystemModel& m) {
  if (!(m.eps >= 0.0) || !std::isfinite(m.eps))
    throw ConfigError("p-system: eps must be finite and non-negative");
  if (!(m.alpha >= 0.0) || !std::isfinite(m.alpha))
    throw ConfigError("p-system: alpha must be finite and non-negative");
}

PSystem::PSystem(const PSystemModel& m, const Discretization& disc)
    : model_(m),
      disc_(disc),
      d1_(make_stencil(disc.order, 1), disc.grid, disc.boundary),
      d2_(make_stencil(disc.order, 2), disc.grid, disc.boundary),
      d3_(make_stencil(disc.order, 3), disc.grid, disc.boundary),
      p_(disc.grid.n()),
      work_(disc.grid.n()) {
  validate(m);
}

void PSystem::evaluate(std::span<const double> state,
                       std::span<double> rate) const {
  const std::size_t n = disc_.grid.n();
  const auto tau = state.subspan(0, n);
  const auto u = state.subspan(n, n);
  auto tau_t = rate.subspan(0, n);
  auto u_t = rate.subspan(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!model_.pressure.in_domain(tau[i])) {
      if (!std::isfinite(tau[i]))
        throw BlowupError("non-finite specific volume at node " + std::to_string(i), i);
      throw DomainError("specific volume " + std::to_string(tau[i]) + " at node " +
                            std::to_string(i) + " left the pressure-law domain",
                        i);
    }
    p_[i] = model_.pressure(tau[i]);
  }
  d1_.apply(u, tau_t);
  d1_.apply(p_, u_t);
  d2_.apply(u, work_);
  const double eps = model_.eps;
  for (std::size_t i = 0; i < n; ++i) u_t[i] = -u_t[i] + eps * work_[i];
  if (model_.alpha != 0.0) {
    const double ae2 = model_.alpha * eps * eps;
    d3_.apply(tau, work_);
    for (std::size_t i = 0; i < n; ++i) u_t[i] -= ae2 * work_[i];
  }
}

double PSystem::stable_dt(std::span<const double> state, double cfl) const {
  const std::size_t n = disc_.grid.n();
  const double h = disc_.grid.h();
  double speed = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    speed = std::max(speed, std::sqrt(std::abs(model_.pressure.derivative(state[i]))));
  const double eps = model_.eps;
  const double ae2 = model_.alpha * eps * eps;
  double bound = std::numeric_limits<double>::infinity();
  if (eps > 0) bound = std::min(bound, h * h / (2.0 * eps));
  if (ae2 > 0) bound = std::min(bound, h * h * h / (6.0 * ae2));
  if (speed > 0.0)
    bound = std::min(bound, h / speed);
  else if (!std::isfinite(bound))
    bound = h;
  return cfl * bound;
}

std::vector<double> rhs_psystem(std::span<const double> state,
                                const PSystemModel& m, int q,
                                const Grid1D& grid, BoundaryTreatment b) {
  std::vector<double> out(state.size());
  PSystem(m, {grid, q, b}).evaluate(state, out);
  return out;
}

}  // namespace ncshock
