#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncshock/grid.hpp"
#include "ncshock/system.hpp"

namespace ncshock {

/// Explicit Runge-Kutta coefficients. `a` is s x s row-major and strictly
/// lower triangular.
struct ButcherTableau {
  std::string name;
  int stages = 0;
  int declared_order = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  double a_at(int k, int j) const {
    return a[static_cast<std::size_t>(k * stages + j)];
  }
};

/// "euler", "rk4", "rk6" or "rk8"; ConfigError otherwise.
ButcherTableau builtin_tableau(const std::string& name);

/// Checks sum(b) = 1, strict lower-triangularity and c_k = sum_j a_kj.
void validate(const ButcherTableau& tab);

using RhsFunction =
    std::function<void(std::span<const double> state, std::span<double> rate)>;

/// Reusable stage storage for one state size.
class RungeKuttaStepper {
 public:
  RungeKuttaStepper(const ButcherTableau& tab, std::size_t size);

  /// state <- state + dt * sum_k b_k g^k, with
  /// g^k = R(state + dt * sum_{j<k} a_kj g^j).
  /// Throws BlowupError naming the stage when a stage value is non-finite.
  void step(std::span<double> state, const RhsFunction& rhs, double dt,
            double time = 0.0);

  const ButcherTableau& tableau() const { return tab_; }

 private:
  ButcherTableau tab_;
  std::vector<std::vector<double>> stages_;
  std::vector<double> trial_;
};

/// One step on a copy of `state`.
std::vector<double> rk_step(std::span<const double> state, const RhsFunction& rhs,
                            double dt, const ButcherTableau& tab);

/// Richardson order estimate on u' = -u, u(0) = 1 over [0, 4]: dt is halved
/// from 1 until the error drops below 1e-12, and the least-squares slope of
/// log(error) against log(dt) is fitted over the three finest levels.
double verify_order(const ButcherTableau& tab);

struct RunConfig {
  double cfl = 0.5;
  double t_end = 0.0;
  std::optional<double> dt_override;
  std::vector<double> output_times;  ///< sorted, each <= t_end
  std::size_t max_steps = 50'000'000;
};

void validate(const RunConfig& cfg);

/// dt = cfl * min(stability limits) from the system, unless overridden.
double compute_dt(const SemiDiscreteSystem& system, std::span<const double> state,
                  const RunConfig& cfg);

struct Snapshot {
  double time = 0.0;
  StateField state;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  std::size_t steps = 0;
  double dt = 0.0;
};

enum class FailureKind { blowup, domain, linear_solve };

/// A run aborted by a numerical failure; carries everything computed before
/// the failure.
class RunAborted : public std::runtime_error {
 public:
  RunAborted(const std::string& what, FailureKind kind, double time,
             Trajectory partial)
      : std::runtime_error(what), kind_(kind), time_(time), partial_(std::move(partial)) {}

  FailureKind kind() const { return kind_; }
  double time() const { return time_; }
  const Trajectory& partial() const { return partial_; }

 private:
  FailureKind kind_;
  double time_;
  Trajectory partial_;
};

/// Fixed-step integration from t = 0. Snapshots (deep copies) are recorded at
/// t = 0 and at every output time; the last step before each output time is
/// shortened to land on it exactly. When output_times is empty only the
/// initial and final states are recorded.
Trajectory integrate(const SemiDiscreteSystem& system, const StateField& initial,
                     const ButcherTableau& tab, const RunConfig& cfg);

}  // namespace ncshock
