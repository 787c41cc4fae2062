#include "ncshock/runge_kutta.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ncshock/errors.hpp"

namespace ncshock {

namespace {

ButcherTableau make_tableau(std::string name, int order,
                            std::vector<std::vector<double>> rows,
                            std::vector<double> b) {
  ButcherTableau t;
  t.name = std::move(name);
  t.stages = static_cast<int>(b.size());
  t.declared_order = order;
  t.a.assign(b.size() * b.size(), 0.0);
  t.c.assign(b.size(), 0.0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t j = 0; j < rows[k].size(); ++j) {
      t.a[k * b.size() + j] = rows[k][j];
      t.c[k] += rows[k][j];
    }
  }
  t.b = std::move(b);
  return t;
}

}  // namespace

ButcherTableau builtin_tableau(const std::string& name) {
  if (name == "euler") return make_tableau("euler", 1, {{}}, {1.0});
  if (name == "rk4") {
    return make_tableau("rk4", 4, {{}, {0.5}, {0.0, 0.5}, {0.0, 0.0, 1.0}},
                        {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0});
  }
  if (name == "rk6") {
    // Butcher's seven-stage sixth-order method (1964).
    return make_tableau(
        "rk6", 6,
        {{},
         {1.0 / 3.0},
         {0.0, 2.0 / 3.0},
         {1.0 / 12.0, 1.0 / 3.0, -1.0 / 12.0},
         {-1.0 / 16.0, 9.0 / 8.0, -3.0 / 16.0, -3.0 / 8.0},
         {0.0, 9.0 / 8.0, -3.0 / 8.0, -3.0 / 4.0, 1.0 / 2.0},
         {9.0 / 44.0, -9.0 / 11.0, 63.0 / 44.0, 18.0 / 11.0, 0.0, -16.0 / 11.0}},
        {11.0 / 120.0, 0.0, 27.0 / 40.0, 27.0 / 40.0, -4.0 / 15.0, -4.0 / 15.0,
         11.0 / 120.0});
  }
  if (name == "rk8") {
    // Cooper and Verner's eleven-stage eighth-order method (1972).
    const double s = std::sqrt(21.0);
    return make_tableau(
        "rk8", 8,
        {{},
         {1.0 / 2.0},
         {1.0 / 4.0, 1.0 / 4.0},
         {1.0 / 7.0, (-7.0 - 3.0 * s) / 98.0, (21.0 + 5.0 * s) / 49.0},
         {(11.0 + s) / 84.0, 0.0, (18.0 + 4.0 * s) / 63.0, (21.0 - s) / 252.0},
         {(5.0 + s) / 48.0, 0.0, (9.0 + s) / 36.0, (-231.0 + 14.0 * s) / 360.0,
          (63.0 - 7.0 * s) / 80.0},
         {(10.0 - s) / 42.0, 0.0, (-432.0 + 92.0 * s) / 315.0,
          (633.0 - 145.0 * s) / 90.0, (-504.0 + 115.0 * s) / 70.0,
          (63.0 - 13.0 * s) / 35.0},
         {1.0 / 14.0, 0.0, 0.0, 0.0, (14.0 - 3.0 * s) / 126.0,
          (13.0 - 3.0 * s) / 63.0, 1.0 / 9.0},
         {1.0 / 32.0, 0.0, 0.0, 0.0, (91.0 - 21.0 * s) / 576.0, 11.0 / 72.0,
          (-385.0 - 75.0 * s) / 1152.0, (63.0 + 13.0 * s) / 128.0},
         {1.0 / 14.0, 0.0, 0.0, 0.0, 1.0 / 9.0, (-733.0 - 147.0 * s) / 2205.0,
          (515.0 + 111.0 * s) / 504.0, (-51.0 - 11.0 * s) / 56.0,
          (132.0 + 28.0 * s) / 245.0},
         {0.0, 0.0, 0.0, 0.0, (-42.0 + 7.0 * s) / 18.0, (-18.0 + 28.0 * s) / 45.0,
          (-273.0 - 53.0 * s) / 72.0, (301.0 + 53.0 * s) / 72.0,
          (28.0 - 28.0 * s) / 45.0, (49.0 - 7.0 * s) / 18.0}},
        {1.0 / 20.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 49.0 / 180.0, 16.0 / 45.0,
         49.0 / 180.0, 1.0 / 20.0});
  }
  throw ConfigError("unknown Runge-Kutta scheme '" + name +
                    "' (expected euler, rk4, rk6 or rk8)");
}

void validate(const ButcherTableau& tab) {
  const auto s = static_cast<std::size_t>(tab.stages);
  if (tab.stages < 1 || tab.a.size() != s * s || tab.b.size() != s || tab.c.size() != s)
    throw ConfigError("tableau '" + tab.name + "': inconsistent dimensions");
  const double bsum = std::accumulate(tab.b.begin(), tab.b.end(), 0.0);
  if (std::abs(bsum - 1.0) > 1e-14)
    throw ConfigError("tableau '" + tab.name + "': weights do not sum to one");
  for (int k = 0; k < tab.stages; ++k) {
    double row = 0.0;
    for (int j = 0; j < tab.stages; ++j) {
      if (j >= k && tab.a_at(k, j) != 0.0)
        throw ConfigError("tableau '" + tab.name + "' is not explicit");
      row += tab.a_at(k, j);
    }
    if (std::abs(row - tab.c[static_cast<std::size_t>(k)]) > 1e-14)
      throw ConfigError("tableau '" + tab.name + "': c is not the row sum of a");
  }
}

RungeKuttaStepper::RungeKuttaStepper(const ButcherTableau& tab, std::size_t size)
    : tab_(tab),
      stages_(static_cast<std::size_t>(tab.stages), std::vector<double>(size)),
      trial_(size) {
  validate(tab_);
}

void RungeKuttaStepper::step(std::span<double> state, const RhsFunction& rhs,
                             double dt, double time) {
  const std::size_t n = state.size();
  if (n != trial_.size()) throw ConfigError("stepper: state size changed");
  if (!(dt > 0.0)) throw ConfigError("stepper: dt must be positive");
  for (int k = 0; k < tab_.stages; ++k) {
    std::copy(state.begin(), state.end(), trial_.begin());
    for (int j = 0; j < k; ++j) {
      const double coef = dt * tab_.a_at(k, j);
      if (coef == 0.0) continue;
      const auto& g = stages_[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < n; ++i) trial_[i] += coef * g[i];
    }
    auto& gk = stages_[static_cast<std::size_t>(k)];
    try {
      rhs(trial_, gk);
    } catch (const BlowupError& e) {
      throw BlowupError(std::string(e.what()) + " (stage " + std::to_string(k + 1) +
                            ", t=" + std::to_string(time) + ")",
                        e.node(), time, k + 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(gk[i]))
        throw BlowupError("non-finite stage value at node " + std::to_string(i) +
                              " (stage " + std::to_string(k + 1) +
                              ", t=" + std::to_string(time) + ")",
                          i, time, k + 1);
    }
  }
  for (int k = 0; k < tab_.stages; ++k) {
    const double coef = dt * tab_.b[static_cast<std::size_t>(k)];
    if (coef == 0.0) continue;
    const auto& g = stages_[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < n; ++i) state[i] += coef * g[i];
  }
}

std::vector<double> rk_step(std::span<const double> state, const RhsFunction& rhs,
                            double dt, const ButcherTableau& tab) {
  std::vector<double> out(state.begin(), state.end());
  RungeKuttaStepper(tab, out.size()).step(out, rhs, dt);
  return out;
}

double verify_order(const ButcherTableau& tab) {
  const RhsFunction decay = [](std::span<const double> u, std::span<double> r) {
    r[0] = -u[0];
  };
  const double t_end = 4.0;
  std::vector<double> log_dt, log_err;
  for (int level = 0; level <= 12; ++level) {
    const int steps = 4 << level;
    const double dt = t_end / steps;
    RungeKuttaStepper stepper(tab, 1);
    std::vector<double> u{1.0};
    for (int k = 0; k < steps; ++k) stepper.step(u, decay, dt);
    const double err = std::abs(u[0] - std::exp(-t_end));
    // Below this the error is dominated by round-off.
    if (err < 1e-12) break;
    log_dt.push_back(std::log(dt));
    log_err.push_back(std::log(err));
  }
  // The finest three levels are the most asymptotic.
  if (log_dt.size() > 3) {
    log_dt.erase(log_dt.begin(), log_dt.end() - 3);
    log_err.erase(log_err.begin(), log_err.end() - 3);
  }
  const auto m = static_cast<double>(log_dt.size());
  if (m < 2) return 0.0;
  const double mx = std::accumulate(log_dt.begin(), log_dt.end(), 0.0) / m;
  const double my = std::accumulate(log_err.begin(), log_err.end(), 0.0) / m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < log_dt.size(); ++i) {
    sxy += (log_dt[i] - mx) * (log_err[i] - my);
    sxx += (log_dt[i] - mx) * (log_dt[i] - mx);
  }
  return sxy / sxx;
}

void validate(const RunConfig& cfg) {
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0))
    throw ConfigError("cfl must lie in (0, 1]");
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end))
    throw ConfigError("t_end must be finite and non-negative");
  if (cfg.dt_override && !(*cfg.dt_override > 0.0))
    throw ConfigError("dt_override must be positive");
  if (!std::is_sorted(cfg.output_times.begin(), cfg.output_times.end()))
    throw ConfigError("output_times must be sorted");
  for (double t : cfg.output_times)
    if (t < 0.0 || t > cfg.t_end)
      throw ConfigError("output time outside [0, t_end]");
}

double compute_dt(const SemiDiscreteSystem& system, std::span<const double> state,
                  const RunConfig& cfg) {
  if (cfg.dt_override) return *cfg.dt_override;
  return system.stable_dt(state, cfg.cfl);
}

Trajectory integrate(const SemiDiscreteSystem& system, const StateField& initial,
                     const ButcherTableau& tab, const RunConfig& cfg) {
  validate(cfg);
  const std::size_t n = system.discretization().grid.n();
  if (initial.n_nodes() != n || initial.n_components() != system.n_components())
    throw ConfigError("initial state does not match the discretization");

  Trajectory traj;
  traj.snapshots.push_back({0.0, initial});
  if (cfg.t_end == 0.0) return traj;

  std::vector<double> targets;
  for (double t : cfg.output_times)
    if (t > 0.0 && (targets.empty() || t > targets.back())) targets.push_back(t);
  if (targets.empty() || targets.back() < cfg.t_end) targets.push_back(cfg.t_end);

  StateField state = initial;
  double time = 0.0;
  try {
    traj.dt = compute_dt(system, state.data(), cfg);
    if (!(traj.dt > 0.0) || !std::isfinite(traj.dt))
      throw ConfigError("could not determine a positive time step");
    RungeKuttaStepper stepper(tab, state.values().size());
    const RhsFunction rhs = [&system](std::span<const double> u, std::span<double> r) {
      system.evaluate(u, r);
    };
    for (double target : targets) {
      while (time < target) {
        // Absorb a final sliver into the previous step rather than taking a
        // step of negligible length.
        double dt = traj.dt;
        if (target - time <= dt * (1.0 + 1e-9)) dt = target - time;
        stepper.step(state.data(), rhs, dt, time);
        time = (dt == target - time) ? target : time + dt;
        if (++traj.steps > cfg.max_steps)
          throw ConfigError("step budget exceeded (" + std::to_string(cfg.max_steps) + ")");
      }
      traj.snapshots.push_back({target, state});
    }
  } catch (const BlowupError& e) {
    throw RunAborted(e.what(), FailureKind::blowup, time, std::move(traj));
  } catch (const DomainError& e) {
    throw RunAborted(e.what(), FailureKind::domain, time, std::move(traj));
  } catch (const LinearSolveError& e) {
    throw RunAborted(e.what(), FailureKind::linear_solve, time, std::move(traj));
  }
  return traj;
}

}  // namespace ncshock
