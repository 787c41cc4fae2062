#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncshock/flux.hpp"
#include "ncshock/psystem.hpp"
#include "ncshock/runge_kutta.hpp"
#include "ncshock/scalar_models.hpp"
#include "ncshock/system.hpp"
#include "ncshock/wave_analysis.hpp"

namespace ncshock {

enum class ModelKind { cubic, thin_film, camassa_holm, psystem };

const char* to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

struct ModelSpec {
  ModelKind kind = ModelKind::cubic;
  double eps = 0.0;    ///< cubic, Camassa-Holm, p-system
  double alpha = 0.0;  ///< cubic, Camassa-Holm, p-system
  double delta = 0.1;  ///< thin film
  PressureLaw pressure = PressureLaw::vdw_rt();
};

FluxFn flux_for(ModelKind k);

/// One run's system. The Helmholtz solver is only used by Camassa-Holm.
std::unique_ptr<SemiDiscreteSystem> make_system(
    const ModelSpec& m, const Discretization& disc,
    std::shared_ptr<HelmholtzSolver> solver = nullptr);

enum class Profile { tanh_single, tanh_double };

const char* to_string(Profile p);
Profile profile_from_string(const std::string& s);

/// Riemann data smoothed by tanh profiles.
///   tanh_single: v(x) = v_R + (v_L - v_R) (tanh(-(x - x0)/w) + 1)/2
///   tanh_double: two such steps, v_L -> middle centred at x1 and
///                middle -> v_R centred at x2, switching at (x1 + x2)/2.
/// For the p-system both tau and u follow the profile (the middle value
/// applies to the scalar case only; tau and u use their own midpoints).
struct RiemannProblem {
  ModelSpec model;
  double u_left = 0.0, u_right = 0.0;
  double tau_left = 1.0, tau_right = 1.0;
  Profile profile = Profile::tanh_single;
  double x0 = 100.0;
  double width = 1.0;
  double x1 = 80.0, x2 = 130.0, middle = 0.35;
  Grid1D grid{0.0, 999.0, 1000};
  BoundaryTreatment boundary = BoundaryTreatment::constant();
};

/// Throws ConfigError when a tanh tail does not reach its far-field state to
/// 1e-10 inside the domain.
StateField build_initial_data(const RiemannProblem& p);

/// Signed range of characteristic speeds the solution can carry, from the
/// data (slowest <= 0 <= fastest).
struct SpeedRange {
  double slowest = 0.0, fastest = 0.0;
};
SpeedRange characteristic_speeds(const RiemannProblem& p);

/// Largest characteristic speed magnitude.
double max_wave_speed(const RiemannProblem& p);

/// End time such that no wave reaches a boundary: 0.8 of the shorter of
/// (distance to the left boundary over the fastest left-going speed) and
/// (distance to the right boundary over the fastest right-going speed).
double default_t_end(const RiemannProblem& p);

/// One row of a kinetic table. Missing values are NaN; the exact reference
/// only exists for the cubic model with alpha > 0. For scalar models speed is
/// the Rankine-Hugoniot speed of (u_minus, u_plus); for the p-system it is the
/// tracked speed of the phase boundary.
struct KineticSample {
  std::string model;
  std::string profile_id;
  int q = 0;
  double alpha = 0.0, eps = 0.0, h = 0.0, c = 0.0;
  double u_minus = 0.0, u_plus = 0.0, speed = 0.0, dissipation = 0.0;
  std::optional<double> exact_u_plus;
  std::optional<double> abs_error;
  std::string structure;
  double t_end = 0.0;
  std::string status;

  bool operator==(const KineticSample& o) const;
};

using KineticTable = std::vector<KineticSample>;

struct RunResult {
  WaveReport report;
  KineticSample sample;
  Trajectory trajectory;
  std::optional<FailureKind> failure;
  std::string failure_reason;
};

/// Integrates the problem, classifies the final snapshots and fills one
/// kinetic row. Numerical failures are caught and reported in the row
/// (structure unresolved, status naming the failure); configuration errors
/// propagate. When cfg.output_times is empty the classifier's default
/// frames {0.5, 0.7, 0.9, 0.98, 1} * t_end are used.
RunResult run_single(const RiemannProblem& problem, int q, const ButcherTableau& tab,
                     RunConfig cfg, const ClassifyOptions& classify = {},
                     std::shared_ptr<HelmholtzSolver> solver = nullptr);

/// Swept parameters: u_L (alias u_minus), u_R (u_plus), tau_L, tau_R, alpha,
/// eps, c (eps = c h), delta, eta (delta = eta h).
struct SweepConfig {
  std::string parameter = "u_L";
  std::vector<double> values;
  std::vector<int> orders{6};
  RiemannProblem base;
  RunConfig run;  ///< t_end <= 0 picks default_t_end per row
  std::string scheme = "rk4";
  ClassifyOptions classify;
  unsigned workers = 0;  ///< 0: hardware concurrency
};

void validate(const SweepConfig& cfg);

/// Applies one swept value to a copy of the base problem.
RiemannProblem with_parameter(const RiemannProblem& base, const std::string& name,
                              double value);

struct SweepResult {
  KineticTable table;  ///< sorted by swept value, then q
  std::vector<WaveReport> reports;
  std::vector<double> swept;  ///< swept value per row
};

/// Runs every (value, q) pair as an independent task; failures are recorded
/// per row. Output order is deterministic.
SweepResult sweep_kinetic(const SweepConfig& cfg);

/// Monotonicity of u_plus in u_minus per q over resolved nonclassical rows,
/// as '#'-prefixed text lines.
std::string monotonicity_summary(const KineticTable& table);

struct ErrorMetrics {
  int q = 0;
  std::size_t rows = 0;
  double max_abs_error = 0.0;
  double mean_abs_error = 0.0;
};

struct ExactComparison {
  bool applicable = false;
  std::vector<ErrorMetrics> per_q;  ///< ascending q
  bool monotone_in_q = false;       ///< max error non-increasing as q grows
  std::string verdict;              ///< pass, fail or not-applicable
};

/// Re-evaluates the exact kinetic function for every resolved cubic row.
ExactComparison compare_exact(const KineticTable& table, double alpha);

inline const char* kCsvHeader =
    "model,profile_id,q,alpha,eps,h,c,u_minus,u_plus,speed,dissipation,"
    "exact_u_plus,abs_error,structure,t_end,status";

/// 17 significant digits; missing optionals are empty fields.
std::string emit_csv(const KineticTable& table);
/// Lines starting with '#' are ignored.
KineticTable parse_csv(const std::string& text);

enum class FigureKind { kinetic, dissipation_vs_speed, wave_structure };
FigureKind figure_kind_from_string(const std::string& s);

/// Gnuplot script for a CSV table (or, for wave_structure, a field dump)
/// at `data_path`. Throws ConfigError on an empty table.
std::string emit_gnuplot(const KineticTable& table, FigureKind kind,
                         const std::string& data_path);

/// Whitespace-separated columns x, component 0, component 1, ...
void write_field_dump(std::ostream& os, const Grid1D& grid, const StateField& state);

}  // namespace ncshock
