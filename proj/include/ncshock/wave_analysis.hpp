#pragma once

#include <cstddef>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncshock/flux.hpp"
#include "ncshock/grid.hpp"
#include "ncshock/psystem.hpp"
#include "ncshock/runge_kutta.hpp"

namespace ncshock {

struct Plateau {
  std::size_t i_start = 0;
  std::size_t i_end = 0;  ///< inclusive
  double value = 0.0;     ///< mean over the run
  std::size_t width = 0;
};

/// Maximal runs of nodes whose successive differences and total spread both
/// stay within `tol`, at least `min_width` nodes long, left to right. Nodes
/// with mask[i] == 0 never belong to a plateau (an empty mask admits all).
std::vector<Plateau> detect_plateaus(std::span<const double> field, double tol,
                                     std::size_t min_width,
                                     std::span<const std::uint8_t> mask = {});

enum class Structure {
  classical_only,
  rarefaction_plus_nonclassical,
  double_shock,
  stationary_shock,
  moving_nonclassical,
  saturated_nonclassical,
  unresolved,
};

const char* to_string(Structure s);
Structure structure_from_string(const std::string& s);

enum class LaxType { classical, undercompressive, expansive };
const char* to_string(LaxType t);

enum class WaveKind { shock, rarefaction };

/// One transition between two neighbouring plateaus.
struct Wave {
  WaveKind kind = WaveKind::shock;
  std::size_t i_left = 0, i_right = 0;  ///< node range of the transition
  double left = 0.0, right = 0.0;       ///< adjacent plateau values
  double speed = 0.0;                   ///< steepest-gradient tracking
  LaxType lax = LaxType::classical;
};

struct WaveReport {
  Structure structure = Structure::unresolved;
  std::vector<Plateau> plateaus;  ///< of u (scalar) or tau (p-system)
  std::vector<Wave> waves;
  std::optional<std::pair<double, double>> kinetic_pair;
  std::vector<double> speeds;
  std::optional<double> dissipation;
  double oscillation = 0.0;  ///< largest overshoot beyond adjacent plateaus
  std::string diagnostics;

  /// Speed of the nonclassical front, when there is one.
  std::optional<double> nonclassical_speed() const;
  std::string describe() const;
};

/// Rankine-Hugoniot speed (f(u+) - f(u-)) / (u+ - u-).
double shock_speed_rh(double u_minus, double u_plus, const FluxFn& flux);

/// (u+ - u-)^2 (u+^2 - u-^2)
double entropy_dissipation_cubic(double u_minus, double u_plus);

/// -s/2 [u^2] + 2/3 [u^3] - 3/4 [u^4]. With plus_quartic the quartic term
/// enters with a plus sign instead, for comparison only: that variant does
/// not vanish on the zero-dissipation curve.
double entropy_dissipation_thin_film(double u_minus, double u_plus,
                                     bool plus_quartic = false);

inline double cubic_abar(double alpha) { return std::sqrt(8.0 / (3.0 * alpha)); }

/// Exact kinetic function of u_t + (u^3)_x = eps u_xx + alpha eps^2 u_xxx.
double exact_kinetic_cubic(double u_minus, double alpha);

/// Admissible right states from u_minus: an interval plus, when |u-| > abar,
/// one isolated nonclassical state.
struct ShockSet {
  double lo = 0.0, hi = 0.0;
  bool lo_closed = true, hi_closed = false;
  std::optional<double> isolated;

  bool contains(double u, double tol = 0.0) const;
};

ShockSet shock_set_cubic(double u_minus, double alpha);

/// (1 - u)/2, defined on (0, 1).
double thin_film_tangent(double u);
/// 2/3 - u, defined on (0, 2/3).
double thin_film_zero_dissipation(double u);

/// classical iff f'(u-) >= s >= f'(u+); undercompressive when s lies on the
/// same side of both characteristic speeds (slow for the cubic, fast for the
/// thin film); expansive otherwise. A relative slack of 1e-9 treats
/// characteristic jumps as classical.
LaxType lax_check(double u_minus, double u_plus, const FluxFn& flux);

/// Same test for a 1-wave (lambda = -sqrt(-p')) or 2-wave of the p-system;
/// states in the elliptic region are never classical.
LaxType lax_check_psystem(double tau_minus, double tau_plus, double speed,
                          const PressureLaw& law, int family);

struct ClassifyOptions {
  double tol_plateau = -1.0;  ///< <= 0: 1e-3 (|left| + |right|)
  std::size_t min_width = 10;
  double tol_speed = -1.0;    ///< <= 0: 0.02 * the largest data speed scale
  /// Neighbouring plateaus closer than min_jump * |left - right| are ripples
  /// of one state (dispersive wakes), not separate waves.
  double min_jump = 0.005;
};

/// Resolved tolerances for a given Riemann datum.
double plateau_tolerance(const ClassifyOptions& opt, double left, double right);

/// Wave structure of a scalar Riemann solution from at least two snapshots
/// at distinct positive times. Plateau cores are taken from the last
/// snapshot, masked to nodes that did not move since the one before it, and
/// grown over neighbouring nodes within tolerance; fronts are then
/// tracked back to the earliest snapshot at or after 0.65 of the final time.
/// Output times {0.5, 0.7, 0.9, 0.98, 1} * t_end work well.
WaveReport classify_scalar(std::span<const Snapshot> snapshots, const Grid1D& grid,
                           const FluxFn& flux, double u_left, double u_right,
                           const ClassifyOptions& opt = {});

/// Wave structure of a p-system Riemann solution, analysed on tau. The
/// kinetic pair is (tau-, tau+) across the phase-boundary shock: the wave
/// whose states straddle the elliptic region (else the largest undercompressive
/// jump). When a slow wave trails it without a plateau of its own, the state
/// is read at the shoulder of the steep jump. Structures are stationary_shock or
/// moving_nonclassical; saturation is a property of a scan, see
/// mark_saturation.
WaveReport classify_psystem(std::span<const Snapshot> snapshots,
                            const Grid1D& grid, const PressureLaw& law,
                            double tau_left, double u_left, double tau_right,
                            double u_right, const ClassifyOptions& opt = {});

/// Scan ordered by decreasing u_L: a moving nonclassical report whose kinetic
/// pair equals (within tol) that of the preceding report becomes
/// saturated_nonclassical.
void mark_saturation(std::span<WaveReport> scan, double tol);

}  // namespace ncshock
