#include "ncshock/wave_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ncshock/errors.hpp"

namespace ncshock {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Treats neighbouring plateaus whose values agree within tol as one state.
// Neighbours are compared with the first plateau of the group so that a
// gentle ramp cannot be chained into one state.
std::vector<Plateau> merge_close(const std::vector<Plateau>& in, double tol) {
  std::vector<Plateau> out;
  double group_first = 0.0;
  for (const auto& p : in) {
    if (!out.empty() && std::abs(group_first - p.value) <= tol) {
      auto& q = out.back();
      const double w = static_cast<double>(q.width + p.width);
      q.value = (q.value * static_cast<double>(q.width) +
                 p.value * static_cast<double>(p.width)) / w;
      q.i_end = p.i_end;
      q.width = q.i_end - q.i_start + 1;
    } else {
      out.push_back(p);
      group_first = p.value;
    }
  }
  return out;
}

// A slice of a fan: nearly every step goes the same way and the run drifts
// by a sizeable part of the tolerance, evenly rather than in an edge tail.
bool is_ramp(std::span<const double> u, std::size_t a, std::size_t b, double tol) {
  const double total = std::abs(u[b] - u[a]);
  if (b <= a || total < 0.5 * tol) return false;
  const std::size_t q1 = a + (b - a) / 4, q3 = a + 3 * (b - a) / 4;
  if (std::abs(u[q3] - u[q1]) < 0.3 * total) return false;
  const double sign = u[b] > u[a] ? 1.0 : -1.0;
  std::size_t with = 0;
  for (std::size_t i = a; i < b; ++i)
    if (sign * (u[i + 1] - u[i]) > 0.0) ++with;
  return static_cast<double>(with) >= 0.9 * static_cast<double>(b - a);
}

// Ends of the steep part of a jump in [a, b]: walking out from the steepest
// step until steps fall below 5% of it.
std::pair<std::size_t, std::size_t> jump_shoulders(std::span<const double> u,
                                                   std::size_t a, std::size_t b) {
  std::size_t k = a;
  double steepest = 0.0;
  for (std::size_t i = a; i < b; ++i) {
    const double d = std::abs(u[i + 1] - u[i]);
    if (d > steepest) {
      steepest = d;
      k = i;
    }
  }
  const double cut = 0.05 * steepest;
  std::size_t l = k, r = k + 1;
  while (l > a && std::abs(u[l] - u[l - 1]) >= cut) --l;
  while (r < b && std::abs(u[r + 1] - u[r]) >= cut) ++r;
  return {l, r};
}

// Plateau cores found under the temporal mask lose the nodes a neighbouring
// front swept during the mask interval; win them back from the unmasked field.
std::vector<Plateau> grow_cores(std::span<const double> u, std::vector<Plateau> cores,
                                double tol, std::size_t min_width) {
  std::vector<Plateau> out;
  for (std::size_t k = 0; k < cores.size(); ++k) {
    auto p = cores[k];
    double lo = u[p.i_start], hi = lo;
    for (std::size_t i = p.i_start; i <= p.i_end; ++i) {
      lo = std::min(lo, u[i]);
      hi = std::max(hi, u[i]);
    }
    const std::size_t stop_l = out.empty() ? 0 : out.back().i_end + 1;
    const std::size_t stop_r = k + 1 < cores.size() ? cores[k + 1].i_start - 1 : u.size() - 1;
    const auto fits = [&](std::size_t i, std::size_t nb) {
      const double v = u[i];
      return std::abs(v - u[nb]) <= tol && std::max(hi, v) - std::min(lo, v) <= tol;
    };
    while (p.i_start > stop_l && fits(p.i_start - 1, p.i_start)) {
      --p.i_start;
      lo = std::min(lo, u[p.i_start]);
      hi = std::max(hi, u[p.i_start]);
    }
    while (p.i_end < stop_r && fits(p.i_end + 1, p.i_end)) {
      ++p.i_end;
      lo = std::min(lo, u[p.i_end]);
      hi = std::max(hi, u[p.i_end]);
    }
    p.width = p.i_end - p.i_start + 1;
    if (p.width < min_width || is_ramp(u, p.i_start, p.i_end, tol)) continue;
    double sum = 0.0;
    for (std::size_t i = p.i_start; i <= p.i_end; ++i) sum += u[i];
    p.value = sum / static_cast<double>(p.width);
    out.push_back(p);
  }
  return out;
}

std::size_t core_width(std::size_t min_width) {
  return std::clamp<std::size_t>(min_width / 3, 1, 4);
}

std::vector<Plateau> merge_states(const std::vector<Plateau>& raw, double tol,
                                  double floor) {
  return merge_close(merge_close(raw, 2.0 * tol), std::max(2.0 * tol, floor));
}

// Position of the (left+right)/2 crossing nearest the steepest step in [a, b].
double front_position(std::span<const double> u, std::size_t a, std::size_t b,
                      double left, double right, const Grid1D& g) {
  if (b <= a) return g.x(a);
  std::size_t k = a;
  double steepest = -1.0;
  for (std::size_t i = a; i < b; ++i) {
    const double d = std::abs(u[i + 1] - u[i]);
    if (d > steepest) {
      steepest = d;
      k = i;
    }
  }
  const double level = 0.5 * (left + right);
  double best = g.x(k) + 0.5 * g.h();
  std::size_t best_dist = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = a; i < b; ++i) {
    const double d0 = u[i] - level, d1 = u[i + 1] - level;
    if (d0 * d1 > 0.0 || u[i + 1] == u[i]) continue;
    const std::size_t dist = i > k ? i - k : k - i;
    if (dist < best_dist) {
      best_dist = dist;
      best = g.x(i) + g.h() * (level - u[i]) / (u[i + 1] - u[i]);
    }
  }
  return best;
}

// Nodes strictly inside the central 80% of the transition.
std::size_t interior_count(std::span<const double> u, std::size_t a, std::size_t b,
                           double left, double right) {
  const double lo = std::min(left, right), hi = std::max(left, right);
  const double pad = 0.1 * (hi - lo);
  std::size_t count = 0;
  for (std::size_t i = a; i <= b && i < u.size(); ++i)
    if (u[i] > lo + pad && u[i] < hi - pad) ++count;
  return count;
}

double overshoot(std::span<const double> u, std::size_t a, std::size_t b,
                 double left, double right) {
  const double lo = std::min(left, right), hi = std::max(left, right);
  double o = 0.0;
  for (std::size_t i = a; i <= b && i < u.size(); ++i)
    o = std::max({o, u[i] - hi, lo - u[i]});
  return o;
}

struct Frames {
  const Snapshot* last = nullptr;
  const Snapshot* mask = nullptr;
  const Snapshot* track = nullptr;
};

Frames pick_frames(std::span<const Snapshot> snaps) {
  if (snaps.size() < 2) throw ConfigError("classification needs at least two snapshots");
  Frames f;
  f.last = &snaps.back();
  f.mask = &snaps[snaps.size() - 2];
  if (!(f.mask->time < f.last->time))
    throw ConfigError("classification needs snapshots at distinct times");
  const double t2 = f.last->time;
  for (const auto& s : snaps) {
    if (s.time > 0.0 && s.time >= 0.65 * t2 && s.time < t2) {
      f.track = &s;
      break;
    }
  }
  if (!f.track) f.track = f.mask;
  return f;
}

std::vector<std::uint8_t> stationary_mask(const Snapshot& a, const Snapshot& b,
                                          const std::vector<double>& tols) {
  const std::size_t n = a.state.n_nodes();
  std::vector<std::uint8_t> mask(n, 1);
  for (std::size_t c = 0; c < a.state.n_components(); ++c) {
    const auto ua = a.state.component(c), ub = b.state.component(c);
    for (std::size_t i = 0; i < n; ++i)
      if (!(std::abs(ua[i] - ub[i]) <= tols[c])) mask[i] = 0;
  }
  return mask;
}

// Fan test and front tracking shared by the scalar and p-system classifiers.
// `lambda` maps a state to its characteristic speed in the relevant family
// (NaN when undefined); `fallback_speed` is used when a gap cannot be matched
// in the earlier frame.
template <class Lambda, class Fallback>
std::vector<Wave> analyse_gaps(const std::vector<Plateau>& p2,
                               const std::vector<Plateau>& p1,
                               std::span<const double> u2, std::span<const double> u1,
                               double t2, double t1, const Grid1D& g, double tol,
                               Lambda lambda, Fallback fallback_speed,
                               std::string& diag, double& oscillation) {
  std::vector<Wave> waves;
  const double h = g.h();
  for (std::size_t k = 0; k + 1 < p2.size(); ++k) {
    Wave w;
    w.left = p2[k].value;
    w.right = p2[k + 1].value;
    w.i_left = p2[k].i_end;
    w.i_right = p2[k + 1].i_start;
    oscillation = std::max(oscillation, overshoot(u2, w.i_left, w.i_right, w.left, w.right));

    // Same pair of states in the earlier frame.
    std::optional<std::size_t> jl, jr;
    for (std::size_t j = 0; j < p1.size(); ++j) {
      if (std::abs(p1[j].value - w.left) <= 2.0 * tol) jl = j;
      if (jl && j > *jl && std::abs(p1[j].value - w.right) <= 2.0 * tol) {
        jr = j;
        break;
      }
    }

    const double x2 = front_position(u2, w.i_left, w.i_right, w.left, w.right, g);
    const std::size_t c2 = interior_count(u2, w.i_left, w.i_right, w.left, w.right);
    // Range of characteristic speeds over the central 80% of the jump; the
    // end values alone miss fans attached to a shock (sonic composites).
    const double d = w.right - w.left;
    double lmin = kNaN, lmax = kNaN;
    for (int j = 0; j <= 32; ++j) {
      const double l = lambda(w.left + (0.1 + 0.8 * j / 32.0) * d);
      if (!std::isfinite(l)) continue;
      lmin = std::isfinite(lmin) ? std::min(lmin, l) : l;
      lmax = std::isfinite(lmax) ? std::max(lmax, l) : l;
    }
    const double spread = lmax - lmin;
    bool fan = false;
    if (jl && jr) {
      const std::size_t a1 = p1[*jl].i_end, b1 = p1[*jr].i_start;
      const double x1 = front_position(u1, a1, b1, w.left, w.right, g);
      w.speed = (x2 - x1) / (t2 - t1);
      const std::size_t c1 = interior_count(u1, a1, b1, w.left, w.right);
      const double expected = spread * (t2 - t1) / h;
      fan = std::isfinite(expected) && expected >= 3.0 &&
            static_cast<double>(c2) - static_cast<double>(c1) >= 0.5 * expected;
    } else {
      w.speed = fallback_speed(w);
      const double expected = spread * t2 / h;
      fan = std::isfinite(expected) && expected >= 3.0 &&
            static_cast<double>(c2) >= 0.5 * expected;
      diag += "front " + std::to_string(k) + " not found in the earlier frame; ";
    }
    w.kind = fan ? WaveKind::rarefaction : WaveKind::shock;
    waves.push_back(w);
  }
  return waves;
}

}  // namespace

std::vector<Plateau> detect_plateaus(std::span<const double> field, double tol,
                                     std::size_t min_width,
                                     std::span<const std::uint8_t> mask) {
  std::vector<Plateau> out;
  const std::size_t n = field.size();
  const auto admitted = [&](std::size_t i) { return mask.empty() || mask[i] != 0; };
  const std::size_t min_w = std::max<std::size_t>(min_width, 1);

  bool open = false;
  std::size_t start = 0;
  double lo = 0.0, hi = 0.0, sum = 0.0;
  const auto close = [&](std::size_t end) {
    const std::size_t width = end - start + 1;
    if (width >= min_w)
      out.push_back({start, end, sum / static_cast<double>(width), width});
    open = false;
  };
  const auto begin = [&](std::size_t i) {
    open = true;
    start = i;
    lo = hi = sum = field[i];
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (!admitted(i)) {
      if (open) close(i - 1);
      continue;
    }
    if (!open) {
      begin(i);
      continue;
    }
    const double v = field[i];
    const bool joins = std::abs(v - field[i - 1]) <= tol &&
                       std::max(hi, v) - std::min(lo, v) <= tol;
    if (joins) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    } else {
      close(i - 1);
      begin(i);
    }
  }
  if (open) close(n - 1);
  return out;
}

const char* to_string(Structure s) {
  switch (s) {
    case Structure::classical_only: return "classical_only";
    case Structure::rarefaction_plus_nonclassical: return "rarefaction_plus_nonclassical";
    case Structure::double_shock: return "double_shock";
    case Structure::stationary_shock: return "stationary_shock";
    case Structure::moving_nonclassical: return "moving_nonclassical";
    case Structure::saturated_nonclassical: return "saturated_nonclassical";
    case Structure::unresolved: return "unresolved";
  }
  return "unresolved";
}

Structure structure_from_string(const std::string& s) {
  for (auto v : {Structure::classical_only, Structure::rarefaction_plus_nonclassical,
                 Structure::double_shock, Structure::stationary_shock,
                 Structure::moving_nonclassical, Structure::saturated_nonclassical,
                 Structure::unresolved})
    if (s == to_string(v)) return v;
  throw ConfigError("unknown wave structure '" + s + "'");
}

const char* to_string(LaxType t) {
  switch (t) {
    case LaxType::classical: return "classical";
    case LaxType::undercompressive: return "undercompressive";
    case LaxType::expansive: return "expansive";
  }
  return "expansive";
}

std::optional<double> WaveReport::nonclassical_speed() const {
  if (!kinetic_pair) return std::nullopt;
  for (const auto& w : waves)
    if (w.kind == WaveKind::shock && w.left == kinetic_pair->first &&
        w.right == kinetic_pair->second)
      return w.speed;
  return std::nullopt;
}

std::string WaveReport::describe() const {
  std::ostringstream os;
  os.precision(6);
  os << "structure: " << to_string(structure) << "\n";
  os << "plateaus:";
  for (const auto& p : plateaus)
    os << " [" << p.i_start << "-" << p.i_end << "]=" << p.value;
  os << "\n";
  for (const auto& w : waves) {
    os << "  " << (w.kind == WaveKind::shock ? "shock" : "rarefaction") << " "
       << w.left << " -> " << w.right << " nodes " << w.i_left << "-" << w.i_right
       << " speed " << w.speed;
    if (w.kind == WaveKind::shock) os << " (" << to_string(w.lax) << ")";
    os << "\n";
  }
  if (kinetic_pair)
    os << "kinetic pair: (" << kinetic_pair->first << ", " << kinetic_pair->second << ")\n";
  if (dissipation) os << "dissipation: " << *dissipation << "\n";
  os << "oscillation: " << oscillation << "\n";
  if (!diagnostics.empty()) os << "notes: " << diagnostics << "\n";
  return os.str();
}

double shock_speed_rh(double u_minus, double u_plus, const FluxFn& flux) {
  if (u_minus == u_plus)
    throw DegenerateShockError("shock speed of identical states " + std::to_string(u_minus));
  // Factored forms avoid cancellation for nearby states.
  if (flux.kind == FluxKind::cubic)
    return u_minus * u_minus + u_minus * u_plus + u_plus * u_plus;
  return u_plus + u_minus -
         (u_plus * u_plus + u_plus * u_minus + u_minus * u_minus);
}

double entropy_dissipation_cubic(double u_minus, double u_plus) {
  const double d = u_plus - u_minus;
  return d * d * (u_plus * u_plus - u_minus * u_minus);
}

double entropy_dissipation_thin_film(double u_minus, double u_plus,
                                     bool plus_quartic) {
  if (u_minus == u_plus) return 0.0;
  const double s = shock_speed_rh(u_minus, u_plus, FluxFn{FluxKind::thin_film});
  const double a = u_minus, b = u_plus;
  const double quartic = 0.75 * (b * b * b * b - a * a * a * a);
  return -0.5 * s * (b * b - a * a) + (2.0 / 3.0) * (b * b * b - a * a * a) +
         (plus_quartic ? quartic : -quartic);
}

double exact_kinetic_cubic(double u_minus, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("exact kinetic function needs alpha > 0");
  const double abar = cubic_abar(alpha);
  if (u_minus <= -abar) return -u_minus - 0.5 * abar;
  if (u_minus >= abar) return -u_minus + 0.5 * abar;
  return -0.5 * u_minus;
}

bool ShockSet::contains(double u, double tol) const {
  if (isolated && std::abs(u - *isolated) <= tol) return true;
  const bool above = lo_closed ? u >= lo - tol : u > lo - tol;
  const bool below = hi_closed ? u <= hi + tol : u < hi + tol;
  return above && below;
}

ShockSet shock_set_cubic(double u_minus, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("shock set needs alpha > 0");
  const double abar = cubic_abar(alpha);
  ShockSet s;
  if (u_minus <= -abar) {
    s.lo = u_minus;
    s.hi = 0.5 * abar;
    s.lo_closed = false;
    s.hi_closed = true;
    s.isolated = -u_minus - 0.5 * abar;
  } else if (u_minus >= abar) {
    s.lo = -0.5 * abar;
    s.hi = u_minus;
    s.lo_closed = true;
    s.hi_closed = false;
    s.isolated = -u_minus + 0.5 * abar;
  } else if (u_minus >= 0.0) {
    s.lo = -0.5 * u_minus;
    s.hi = u_minus;
    s.lo_closed = true;
    s.hi_closed = false;
  } else {
    s.lo = u_minus;
    s.hi = -0.5 * u_minus;
    s.lo_closed = false;
    s.hi_closed = true;
  }
  return s;
}

double thin_film_tangent(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw DomainError("tangent point defined for u in (0, 1), got " + std::to_string(u));
  return 0.5 * (1.0 - u);
}

double thin_film_zero_dissipation(double u) {
  if (!(u > 0.0 && u < 2.0 / 3.0))
    throw DomainError("zero-dissipation point defined for u in (0, 2/3), got " +
                      std::to_string(u));
  return 2.0 / 3.0 - u;
}

namespace {

LaxType lax_from_speeds(double lm, double s, double lp) {
  const double slack = 1e-9 * std::max({1.0, std::abs(lm), std::abs(lp)});
  if (lm + slack >= s && s >= lp - slack) return LaxType::classical;
  if ((s < lm && s < lp) || (s > lm && s > lp)) return LaxType::undercompressive;
  return LaxType::expansive;
}

}  // namespace

LaxType lax_check(double u_minus, double u_plus, const FluxFn& flux) {
  if (u_minus == u_plus) return LaxType::classical;
  return lax_from_speeds(flux.derivative(u_minus), shock_speed_rh(u_minus, u_plus, flux),
                         flux.derivative(u_plus));
}

LaxType lax_check_psystem(double tau_minus, double tau_plus, double speed,
                          const PressureLaw& law, int family) {
  const double sign = family == 1 ? -1.0 : 1.0;
  const double lm = sign * law.sound_speed(tau_minus);
  const double lp = sign * law.sound_speed(tau_plus);
  if (!std::isfinite(lm) || !std::isfinite(lp)) return LaxType::expansive;
  return lax_from_speeds(lm, speed, lp);
}

double plateau_tolerance(const ClassifyOptions& opt, double left, double right) {
  if (opt.tol_plateau > 0.0) return opt.tol_plateau;
  const double t = 1e-3 * (std::abs(left) + std::abs(right));
  return t > 0.0 ? t : 1e-6;
}

WaveReport classify_scalar(std::span<const Snapshot> snapshots, const Grid1D& grid,
                           const FluxFn& flux, double u_left, double u_right,
                           const ClassifyOptions& opt) {
  const Frames fr = pick_frames(snapshots);
  const double tol = plateau_tolerance(opt, u_left, u_right);
  WaveReport rep;

  const auto u2 = fr.last->state.component(0);
  const auto u1 = fr.track->state.component(0);
  const auto mask = stationary_mask(*fr.mask, *fr.last, {tol});
  rep.plateaus = grow_cores(u2, detect_plateaus(u2, tol, core_width(opt.min_width), mask),
                            tol, opt.min_width);
  const double floor = opt.min_jump * std::abs(u_left - u_right);
  const auto p2 = merge_states(rep.plateaus, tol, floor);
  const auto p1 = merge_states(detect_plateaus(u1, tol, opt.min_width), tol, floor);

  if (p2.empty()) {
    rep.diagnostics = "no plateau found";
    return rep;
  }
  if (std::abs(p2.front().value - u_left) > 10.0 * tol ||
      std::abs(p2.back().value - u_right) > 10.0 * tol) {
    rep.diagnostics = "far-field plateaus do not match the Riemann data";
    return rep;
  }

  const auto lambda = [&](double u) { return flux.derivative(u); };
  const auto rh = [&](const Wave& w) { return shock_speed_rh(w.left, w.right, flux); };
  rep.waves = analyse_gaps(p2, p1, u2, u1, fr.last->time, fr.track->time, grid, tol,
                           lambda, rh, rep.diagnostics, rep.oscillation);

  int nonclassical = 0, expansive = 0, fans = 0;
  const Wave* nc = nullptr;
  for (auto& w : rep.waves) {
    rep.speeds.push_back(w.speed);
    if (w.kind == WaveKind::rarefaction) {
      ++fans;
      continue;
    }
    w.lax = lax_check(w.left, w.right, flux);
    if (w.lax == LaxType::undercompressive) {
      ++nonclassical;
      nc = &w;
    } else if (w.lax == LaxType::expansive) {
      ++expansive;
    }
  }

  if (expansive > 0) {
    rep.diagnostics += "expansive shock detected; ";
    return rep;
  }
  if (nonclassical > 1) {
    rep.diagnostics += "more than one nonclassical front; ";
    return rep;
  }
  if (nonclassical == 0) {
    rep.structure = Structure::classical_only;
    return rep;
  }
  // A lone nonclassical front is a double shock whose classical part has
  // zero strength.
  rep.structure = fans > 0 ? Structure::rarefaction_plus_nonclassical
                           : Structure::double_shock;
  rep.kinetic_pair = std::make_pair(nc->left, nc->right);
  rep.dissipation = flux.kind == FluxKind::cubic
                        ? entropy_dissipation_cubic(nc->left, nc->right)
                        : entropy_dissipation_thin_film(nc->left, nc->right);
  return rep;
}

WaveReport classify_psystem(std::span<const Snapshot> snapshots,
                            const Grid1D& grid, const PressureLaw& law,
                            double tau_left, double u_left, double tau_right,
                            double u_right, const ClassifyOptions& opt) {
  const Frames fr = pick_frames(snapshots);
  const double tol = plateau_tolerance(opt, tau_left, tau_right);
  const double tol_u = plateau_tolerance(ClassifyOptions{}, u_left, u_right);
  WaveReport rep;

  double scale = 0.0;
  for (double t : {tau_left, tau_right}) {
    const double c = law.sound_speed(t);
    if (std::isfinite(c)) scale = std::max(scale, c);
  }
  const double tol_speed = opt.tol_speed > 0.0 ? opt.tol_speed : 0.02 * std::max(scale, 1.0);

  const auto tau2 = fr.last->state.component(0);
  const auto tau1 = fr.track->state.component(0);
  const auto mask = stationary_mask(*fr.mask, *fr.last, {tol, std::max(tol_u, tol)});
  rep.plateaus = grow_cores(tau2, detect_plateaus(tau2, tol, core_width(opt.min_width), mask),
                            tol, opt.min_width);
  const double floor = opt.min_jump * std::abs(tau_left - tau_right);
  const auto p2 = merge_states(rep.plateaus, tol, floor);
  const auto p1 = merge_states(detect_plateaus(tau1, tol, opt.min_width), tol, floor);

  if (p2.empty()) {
    rep.diagnostics = "no plateau found";
    return rep;
  }
  if (std::abs(p2.front().value - tau_left) > 10.0 * tol ||
      std::abs(p2.back().value - tau_right) > 10.0 * tol) {
    rep.diagnostics = "far-field plateaus do not match the Riemann data";
    return rep;
  }

  // Both families have speeds of magnitude sqrt(-p'), so the fan test does
  // not need to know which family a front belongs to.
  const auto sound = [&](double tau) {
    return law.in_domain(tau) ? law.sound_speed(tau) : kNaN;
  };
  const auto no_speed = [](const Wave&) { return kNaN; };
  rep.waves = analyse_gaps(p2, p1, tau2, tau1, fr.last->time, fr.track->time, grid,
                           tol, sound, no_speed, rep.diagnostics, rep.oscillation);

  // The phase boundary joins states on either side of the elliptic region.
  const auto crosses_elliptic = [&](double a, double b) {
    const double lo = std::min(a, b), hi = std::max(a, b);
    for (int j = 1; j < 128; ++j) {
      const double t = lo + (hi - lo) * j / 128.0;
      if (law.in_domain(t) && law.derivative(t) > 0.0) return true;
    }
    return false;
  };

  Wave* boundary = nullptr;
  bool boundary_phase = false, boundary_uc = false;
  for (auto& w : rep.waves) {
    rep.speeds.push_back(w.speed);
    const bool phase = crosses_elliptic(w.left, w.right);
    if (std::isfinite(w.speed) && w.kind == WaveKind::shock) {
      const int family = w.speed < 0.0 ? 1 : 2;
      w.lax = lax_check_psystem(w.left, w.right, w.speed, law, family);
    }
    if (!phase && (w.kind == WaveKind::rarefaction || !std::isfinite(w.speed))) continue;
    const bool uc = w.lax == LaxType::undercompressive;
    const double jump = std::abs(w.right - w.left);
    const auto rank = [](bool ph, bool u) { return (ph ? 2 : 0) + (u ? 1 : 0); };
    if (!boundary || rank(phase, uc) > rank(boundary_phase, boundary_uc) ||
        (rank(phase, uc) == rank(boundary_phase, boundary_uc) &&
         jump > std::abs(boundary->right - boundary->left))) {
      boundary = &w;
      boundary_phase = phase;
      boundary_uc = uc;
    }
  }
  if (boundary && !std::isfinite(boundary->speed)) {
    rep.diagnostics += "untracked phase boundary; ";
    return rep;
  }
  if (boundary && boundary_phase) {
    // A slow wave trailing the boundary can leave no plateau of its own;
    // the boundary state is then the shoulder of the steep jump.
    const auto [l, r] = jump_shoulders(tau2, boundary->i_left, boundary->i_right);
    const auto inside = [&](double v, double near, double far) {
      return std::abs(v - near) > 2.0 * tol &&
             (v - near) * (far - v) > 0.0;
    };
    // median over a few nodes past the shoulder, to skip the overshoot
    const auto settled = [&](std::size_t from, std::size_t to) {
      std::vector<double> w(tau2.begin() + from, tau2.begin() + to + 1);
      std::nth_element(w.begin(), w.begin() + w.size() / 2, w.end());
      return w[w.size() / 2];
    };
    const double right_state = settled(r, std::min(r + 8, boundary->i_right));
    const double left_state = settled(l >= boundary->i_left + 8 ? l - 8 : boundary->i_left, l);
    if (inside(right_state, boundary->right, boundary->left)) {
      rep.diagnostics += "boundary right state from the jump shoulder; ";
      boundary->right = right_state;
    }
    if (inside(left_state, boundary->left, boundary->right)) {
      rep.diagnostics += "boundary left state from the jump shoulder; ";
      boundary->left = left_state;
    }
    const int family = boundary->speed < 0.0 ? 1 : 2;
    boundary->lax = lax_check_psystem(boundary->left, boundary->right, boundary->speed, law, family);
  }
  if (!boundary) {
    rep.structure = Structure::classical_only;
    return rep;
  }
  rep.kinetic_pair = std::make_pair(boundary->left, boundary->right);
  if (std::abs(boundary->speed) <= tol_speed) {
    rep.structure = Structure::stationary_shock;
  } else if (boundary->lax == LaxType::classical) {
    rep.structure = Structure::classical_only;
    rep.kinetic_pair.reset();
  } else {
    rep.structure = Structure::moving_nonclassical;
  }
  return rep;
}

void mark_saturation(std::span<WaveReport> scan, double tol) {
  for (std::size_t i = 1; i < scan.size(); ++i) {
    auto& cur = scan[i];
    const auto& prev = scan[i - 1];
    const bool moving = cur.structure == Structure::moving_nonclassical;
    const bool prev_moving = prev.structure == Structure::moving_nonclassical ||
                             prev.structure == Structure::saturated_nonclassical;
    if (!moving || !prev_moving || !cur.kinetic_pair || !prev.kinetic_pair) continue;
    if (std::abs(cur.kinetic_pair->first - prev.kinetic_pair->first) <= tol &&
        std::abs(cur.kinetic_pair->second - prev.kinetic_pair->second) <= tol)
      cur.structure = Structure::saturated_nonclassical;
  }
}

}  // namespace ncshock
