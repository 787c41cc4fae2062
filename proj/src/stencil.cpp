#include "ncshock/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "ncshock/errors.hpp"

namespace ncshock {

namespace {

struct TabulatedStencil {
  int order;
  int derivative;
  // The q >= 6 second/third derivative rows are listed scaled by h^2/2 and
  // h^3/6; `scale` undoes that.
  std::int64_t scale;
  std::vector<Rational> row;  // u_{i-w} ... u_{i+w}
};

const std::vector<TabulatedStencil>& tabulated() {
  static const std::vector<TabulatedStencil> table = {
      {4, 1, 1, {{1, 12}, {-2, 3}, {0, 1}, {2, 3}, {-1, 12}}},
      {4, 2, 1, {{-1, 12}, {4, 3}, {-5, 2}, {4, 3}, {-1, 12}}},
      {4, 3, 1, {{-1, 2}, {1, 1}, {0, 1}, {-1, 1}, {1, 2}}},

      {6, 1, 1,
       {{-1, 60}, {3, 20}, {-3, 4}, {0, 1}, {3, 4}, {-3, 20}, {1, 60}}},
      {6, 2, 2,
       {{1, 180}, {-3, 40}, {3, 4}, {-49, 36}, {3, 4}, {-3, 40}, {1, 180}}},
      {6, 3, 6,
       {{1, 48}, {-1, 6}, {13, 48}, {0, 1}, {-13, 48}, {1, 6}, {-1, 48}}},

      {8, 1, 1,
       {{1, 280}, {-4, 105}, {1, 5}, {-4, 5}, {0, 1}, {4, 5}, {-1, 5},
        {4, 105}, {-1, 280}}},
      {8, 2, 2,
       {{-1, 1120}, {4, 315}, {-1, 10}, {4, 5}, {-205, 144}, {4, 5},
        {-1, 10}, {4, 315}, {-1, 1120}}},
      {8, 3, 6,
       {{-7, 1440}, {1, 20}, {-169, 720}, {61, 180}, {0, 1}, {-61, 180},
        {169, 720}, {-1, 20}, {7, 1440}}},

      {10, 1, 1,
       {{-1, 1260}, {5, 504}, {-5, 84}, {5, 21}, {-5, 6}, {0, 1}, {5, 6},
        {-5, 21}, {5, 84}, {-5, 504}, {1, 1260}}},
      {10, 2, 2,
       {{1, 6300}, {-5, 2016}, {5, 252}, {-5, 42}, {5, 6}, {-5269, 3600},
        {5, 6}, {-5, 42}, {5, 252}, {-5, 2016}, {1, 6300}}},
      {10, 3, 6,
       {{41, 36288}, {-1261, 90720}, {541, 6720}, {-4369, 15120},
        {1669, 4320}, {0, 1}, {-1669, 4320}, {4369, 15120}, {-541, 6720},
        {1261, 90720}, {-41, 36288}}},
  };
  return table;
}

template <int W>
void apply_fixed(const double* padded, const double* c, double* out,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    // Derivative weights sum to zero, so differences against the centre
    // value give the same result without cancelling a large offset.
    const double* p = padded + i + W;
    double acc = 0.0;
    for (int k = 1; k <= W; ++k)
      acc += c[W + k] * (p[k] - p[0]) + c[W - k] * (p[-k] - p[0]);
    out[i] = acc;
  }
}

void apply_padded(int w, const double* padded, const double* c, double* out,
                  std::size_t n) {
  switch (w) {
    case 2: apply_fixed<2>(padded, c, out, n); break;
    case 3: apply_fixed<3>(padded, c, out, n); break;
    case 4: apply_fixed<4>(padded, c, out, n); break;
    case 5: apply_fixed<5>(padded, c, out, n); break;
    default:
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        const double* p = padded + i + w;
        for (int k = 1; k <= w; ++k)
          acc += c[w + k] * (p[k] - p[0]) + c[w - k] * (p[-k] - p[0]);
        out[i] = acc;
      }
  }
}

}  // namespace

Rational Rational::operator*(std::int64_t k) const {
  std::int64_t num2 = num * k;
  std::int64_t g = std::gcd(num2, den);
  if (g == 0) g = 1;
  return {num2 / g, den / g};
}

std::vector<double> StencilCoefficients::weights() const {
  std::vector<double> w(coeffs.size());
  std::transform(coeffs.begin(), coeffs.end(), w.begin(),
                 [](const Rational& r) { return r.value(); });
  return w;
}

bool is_supported_order(int q) {
  return q == 4 || q == 6 || q == 8 || q == 10;
}

StencilCoefficients make_stencil(int q, int d) {
  for (const auto& p : tabulated()) {
    if (p.order != q || p.derivative != d) continue;
    StencilCoefficients s;
    s.order = q;
    s.derivative = d;
    s.half_width = static_cast<int>(p.row.size() / 2);
    s.coeffs.reserve(p.row.size());
    for (const auto& r : p.row) s.coeffs.push_back(r * p.scale);
    return s;
  }
  throw ConfigError("unsupported stencil (q=" + std::to_string(q) +
                    ", d=" + std::to_string(d) +
                    "); q must be 4, 6, 8 or 10 and d 1, 2 or 3");
}

void fill_ghosts(std::span<const double> field, int w, BoundaryTreatment b,
                 std::span<double> padded) {
  const std::size_t n = field.size();
  const auto uw = static_cast<std::size_t>(w);
  if (n < 2 * uw + 1)
    throw ConfigError("field narrower than one full stencil width");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(field[i]))
      throw BlowupError("non-finite value at node " + std::to_string(i), i);
    padded[i + uw] = field[i];
  }
  if (b.kind == BoundaryKind::periodic) {
    for (std::size_t k = 1; k <= uw; ++k) {
      padded[uw - k] = field[n - k];
      padded[uw + n - 1 + k] = field[k - 1];
    }
  } else {
    for (std::size_t k = 1; k <= uw; ++k) {
      padded[uw - k] = field[0];
      padded[uw + n - 1 + k] = field[n - 1];
    }
  }
}

Differentiator::Differentiator(const StencilCoefficients& s,
                               const Grid1D& grid, BoundaryTreatment boundary)
    : half_width_(s.half_width),
      derivative_(s.derivative),
      n_(grid.n()),
      boundary_(boundary),
      weights_(s.weights()),
      padded_(grid.n() + 2 * static_cast<std::size_t>(s.half_width)) {
  const double scale = std::pow(grid.h(), s.derivative);
  for (auto& c : weights_) c /= scale;
}

void Differentiator::apply(std::span<const double> field,
                           std::span<double> out) const {
  if (field.size() != n_ || out.size() != n_)
    throw ConfigError("field length does not match grid");
  fill_ghosts(field, half_width_, boundary_, padded_);
  apply_padded(half_width_, padded_.data(), weights_.data(), out.data(), n_);
}

std::vector<double> apply_stencil(std::span<const double> field,
                                  const StencilCoefficients& s,
                                  const Grid1D& grid,
                                  BoundaryTreatment boundary) {
  std::vector<double> out(field.size());
  Differentiator(s, grid, boundary).apply(field, out);
  return out;
}

double monomial_error(const StencilCoefficients& s, int degree) {
  // Small grid with O(1) spacing so that any missing polynomial order shows
  // up far above round-off.
  const Grid1D grid(0.5, 3.5, 25);
  std::vector<double> u(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) u[i] = std::pow(grid.x(i), degree);
  const auto du = apply_stencil(u, s, grid, BoundaryTreatment::constant());
  double worst = 0.0;
  const auto w = static_cast<std::size_t>(s.half_width);
  for (std::size_t i = w; i + w < grid.n(); ++i) {
    double exact = 0.0;
    if (degree >= s.derivative) {
      double falling = 1.0;
      for (int j = 0; j < s.derivative; ++j) falling *= degree - j;
      exact = falling * std::pow(grid.x(i), degree - s.derivative);
    }
    const double err = std::abs(du[i] - exact) / std::max(1.0, std::abs(exact));
    worst = std::max(worst, err);
  }
  return worst;
}

std::vector<StencilCheck> validate_stencils(double tolerance) {
  std::vector<StencilCheck> out;
  for (int q : {4, 6, 8, 10}) {
    for (int d : {1, 2, 3}) {
      const auto s = make_stencil(q, d);
      StencilCheck c{q, d, s.exact_degree(), 0.0, true};
      for (int m = 0; m <= c.max_degree; ++m)
        c.max_relative_error = std::max(c.max_relative_error, monomial_error(s, m));
      c.pass = c.max_relative_error <= tolerance;
      out.push_back(c);
    }
  }
  return out;
}

std::string format_stencil_report(const std::vector<StencilCheck>& checks) {
  std::ostringstream os;
  for (const auto& c : checks) {
    char line[128];
    std::snprintf(line, sizeof line, "q=%-2d d=%d degree<=%-2d max_rel_err=%.3e %s\n",
                  c.order, c.derivative, c.max_degree, c.max_relative_error,
                  c.pass ? "PASS" : "FAIL");
    os << line;
  }
  return os.str();
}

}  // namespace ncshock
