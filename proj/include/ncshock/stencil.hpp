#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ncshock/grid.hpp"

namespace ncshock {

/// Exact rational coefficient, kept as tabulated so transcription can be checked
/// against the polynomial oracle without floating-point noise.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  Rational operator*(std::int64_t k) const;
  Rational operator-() const { return {-num, den}; }
  bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
};

/// Central difference weights in derivative form:
///   u^(d)(x_i) ~ (1/h^d) * sum_{k=-w..w} coeffs[k+w] * u_{i+k}.
struct StencilCoefficients {
  int order = 0;       ///< scheme order q in {4, 6, 8, 10}
  int derivative = 0;  ///< d in {1, 2, 3}
  int half_width = 0;  ///< w; coeffs has 2w+1 entries
  std::vector<Rational> coeffs;

  /// Truncation order of the stencil itself. The third-derivative stencils
  /// lose two orders but enter the schemes multiplied by eps^2 ~ h^2.
  int accuracy_order() const { return derivative == 3 ? order - 2 : order; }
  /// Highest monomial degree differentiated exactly.
  int exact_degree() const { return derivative + accuracy_order() - 1; }

  Rational at(int k) const { return coeffs[static_cast<std::size_t>(k + half_width)]; }
  std::vector<double> weights() const;
};

/// Stencil of order q for derivative d. Throws ConfigError for unsupported
/// pairs.
StencilCoefficients make_stencil(int q, int d);

bool is_supported_order(int q);

/// (1/h^d) * sum_k c_k u_{i+k} at every node, ghost values per `boundary`.
/// Throws BlowupError carrying the node index for non-finite input.
std::vector<double> apply_stencil(std::span<const double> field,
                                  const StencilCoefficients& s,
                                  const Grid1D& grid,
                                  BoundaryTreatment boundary);

/// Reusable differentiator for one (stencil, grid, boundary) triple. Holds its
/// own ghost-padded scratch buffer, so one instance must not be shared across
/// threads.
class Differentiator {
 public:
  Differentiator(const StencilCoefficients& s, const Grid1D& grid,
                 BoundaryTreatment boundary);

  void apply(std::span<const double> field, std::span<double> out) const;
  int half_width() const { return half_width_; }
  int derivative() const { return derivative_; }
  /// Scaled weights (already divided by h^d).
  const std::vector<double>& scaled_weights() const { return weights_; }
  BoundaryTreatment boundary() const { return boundary_; }

 private:
  int half_width_;
  int derivative_;
  std::size_t n_;
  BoundaryTreatment boundary_;
  std::vector<double> weights_;
  mutable std::vector<double> padded_;
};

/// Fill `padded` (size n + 2w) with `field` in the middle and ghosts per the
/// boundary rule. Throws BlowupError for non-finite input.
void fill_ghosts(std::span<const double> field, int w, BoundaryTreatment b,
                 std::span<double> padded);

struct StencilCheck {
  int order = 0;
  int derivative = 0;
  int max_degree = 0;            ///< highest monomial degree tested
  double max_relative_error = 0; ///< worst over degrees and interior nodes
  bool pass = false;
};

/// Polynomial-exactness report over all 12 (q, d) pairs.
std::vector<StencilCheck> validate_stencils(double tolerance = 1e-9);

/// Worst relative error of one stencil on x^degree at the interior nodes of a
/// small test grid.
double monomial_error(const StencilCoefficients& s, int degree);

std::string format_stencil_report(const std::vector<StencilCheck>& checks);

}  // namespace ncshock
