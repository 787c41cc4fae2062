#include "ncshock/grid.hpp"

#include <cmath>
#include <string>

#include "ncshock/errors.hpp"

namespace ncshock {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n)
    : x_min_(x_min), x_max_(x_max), n_(n) {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
    throw ConfigError("grid: x_max must exceed x_min");
  if (n < static_cast<std::size_t>(2 * kMaxHalfWidth + 1))
    throw ConfigError("grid: need at least " +
                      std::to_string(2 * kMaxHalfWidth + 1) + " nodes, got " +
                      std::to_string(n));
  h_ = (x_max - x_min) / static_cast<double>(n - 1);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

const char* to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::periodic:
      return "periodic";
    case BoundaryKind::constant_extrapolation:
      return "constant";
  }
  return "?";
}

StateField::StateField(std::size_t n_nodes, std::size_t n_components,
                       double fill)
    : n_nodes_(n_nodes),
      n_components_(n_components),
      values_(n_nodes * n_components, fill) {}

std::span<double> StateField::component(std::size_t c) {
  return std::span<double>(values_).subspan(c * n_nodes_, n_nodes_);
}

std::span<const double> StateField::component(std::size_t c) const {
  return std::span<const double>(values_).subspan(c * n_nodes_, n_nodes_);
}

}  // namespace ncshock
