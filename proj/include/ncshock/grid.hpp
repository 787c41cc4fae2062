#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ncshock {

/// Widest stencil half-width in use (tenth-order stencils).
inline constexpr int kMaxHalfWidth = 5;

/// Uniform 1-D mesh. Nodes sit at x_min + i*h for i = 0..n-1.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t n() const { return n_; }
  double h() const { return h_; }
  double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * h_; }
  std::vector<double> nodes() const;

  bool operator==(const Grid1D&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double h_;
};

enum class BoundaryKind { periodic, constant_extrapolation };

/// Ghost-node fill rule. Periodic wraps around; constant extrapolation copies
/// the nearest interior value into every ghost node.
struct BoundaryTreatment {
  BoundaryKind kind = BoundaryKind::constant_extrapolation;

  static BoundaryTreatment periodic() { return {BoundaryKind::periodic}; }
  static BoundaryTreatment constant() {
    return {BoundaryKind::constant_extrapolation};
  }
  bool operator==(const BoundaryTreatment&) const = default;
};

const char* to_string(BoundaryKind kind);

/// Nodal solution values, one or more components stored component-major.
class StateField {
 public:
  StateField() = default;
  StateField(std::size_t n_nodes, std::size_t n_components, double fill = 0.0);

  std::size_t n_nodes() const { return n_nodes_; }
  std::size_t n_components() const { return n_components_; }

  std::span<double> component(std::size_t c);
  std::span<const double> component(std::size_t c) const;

  std::span<double> data() { return values_; }
  std::span<const double> data() const { return values_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const StateField&) const = default;

 private:
  std::size_t n_nodes_ = 0;
  std::size_t n_components_ = 0;
  std::vector<double> values_;
};

}  // namespace ncshock
