#pragma once

#include <cstddef>
#include <span>

#include "ncshock/grid.hpp"

namespace ncshock {

/// Spatial discretization shared by all models: mesh, scheme order q and
/// ghost-node rule.
struct Discretization {
  Grid1D grid;
  int order = 6;
  BoundaryTreatment boundary = BoundaryTreatment::constant();
};

/// Method-of-lines right-hand side dU/dt = R[U] for one model on one mesh.
///
/// Implementations keep scratch buffers, so a single instance belongs to one
/// run; evaluate() is otherwise a pure function of its input.
class SemiDiscreteSystem {
 public:
  virtual ~SemiDiscreteSystem() = default;

  virtual std::size_t n_components() const = 0;
  virtual const Discretization& discretization() const = 0;

  /// Writes R[state] into `rate`. Both spans hold n_components * n values,
  /// component-major.
  virtual void evaluate(std::span<const double> state,
                        std::span<double> rate) const = 0;

  /// Explicit stability bound cfl * min(convective, diffusive, dispersive,
  /// fourth-order limits) evaluated on `state`.
  virtual double stable_dt(std::span<const double> state, double cfl) const = 0;
};

}  // namespace ncshock
