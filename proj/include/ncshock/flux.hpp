#pragma once

#include <string>

namespace ncshock {

/// Scalar fluxes with a single inflection point.
///   cubic:     f(u) = u^3        (concave-convex, inflection at 0)
///   thin_film: f(u) = u^2 - u^3  (convex-concave, inflection at 1/3)
enum class FluxKind { cubic, thin_film };

struct FluxFn {
  FluxKind kind = FluxKind::cubic;

  double operator()(double u) const {
    return kind == FluxKind::cubic ? u * u * u : u * u - u * u * u;
  }
  double derivative(double u) const {
    return kind == FluxKind::cubic ? 3.0 * u * u : 2.0 * u - 3.0 * u * u;
  }
  double inflection() const { return kind == FluxKind::cubic ? 0.0 : 1.0 / 3.0; }
};

const char* to_string(FluxKind kind);

}  // namespace ncshock
