#pragma once

#include <optional>

#include "kinkcheck/expr.hpp"

namespace kinkcheck {

/// Lagrange multipliers (eq = lambda_E, ineq = lambda_I, sw = lambda_Z).
/// mu_u / mu_v are present for MPCC-side certificates only.
struct MultiplierSet {
  Vector eq;
  Vector ineq;
  Vector sw;
  std::optional<Vector> mu_u;
  std::optional<Vector> mu_v;
};

}  // namespace kinkcheck
