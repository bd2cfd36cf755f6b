#pragma once

#include <string>

namespace kinkcheck {

/// Central numeric tolerance policy. Every verdict produced by the toolkit
/// records the policy it was computed under, so results are reproducible.
struct TolerancePolicy {
  /// Absolute threshold below which a switching variable z_i or an
  /// inequality value counts as active.
  double active = 1e-8;
  /// Relative singular-value cutoff for numerical rank:
  /// tau = rank_eps * max(rows, cols) * sigma_max.
  double rank_eps = 1e-10;
  /// Minimum margin for a strict interior direction to count as feasible.
  double strict = 1e-8;
  /// Eigenvalue threshold for definiteness classification, scaled by
  /// (1 + |lambda|_max).
  double psd = 1e-8;

  std::string describe() const;
};

}  // namespace kinkcheck
