#pragma once

#include <string>

#include "kinkcheck/expr.hpp"

namespace kinkcheck {

/// A nonlinear program in abs-normal form:
///
///   min  f(t)        over t in R^{n_t}
///   s.t. cE(t, |z|)  = 0            (m1 rows)
///        cI(t, |z|) >= 0            (m2 rows)
///        cZ(t, |z|) - z = 0         (s_t rows)
///
/// where the second argument of cZ is strictly lower triangular: row i of cZ
/// references |z_j| only for j < i, so z is computed by forward substitution.
struct AbsNormalProblem {
  std::string name;
  int num_primal = 0;     // n_t
  int num_switching = 0;  // s_t

  SmoothFunction objective;  // one row, second_dim 0
  SmoothFunction eq;         // m1 rows, second_dim s_t
  SmoothFunction ineq;       // m2 rows, second_dim s_t
  SmoothFunction switching;  // s_t rows, second_dim s_t, strictly triangular

  // Set by build_slack_nlp so that a second slack reformulation is rejected.
  bool slack_reformed = false;

  int num_eq() const { return eq.out_dim(); }
  int num_ineq() const { return ineq.out_dim(); }

  /// Structural checks: dimensions, index ranges, strict lower
  /// triangularity of the switching definitions. Throws on violation.
  void validate() const;
};

}  // namespace kinkcheck
