#pragma once

#include <functional>
#include <string>

#include "kinkcheck/expr.hpp"
#include "kinkcheck/policy.hpp"

namespace kinkcheck {

/// Numerical rank via singular values with the policy cutoff
/// tau = rank_eps * max(rows, cols) * sigma_max.
struct RankResult {
  int rank = 0;
  int rows = 0;
  int cols = 0;
  Vector singular_values;
  double tolerance = 0.0;
  bool full_row_rank = false;
};

RankResult matrix_rank(const Matrix& m, const TolerancePolicy& pol);

/// Orthonormal basis of ker(m); cols(result) = cols(m) - rank(m).
Matrix nullspace_basis(const Matrix& m, const TolerancePolicy& pol);

/// Search for d with a_eq d = 0, a_strict d > 0, |d|_inf <= 1, by maximizing
/// the uniform margin s with a two-phase simplex. Feasible iff the optimal
/// margin exceeds the policy strict tolerance. With no strict rows the
/// answer is d = 0 with unbounded margin.
struct StrictDirectionResult {
  bool feasible = false;
  Vector direction;
  double margin = 0.0;
  std::string diagnostic;
};

StrictDirectionResult strict_direction(const Matrix& a_eq,
                                       const Matrix& a_strict,
                                       const TolerancePolicy& pol);

enum class Definiteness {
  PositiveDefinite,
  PositiveSemidefinite,
  Indefinite,
  NegativeSemidefinite,
  NegativeDefinite,
};

std::string to_string(Definiteness d);

/// Eigenvalue classification of (m + m^T)/2 with threshold
/// psd * (1 + |lambda|_max). An empty matrix is positive definite.
Definiteness classify_definiteness(const Matrix& m, const TolerancePolicy& pol);
Definiteness classify_definiteness(const Matrix& m, const TolerancePolicy& pol,
                                   Vector& eigenvalues);

using VectorFn = std::function<Vector(const Vector&)>;

/// Central finite differences, step 1e-6 * (1 + |x_i|) per coordinate.
Matrix fd_jacobian(const VectorFn& f, const Vector& x);
Matrix fd_jacobian(const VectorFn& f, const Vector& x, double step_scale);

// ---------------------------------------------------------------------------
// Small dense LP machinery (two-phase primal simplex, Bland's rule).
// Problem sizes here are tiny; determinism matters, speed does not.

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double objective = 0.0;
};

/// min c^T x  s.t.  A x = b, x >= 0.
LpResult solve_lp_standard(const Vector& c, const Matrix& a, const Vector& b);

/// Find any x with a_eq x = b_eq and a_ineq x >= b_ineq (x free). Returns
/// Optimal with a witness, Infeasible, or IterationLimit.
LpResult solve_linear_feasibility(const Matrix& a_eq, const Vector& b_eq,
                                  const Matrix& a_ineq, const Vector& b_ineq);

}  // namespace kinkcheck
