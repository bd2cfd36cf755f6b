#pragma once

#include <vector>

#include "kinkcheck/multipliers.hpp"
#include "kinkcheck/policy.hpp"
#include "kinkcheck/problem.hpp"

namespace kinkcheck {

/// Full switching snapshot at a point t: the switching values z(t) obtained
/// by forward substitution, their signature, the active index sets, and the
/// implicit-function Jacobian dz/dt = [I - d2cZ * Sigma]^{-1} d1cZ.
struct SwitchingState {
  Vector t;
  Vector z;
  std::vector<int> sigma;        // entries in {-1, 0, 1}
  std::vector<int> alpha;        // sorted indices with z_i active
  std::vector<int> active_ineq;  // sorted indices with cI_i active
  Matrix dz_dt;                  // s x n
  double switch_residual = 0.0;  // max |z - cZ(t, |z|)|
  Vector eq_values;              // cE(t, |z|)
  Vector ineq_values;            // cI(t, |z|)

  Vector abs_z() const { return z.cwiseAbs(); }
  /// Feasible within tol: equalities at zero, inequalities nonnegative.
  bool feasible(double tol) const;
  /// Largest feasibility violation (equality residual or negative cI part).
  double feasibility_violation() const;
};

SwitchingState evaluate_switching(const AbsNormalProblem& p, const Vector& t,
                                  const TolerancePolicy& pol);

/// The three Jacobian blocks evaluated at a switching state:
///   eq           = d1 cE + d2 cE * Sigma * dz/dt           (m1 rows)
///   active_ineq  = the same formula for cI rows in A       (|A| rows)
///   active_switch= rows of dz/dt with index in alpha       (|alpha| rows)
struct JacobianBundle {
  Matrix eq;
  Matrix active_ineq;
  Matrix active_switch;

  /// Vertical stack [eq; active_ineq; active_switch].
  Matrix stacked() const;
};

JacobianBundle assemble_jacobians(const AbsNormalProblem& p,
                                  const SwitchingState& s);

/// Hessian over the stacked (t, m) input of
///   f(t) + lamE^T cE(t,m) - lamI^T cI(t,m) + lamZ^T cZ(t,m)
/// evaluated at (t, |z(t)|). Terms linear in m contribute nothing, so this
/// is the Lagrangian Hessian of the abs-normal form.
Matrix lagrangian_hessian_abs(const AbsNormalProblem& p,
                              const SwitchingState& s,
                              const MultiplierSet& lam);

/// Total derivative of t -> c(t, |z(t)|) for an arbitrary row set of a
/// constraint function: d1 c + d2 c * Sigma * dz/dt.
Matrix total_jacobian(const SmoothFunction& c, const SwitchingState& s);

}  // namespace kinkcheck
