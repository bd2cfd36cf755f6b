#pragma once

#include <map>
#include <string>
#include <vector>

#include "kinkcheck/cq.hpp"
#include "kinkcheck/stationarity.hpp"

namespace kinkcheck {

/// Jacobian of the tightened NLP at an MPCC point: all equality rows, the
/// active inequality rows, and one identity row for each active bound
/// u_i = 0 (i in U0) and v_i = 0 (i in V0). Columns follow the natural
/// variable order (x, u, v).
Matrix tightened_jacobian(const MpccProblem& mp, const MpccPoint& y,
                          const TolerancePolicy& pol);

/// Basis of ker(tightened Jacobian) built from the base problem: the
/// t-block is the identity, u rows carry +dz/dt on U+, v rows carry -dz/dt
/// on V+, zeros elsewhere, all multiplied by a nullspace basis of
/// [JE; JA; rows of dz/dt on the degenerate set].
Matrix basis_umpcc(const MpccProblem& mp, const MpccPoint& y,
                   const TolerancePolicy& pol);

/// Abs-normal reduced basis: U over [sigma_i e_i^T dz/dt U] for inactive
/// switching rows i, where U spans ker([JE; JA; Jalpha]).
Matrix basis_uabs(const AbsNormalProblem& p, const SwitchingState& s,
                  const TolerancePolicy& pol);

/// Both reduced Lagrangian Hessians U^T H U: the abs-normal side projects
/// the (t, m) Hessian onto (t, m_inactive); the MPCC side assembles the
/// (t, u, v) Hessian from the same blocks by the chain rule on m = u + v.
struct ReducedHessians {
  Matrix abs_reduced;
  Matrix mpcc_reduced;
};
ReducedHessians reduced_hessians(const AbsNormalProblem& p,
                                 const SwitchingState& s,
                                 const MultiplierSet& lam,
                                 const TolerancePolicy& pol);

/// Membership test for the critical cone at a weakly stationary point, one
/// residual per condition group.
struct CriticalDirectionReport {
  bool critical = false;
  std::map<std::string, double> residuals;
  std::vector<std::string> violated;
};
CriticalDirectionReport check_critical_direction(const MpccProblem& mp,
                                                 const MpccPoint& y,
                                                 const Vector& d,
                                                 const TolerancePolicy& pol);

struct SecondOrderReport {
  std::string side;  // "abs" | "mpcc"
  int basis_cols = 0;
  Vector eigenvalues;
  Definiteness definiteness = Definiteness::Indefinite;
  std::string classification;  // "sufficient-holds" | "necessary-holds" | "fails"
  bool vacuous = false;
  // False when the hypotheses backing the necessary-condition statement are
  // not met (abs side: LIKQ; mpcc side: MPCC-LICQ and MPCC-strict
  // complementarity), in which case the classification is informational.
  bool conclusive = false;
  StationarityQualifiers qualifiers;
};

SecondOrderReport classify_second_order(const Matrix& reduced, bool cq_holds,
                                        const StationarityQualifiers& q,
                                        bool mpcc_side,
                                        const TolerancePolicy& pol);

}  // namespace kinkcheck
