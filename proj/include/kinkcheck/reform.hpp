#pragma once

#include <cstdint>
#include <vector>

#include "kinkcheck/absnormal.hpp"
#include "kinkcheck/mpcc.hpp"

namespace kinkcheck {

/// Slack reformulation: inequalities cI >= 0 become equalities
/// cI(t,|z|) - |z^w| = 0 with unsigned slacks w routed through fresh
/// switching rows z^w = w. The result is again an abs-normal problem in
/// (t, w) with no inequalities. A problem without inequalities is returned
/// unchanged.
AbsNormalProblem build_slack_nlp(const AbsNormalProblem& p);

/// Counterpart MPCC: |z| becomes u + v and z becomes u - v with
/// 0 <= u complementary to v >= 0. Flavor I transforms the problem as given;
/// flavor E transforms its slack reformulation (and rejects problems that
/// are already slack-reformed).
MpccProblem build_counterpart_mpcc(const AbsNormalProblem& p, MpccFlavor f);

/// A point of an abs-normal problem: primal variables plus switching values.
struct AbsPoint {
  Vector x;
  Vector z;
};

/// Point maps between the feasible sets of an abs-normal problem and its
/// counterpart MPCC: phi(x,u,v) = (x, u-v) and phi_inv(x,z) = (x,[z]+,[z]-).
/// phi validates complementarity of (u, v) within active^2.
AbsPoint phi(const MpccProblem& mp, const MpccPoint& y,
             const TolerancePolicy& pol);
MpccPoint phi_inv(const SwitchingState& s, const TolerancePolicy& pol);

/// Classify a raw (x, u, v) triple into an MpccPoint with its index sets.
MpccPoint classify_mpcc_point(const MpccProblem& mp, const Vector& x,
                              const Vector& u, const Vector& v,
                              const TolerancePolicy& pol);

/// All slack vectors w with |w| = cI(t, |z(t)|): one sign choice per
/// inactive inequality, zero on active ones. Throws if some cI component is
/// negative beyond tolerance or more than 20 components are inactive.
std::vector<Vector> enumerate_slack_choices(const AbsNormalProblem& p,
                                            const SwitchingState& s,
                                            const TolerancePolicy& pol);

/// Deterministic random sample of slack sign patterns (for problem sizes
/// beyond the enumeration guard).
std::vector<Vector> sample_slack_choices(const AbsNormalProblem& p,
                                         const SwitchingState& s,
                                         const TolerancePolicy& pol, int count,
                                         std::uint64_t seed);

// Evaluation of an MPCC at a point, over the stacked (x, u, v) variables.
Vector mpcc_stack(const MpccProblem& mp, const MpccPoint& y);
Vector mpcc_eq_values(const MpccProblem& mp, const MpccPoint& y);
Vector mpcc_ineq_values(const MpccProblem& mp, const MpccPoint& y);
Matrix mpcc_eq_jacobian(const MpccProblem& mp, const MpccPoint& y);
Matrix mpcc_ineq_jacobian(const MpccProblem& mp, const MpccPoint& y);
Vector mpcc_obj_gradient(const MpccProblem& mp, const MpccPoint& y);

/// Worst violation of equalities, inequality signs, bounds u,v >= 0 and the
/// complementarity products (reported as sqrt(u_i v_i) past active^2).
double mpcc_feasibility_violation(const MpccProblem& mp, const MpccPoint& y,
                                  const TolerancePolicy& pol);
void require_mpcc_feasible(const MpccProblem& mp, const MpccPoint& y,
                           const TolerancePolicy& pol);

}  // namespace kinkcheck
