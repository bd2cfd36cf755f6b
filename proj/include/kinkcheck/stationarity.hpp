#pragma once

#include <map>
#include <string>
#include <vector>

#include "kinkcheck/absnormal.hpp"
#include "kinkcheck/mpcc.hpp"
#include "kinkcheck/multipliers.hpp"
#include "kinkcheck/reform.hpp"

namespace kinkcheck {

struct StationarityQualifiers {
  bool strict_complementarity = false;
  bool strict_normal_growth = false;
  bool mpcc_strict_complementarity = false;
};

/// First-order verdict. `residuals` records one number per condition group
/// (equality residual or constraint violation, zero when satisfied);
/// `violated` lists the groups that exceeded tolerance.
struct StationarityVerdict {
  std::string kind;  // "kink" | "s"
  bool holds = false;
  MultiplierSet multipliers;
  std::map<std::string, double> residuals;
  std::vector<std::string> violated;
  StationarityQualifiers qualifiers;
};

/// Kink stationarity at a feasible switching state: the gradient equation,
/// the normal-growth inequalities on active switching rows, the sign
/// equalities on inactive rows, nonnegativity of the inequality multipliers
/// and complementary slackness.
StationarityVerdict check_kink_stationarity(const AbsNormalProblem& p,
                                            const SwitchingState& s,
                                            const MultiplierSet& lam,
                                            const TolerancePolicy& pol);

struct MultiplierSolve {
  bool found = false;
  MultiplierSet multipliers;
  std::string diagnostic;
};

/// Pose the kink-stationarity conditions as a linear feasibility problem
/// (the absolute value in the normal-growth rows splits into two
/// inequalities) and solve it. On infeasibility the diagnostic reports the
/// least-squares multiplier of the equality part and its worst
/// normal-growth margin.
MultiplierSolve solve_kink_multipliers(const AbsNormalProblem& p,
                                       const SwitchingState& s,
                                       const TolerancePolicy& pol);

/// Strong stationarity of an MPCC point (counterparts with a base problem
/// only): the MPCC-Lagrangian gradient vanishes and the multiplier sign
/// conditions hold on the index sets.
StationarityVerdict check_s_stationarity(const MpccProblem& mp,
                                         const MpccPoint& y,
                                         const MultiplierSet& lam_mu,
                                         const TolerancePolicy& pol);

MultiplierSolve solve_s_multipliers(const MpccProblem& mp, const MpccPoint& y,
                                    const TolerancePolicy& pol);

/// Multiplier correspondence between the two stationarity systems.
/// kink -> S keeps (lamE, lamI, lamZ) and derives
///   mu_u^T = lamE^T d2cE - lamI^T d2cI + lamZ^T [d2cZ - I],
///   mu_v^T = lamE^T d2cE - lamI^T d2cI + lamZ^T [d2cZ + I];
/// S -> kink drops (mu_u, mu_v).
MultiplierSet map_multipliers_kink_to_s(const AbsNormalProblem& p,
                                        const SwitchingState& s,
                                        const MultiplierSet& lam);
MultiplierSet map_multipliers_s_to_kink(const MultiplierSet& lam_mu);

/// Strictness flags of a certificate: positive active-inequality
/// multipliers, strict normal growth on active switching rows, and (with mu
/// present or derived) positive mu on degenerate pairs.
StationarityQualifiers qualifier_flags(const AbsNormalProblem& p,
                                       const SwitchingState& s,
                                       const MultiplierSet& lam,
                                       const TolerancePolicy& pol);

/// Equality part of the kink-stationarity system, exposed for uniqueness
/// analysis: a_eq * (lamE, lamI, lamZ) = b_eq stacks the gradient rows, the
/// inactive sign equalities and the forced zeros off the active set.
struct KinkEqualitySystem {
  Matrix a_eq;
  Vector b_eq;
  int num_vars = 0;
};
KinkEqualitySystem kink_multiplier_equalities(const AbsNormalProblem& p,
                                              const SwitchingState& s);

}  // namespace kinkcheck
