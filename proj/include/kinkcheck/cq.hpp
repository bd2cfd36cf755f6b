#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kinkcheck/absnormal.hpp"
#include "kinkcheck/mpcc.hpp"
#include "kinkcheck/numkernel.hpp"
#include "kinkcheck/reform.hpp"

namespace kinkcheck {

/// Outcome of a constraint-qualification test, with the rank evidence and
/// (for the interior-direction variants) the witness direction.
struct CqVerdict {
  std::string name;  // "likq" | "idkq" | "mpcc-licq" | "mpcc-mfcq"
  bool holds = false;
  RankResult rank;
  int required_rank = 0;
  std::optional<StrictDirectionResult> direction;
  // index-set snapshot at the point
  std::vector<int> active_switch;  // alpha (abs side) / degenerate set D
  std::vector<int> active_ineq;
};

/// LIKQ: [JE; JA; Jalpha] has full row rank m1 + |A| + |alpha|.
CqVerdict check_likq(const AbsNormalProblem& p, const SwitchingState& s,
                     const TolerancePolicy& pol);

/// IDKQ: [JE; Jalpha] has full row rank m1 + |alpha| and some d satisfies
/// JE d = 0, Jalpha d = 0, JA d > 0.
CqVerdict check_idkq(const AbsNormalProblem& p, const SwitchingState& s,
                     const TolerancePolicy& pol);

/// MPCC-LICQ: the tightened-NLP Jacobian restricted to the columns
/// (x, u_{U+}, v_{V+}) has full row rank over all equality rows plus the
/// active inequality rows.
CqVerdict check_mpcc_licq(const MpccProblem& mp, const MpccPoint& y,
                          const TolerancePolicy& pol);

/// MPCC-MFCQ: the equality rows alone have full row rank over the same
/// columns, and some direction d in those columns satisfies eq d = 0 and
/// active-ineq d > 0. Without inequalities this coincides with MPCC-LICQ.
CqVerdict check_mpcc_mfcq(const MpccProblem& mp, const MpccPoint& y,
                          const TolerancePolicy& pol);

}  // namespace kinkcheck
