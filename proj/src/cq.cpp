#include "kinkcheck/cq.hpp"

#include <cmath>

#include "kinkcheck/errors.hpp"

namespace kinkcheck {

namespace {

void require_feasible(const SwitchingState& s, const TolerancePolicy& pol) {
  const double v = s.feasibility_violation();
  if (v > pol.active)
    throw InfeasiblePointError(
        "point infeasible (violation " + std::to_string(v) + ")", v);
}

void ensure_direction_ok(const StrictDirectionResult& r) {
  if (!r.diagnostic.empty()) throw NumericError(r.diagnostic);
}

// Columns of the tightened-NLP Jacobian that remain after fixing the active
// complementarity bounds: all of x, u_i for i in U+, v_i for i in V+.
std::vector<int> free_columns(const MpccProblem& mp, const MpccPoint& y) {
  std::vector<int> cols;
  for (int j = 0; j < mp.num_x; ++j) cols.push_back(j);
  for (int i : y.u_plus) cols.push_back(mp.u_index(i));
  for (int i : y.v_plus) cols.push_back(mp.v_index(i));
  return cols;
}

Matrix select_columns(const Matrix& m, const std::vector<int>& cols) {
  Matrix out(m.rows(), cols.size());
  for (size_t k = 0; k < cols.size(); ++k) out.col(k) = m.col(cols[k]);
  return out;
}

std::vector<int> active_rows(const Vector& vals, const TolerancePolicy& pol) {
  std::vector<int> idx;
  for (int i = 0; i < vals.size(); ++i)
    if (std::abs(vals[i]) <= pol.active) idx.push_back(i);
  return idx;
}

Matrix select_rows(const Matrix& m, const std::vector<int>& rows) {
  Matrix out(rows.size(), m.cols());
  for (size_t k = 0; k < rows.size(); ++k) out.row(k) = m.row(rows[k]);
  return out;
}

}  // namespace

CqVerdict check_likq(const AbsNormalProblem& p, const SwitchingState& s,
                     const TolerancePolicy& pol) {
  require_feasible(s, pol);
  JacobianBundle b = assemble_jacobians(p, s);
  CqVerdict v;
  v.name = "likq";
  v.active_switch = s.alpha;
  v.active_ineq = s.active_ineq;
  v.required_rank = p.num_eq() + static_cast<int>(s.active_ineq.size()) +
                    static_cast<int>(s.alpha.size());
  v.rank = matrix_rank(b.stacked(), pol);
  v.holds = v.rank.rank == v.required_rank && v.rank.full_row_rank;
  return v;
}

CqVerdict check_idkq(const AbsNormalProblem& p, const SwitchingState& s,
                     const TolerancePolicy& pol) {
  require_feasible(s, pol);
  JacobianBundle b = assemble_jacobians(p, s);
  CqVerdict v;
  v.name = "idkq";
  v.active_switch = s.alpha;
  v.active_ineq = s.active_ineq;

  Matrix eq_part(b.eq.rows() + b.active_switch.rows(), p.num_primal);
  eq_part.topRows(b.eq.rows()) = b.eq;
  eq_part.bottomRows(b.active_switch.rows()) = b.active_switch;
  v.required_rank = static_cast<int>(eq_part.rows());
  v.rank = matrix_rank(eq_part, pol);

  StrictDirectionResult dir = strict_direction(eq_part, b.active_ineq, pol);
  ensure_direction_ok(dir);
  v.holds = v.rank.full_row_rank && dir.feasible;
  v.direction = std::move(dir);
  return v;
}

CqVerdict check_mpcc_licq(const MpccProblem& mp, const MpccPoint& y,
                          const TolerancePolicy& pol) {
  require_mpcc_feasible(mp, y, pol);
  CqVerdict v;
  v.name = "mpcc-licq";
  v.active_switch = y.degenerate;

  const std::vector<int> cols = free_columns(mp, y);
  Matrix eq_jac = select_columns(mpcc_eq_jacobian(mp, y), cols);
  Matrix ineq_jac = mpcc_ineq_jacobian(mp, y);
  v.active_ineq = active_rows(mpcc_ineq_values(mp, y), pol);
  Matrix act = select_columns(select_rows(ineq_jac, v.active_ineq), cols);

  Matrix m(eq_jac.rows() + act.rows(), cols.size());
  m.topRows(eq_jac.rows()) = eq_jac;
  m.bottomRows(act.rows()) = act;
  v.required_rank = static_cast<int>(m.rows());
  v.rank = matrix_rank(m, pol);
  v.holds = v.rank.full_row_rank;
  return v;
}

CqVerdict check_mpcc_mfcq(const MpccProblem& mp, const MpccPoint& y,
                          const TolerancePolicy& pol) {
  require_mpcc_feasible(mp, y, pol);
  CqVerdict v;
  v.name = "mpcc-mfcq";
  v.active_switch = y.degenerate;

  const std::vector<int> cols = free_columns(mp, y);
  Matrix eq_jac = select_columns(mpcc_eq_jacobian(mp, y), cols);
  Matrix ineq_jac = mpcc_ineq_jacobian(mp, y);
  v.active_ineq = active_rows(mpcc_ineq_values(mp, y), pol);
  Matrix act = select_columns(select_rows(ineq_jac, v.active_ineq), cols);

  v.required_rank = static_cast<int>(eq_jac.rows());
  v.rank = matrix_rank(eq_jac, pol);
  StrictDirectionResult dir = strict_direction(eq_jac, act, pol);
  ensure_direction_ok(dir);
  v.holds = v.rank.full_row_rank && dir.feasible;
  v.direction = std::move(dir);
  return v;
}

}  // namespace kinkcheck
