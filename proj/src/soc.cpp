#include "kinkcheck/soc.hpp"

#include <cmath>
#include <stdexcept>

#include "kinkcheck/errors.hpp"

namespace kinkcheck {

namespace {

void require_base(const MpccProblem& mp) {
  if (!mp.base)
    throw std::invalid_argument(
        "second-order analysis needs a counterpart MPCC with base problem");
}

}  // namespace

Matrix tightened_jacobian(const MpccProblem& mp, const MpccPoint& y,
                          const TolerancePolicy& pol) {
  require_mpcc_feasible(mp, y, pol);
  Matrix eq_jac = mpcc_eq_jacobian(mp, y);
  Matrix ineq_jac = mpcc_ineq_jacobian(mp, y);
  Vector ineq_vals = mpcc_ineq_values(mp, y);
  std::vector<int> active;
  for (int i = 0; i < ineq_vals.size(); ++i)
    if (std::abs(ineq_vals[i]) <= pol.active) active.push_back(i);

  const int dim = mp.var_dim();
  const int rows = mp.num_eq() + static_cast<int>(active.size()) +
                   static_cast<int>(y.u_zero.size()) +
                   static_cast<int>(y.v_zero.size());
  Matrix j = Matrix::Zero(rows, dim);
  j.topRows(mp.num_eq()) = eq_jac;
  int r = mp.num_eq();
  for (int i : active) j.row(r++) = ineq_jac.row(i);
  for (int i : y.u_zero) j(r++, mp.u_index(i)) = 1.0;
  for (int i : y.v_zero) j(r++, mp.v_index(i)) = 1.0;
  return j;
}

Matrix basis_umpcc(const MpccProblem& mp, const MpccPoint& y,
                   const TolerancePolicy& pol) {
  require_base(mp);
  SwitchingState s = evaluate_switching(*mp.base, y.x, pol);
  JacobianBundle b = assemble_jacobians(*mp.base, s);

  // Nullspace factor: [JE; JA; rows of dz/dt over the degenerate pairs].
  Matrix stack(b.eq.rows() + b.active_ineq.rows() +
                   static_cast<int>(y.degenerate.size()),
               mp.num_x);
  stack.topRows(b.eq.rows()) = b.eq;
  stack.middleRows(b.eq.rows(), b.active_ineq.rows()) = b.active_ineq;
  int r = static_cast<int>(b.eq.rows() + b.active_ineq.rows());
  for (int i : y.degenerate) stack.row(r++) = s.dz_dt.row(i);
  Matrix u_tilde = nullspace_basis(stack, pol);

  const int cols = static_cast<int>(u_tilde.cols());
  Matrix out = Matrix::Zero(mp.var_dim(), cols);
  out.topRows(mp.num_x) = u_tilde;
  Matrix dz_u = s.dz_dt * u_tilde;
  for (int i : y.u_plus) out.row(mp.u_index(i)) = dz_u.row(i);
  for (int i : y.v_plus) out.row(mp.v_index(i)) = -dz_u.row(i);
  return out;
}

Matrix basis_uabs(const AbsNormalProblem& p, const SwitchingState& s,
                  const TolerancePolicy& pol) {
  JacobianBundle b = assemble_jacobians(p, s);
  Matrix u = nullspace_basis(b.stacked(), pol);
  const int inactive = p.num_switching - static_cast<int>(s.alpha.size());
  Matrix out(p.num_primal + inactive, u.cols());
  out.topRows(p.num_primal) = u;
  int r = p.num_primal;
  for (int i = 0; i < p.num_switching; ++i) {
    if (s.sigma[i] == 0) continue;
    out.row(r++) =
        static_cast<double>(s.sigma[i]) * (s.dz_dt.row(i) * u);
  }
  return out;
}

ReducedHessians reduced_hessians(const AbsNormalProblem& p,
                                 const SwitchingState& s,
                                 const MultiplierSet& lam,
                                 const TolerancePolicy& pol) {
  const int n = p.num_primal;
  const int sw = p.num_switching;
  Matrix h = lagrangian_hessian_abs(p, s, lam);

  // abs side: keep t rows/cols and the inactive m rows/cols
  std::vector<int> keep;
  for (int i = 0; i < n; ++i) keep.push_back(i);
  for (int i = 0; i < sw; ++i)
    if (s.sigma[i] != 0) keep.push_back(n + i);
  Matrix h_abs(keep.size(), keep.size());
  for (size_t a = 0; a < keep.size(); ++a)
    for (size_t b = 0; b < keep.size(); ++b)
      h_abs(a, b) = h(keep[a], keep[b]);
  Matrix u_abs = basis_uabs(p, s, pol);
  if (u_abs.rows() != h_abs.rows())
    throw NumericError("reduced basis and projected Hessian disagree");

  // mpcc side: chain rule on m = u + v duplicates the m blocks
  Matrix g11 = h.topLeftCorner(n, n);
  Matrix g12 = h.topRightCorner(n, sw);
  Matrix g22 = h.bottomRightCorner(sw, sw);
  Matrix h_mpcc(n + 2 * sw, n + 2 * sw);
  h_mpcc.topLeftCorner(n, n) = g11;
  h_mpcc.block(0, n, n, sw) = g12;
  h_mpcc.block(0, n + sw, n, sw) = g12;
  h_mpcc.block(n, 0, sw, n) = g12.transpose();
  h_mpcc.block(n + sw, 0, sw, n) = g12.transpose();
  h_mpcc.block(n, n, sw, sw) = g22;
  h_mpcc.block(n, n + sw, sw, sw) = g22;
  h_mpcc.block(n + sw, n, sw, sw) = g22;
  h_mpcc.block(n + sw, n + sw, sw, sw) = g22;

  MpccProblem mp = build_counterpart_mpcc(p, MpccFlavor::I);
  MpccPoint y = phi_inv(s, pol);
  Matrix u_mpcc = basis_umpcc(mp, y, pol);

  ReducedHessians out;
  out.abs_reduced = u_abs.transpose() * h_abs * u_abs;
  out.mpcc_reduced = u_mpcc.transpose() * h_mpcc * u_mpcc;
  return out;
}

CriticalDirectionReport check_critical_direction(const MpccProblem& mp,
                                                 const MpccPoint& y,
                                                 const Vector& d,
                                                 const TolerancePolicy& pol) {
  if (d.size() != mp.var_dim())
    throw std::invalid_argument("direction dimension does not match mpcc");
  CriticalDirectionReport rep;
  rep.critical = true;
  const double tol = 1e-8 * (1.0 + d.cwiseAbs().maxCoeff());

  auto record = [&](const std::string& group, double residual) {
    rep.residuals[group] = residual;
    if (residual > tol) {
      rep.violated.push_back(group);
      rep.critical = false;
    }
  };

  double min_pair = 0.0;
  for (int i : y.degenerate)
    min_pair = std::max(
        min_pair, std::abs(std::min(d[mp.u_index(i)], d[mp.v_index(i)])));
  record("degeneratePairMin", min_pair);

  double du_on_vplus = 0.0;
  for (int i : y.v_plus)
    du_on_vplus = std::max(du_on_vplus, std::abs(d[mp.u_index(i)]));
  record("uComponentOnVPlus", du_on_vplus);

  double dv_on_uplus = 0.0;
  for (int i : y.u_plus)
    dv_on_uplus = std::max(dv_on_uplus, std::abs(d[mp.v_index(i)]));
  record("vComponentOnUPlus", dv_on_uplus);

  Vector ineq_vals = mpcc_ineq_values(mp, y);
  Matrix ineq_jac = mpcc_ineq_jacobian(mp, y);
  double active_violation = 0.0;
  for (int i = 0; i < ineq_vals.size(); ++i)
    if (std::abs(ineq_vals[i]) <= pol.active)
      active_violation =
          std::max(active_violation, -ineq_jac.row(i).dot(d));
  record("activeIneqRows", active_violation);

  const double eq_res =
      mp.num_eq() > 0
          ? (mpcc_eq_jacobian(mp, y) * d).cwiseAbs().maxCoeff()
          : 0.0;
  record("equalityRows", eq_res);

  record("objectiveSlope", std::abs(mpcc_obj_gradient(mp, y).dot(d)));
  return rep;
}

SecondOrderReport classify_second_order(const Matrix& reduced, bool cq_holds,
                                        const StationarityQualifiers& q,
                                        bool mpcc_side,
                                        const TolerancePolicy& pol) {
  SecondOrderReport rep;
  rep.side = mpcc_side ? "mpcc" : "abs";
  rep.basis_cols = static_cast<int>(reduced.cols());
  rep.qualifiers = q;
  rep.vacuous = rep.basis_cols == 0;
  rep.definiteness = classify_definiteness(reduced, pol, rep.eigenvalues);

  const bool psd_ok =
      rep.vacuous || rep.definiteness == Definiteness::PositiveDefinite ||
      rep.definiteness == Definiteness::PositiveSemidefinite;
  const bool pd_ok =
      rep.vacuous || rep.definiteness == Definiteness::PositiveDefinite;

  const bool sufficient_quals =
      mpcc_side ? q.mpcc_strict_complementarity
                : (q.strict_complementarity && q.strict_normal_growth);
  rep.conclusive =
      cq_holds && (mpcc_side ? q.mpcc_strict_complementarity : true);

  if (pd_ok && cq_holds && sufficient_quals)
    rep.classification = "sufficient-holds";
  else if (psd_ok)
    rep.classification = "necessary-holds";
  else
    rep.classification = "fails";
  return rep;
}

}  // namespace kinkcheck
