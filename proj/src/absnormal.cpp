#include "kinkcheck/absnormal.hpp"

#include <cmath>
#include <stdexcept>

namespace kinkcheck {

bool SwitchingState::feasible(double tol) const {
  return feasibility_violation() <= tol;
}

double SwitchingState::feasibility_violation() const {
  double v = 0.0;
  if (eq_values.size() > 0) v = eq_values.cwiseAbs().maxCoeff();
  for (int i = 0; i < ineq_values.size(); ++i)
    v = std::max(v, -ineq_values[i]);
  return v;
}

SwitchingState evaluate_switching(const AbsNormalProblem& p, const Vector& t,
                                  const TolerancePolicy& pol) {
  if (t.size() != p.num_primal)
    throw std::invalid_argument("point dimension does not match problem");
  const int s = p.num_switching;
  SwitchingState st;
  st.t = t;
  st.z = Vector::Zero(s);

  // Forward substitution: row i only references |z_j| with j < i.
  Vector abs_z = Vector::Zero(s);
  for (int i = 0; i < s; ++i) {
    st.z[i] = eval_expr(*p.switching.rows[i], t, abs_z);
    abs_z[i] = std::abs(st.z[i]);
  }

  st.sigma.resize(s);
  for (int i = 0; i < s; ++i) {
    if (std::abs(st.z[i]) <= pol.active) {
      st.sigma[i] = 0;
      st.alpha.push_back(i);
    } else {
      st.sigma[i] = st.z[i] > 0.0 ? 1 : -1;
    }
  }

  // Fixed-point residual of z = cZ(t, |z|); exact up to roundoff by
  // construction, recorded for the report.
  if (s > 0) {
    Vector resid = p.switching.eval(t, abs_z) - st.z;
    st.switch_residual = resid.cwiseAbs().maxCoeff();
  }

  // dz/dt = [I - d2cZ * Sigma]^{-1} d1cZ; the system matrix is unit lower
  // triangular because d2cZ is strictly lower triangular.
  auto [d1z, d2z] = p.switching.jacobian(t, abs_z);
  Matrix lhs = Matrix::Identity(s, s);
  for (int j = 0; j < s; ++j)
    if (st.sigma[j] != 0)
      lhs.col(j) -= d2z.col(j) * static_cast<double>(st.sigma[j]);
  st.dz_dt = s > 0
                 ? lhs.triangularView<Eigen::Lower>().solve(d1z).eval()
                 : Matrix(0, p.num_primal);

  st.eq_values = p.eq.eval(t, abs_z);
  st.ineq_values = p.ineq.eval(t, abs_z);
  for (int i = 0; i < st.ineq_values.size(); ++i)
    if (std::abs(st.ineq_values[i]) <= pol.active) st.active_ineq.push_back(i);

  return st;
}

Matrix total_jacobian(const SmoothFunction& c, const SwitchingState& s) {
  auto [d1, d2] = c.jacobian(s.t, s.abs_z());
  Matrix sig_dz = s.dz_dt;
  for (int i = 0; i < sig_dz.rows(); ++i)
    sig_dz.row(i) *= static_cast<double>(s.sigma[i]);
  return d1 + d2 * sig_dz;
}

Matrix JacobianBundle::stacked() const {
  Matrix out(eq.rows() + active_ineq.rows() + active_switch.rows(), eq.cols());
  out.topRows(eq.rows()) = eq;
  out.middleRows(eq.rows(), active_ineq.rows()) = active_ineq;
  out.bottomRows(active_switch.rows()) = active_switch;
  return out;
}

JacobianBundle assemble_jacobians(const AbsNormalProblem& p,
                                  const SwitchingState& s) {
  JacobianBundle b;
  b.eq = total_jacobian(p.eq, s);
  Matrix ineq_full = total_jacobian(p.ineq, s);
  b.active_ineq.resize(s.active_ineq.size(), p.num_primal);
  for (size_t k = 0; k < s.active_ineq.size(); ++k)
    b.active_ineq.row(k) = ineq_full.row(s.active_ineq[k]);
  b.active_switch.resize(s.alpha.size(), p.num_primal);
  for (size_t k = 0; k < s.alpha.size(); ++k)
    b.active_switch.row(k) = s.dz_dt.row(s.alpha[k]);
  return b;
}

Matrix lagrangian_hessian_abs(const AbsNormalProblem& p,
                              const SwitchingState& s,
                              const MultiplierSet& lam) {
  if (lam.eq.size() != p.num_eq() || lam.ineq.size() != p.num_ineq() ||
      lam.sw.size() != p.num_switching)
    throw std::invalid_argument("multiplier dimensions do not match problem");
  const int n = p.num_primal + p.num_switching;
  const Vector m = s.abs_z();
  Matrix h = Matrix::Zero(n, n);
  h.topLeftCorner(p.num_primal, p.num_primal) =
      p.objective.hessian(0, s.t, Vector(0));
  for (int i = 0; i < p.num_eq(); ++i)
    if (lam.eq[i] != 0.0) h += lam.eq[i] * p.eq.hessian(i, s.t, m);
  for (int i = 0; i < p.num_ineq(); ++i)
    if (lam.ineq[i] != 0.0) h -= lam.ineq[i] * p.ineq.hessian(i, s.t, m);
  for (int i = 0; i < p.num_switching; ++i)
    if (lam.sw[i] != 0.0) h += lam.sw[i] * p.switching.hessian(i, s.t, m);
  return h;
}

}  // namespace kinkcheck
