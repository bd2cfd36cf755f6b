#include "kinkcheck/stationarity.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>

#include "kinkcheck/errors.hpp"
#include "kinkcheck/numkernel.hpp"

namespace kinkcheck {

namespace {

constexpr double kEqTol = 1e-8;  // scaled equality residual tolerance

void require_feasible(const SwitchingState& s, const TolerancePolicy& pol) {
  const double v = s.feasibility_violation();
  if (v > pol.active)
    throw InfeasiblePointError(
        "point infeasible (violation " + std::to_string(v) + ")", v);
}

void check_dims(const AbsNormalProblem& p, const MultiplierSet& lam) {
  if (lam.eq.size() != p.num_eq() || lam.ineq.size() != p.num_ineq() ||
      lam.sw.size() != p.num_switching)
    throw std::invalid_argument("multiplier dimensions do not match problem");
}

double multiplier_scale(const MultiplierSet& lam) {
  double s = 1.0;
  if (lam.eq.size()) s = std::max(s, lam.eq.cwiseAbs().maxCoeff());
  if (lam.ineq.size()) s = std::max(s, lam.ineq.cwiseAbs().maxCoeff());
  if (lam.sw.size()) s = std::max(s, lam.sw.cwiseAbs().maxCoeff());
  return s;
}

// Row vector lamE^T d2cE - lamI^T d2cI + lamZ^T d2cZ at (t, |z|): the
// second-argument gradient of the Lagrangian, shared by the normal-growth
// and sign-equality conditions and by the multiplier map.
Vector second_arg_combination(const AbsNormalProblem& p,
                              const SwitchingState& s,
                              const MultiplierSet& lam) {
  const Vector m = s.abs_z();
  Vector g = Vector::Zero(p.num_switching);
  if (p.num_eq() > 0)
    g += p.eq.jacobian(s.t, m).second.transpose() * lam.eq;
  if (p.num_ineq() > 0)
    g -= p.ineq.jacobian(s.t, m).second.transpose() * lam.ineq;
  if (p.num_switching > 0)
    g += p.switching.jacobian(s.t, m).second.transpose() * lam.sw;
  return g;
}

Vector gradient_residual_abs(const AbsNormalProblem& p,
                             const SwitchingState& s,
                             const MultiplierSet& lam) {
  const Vector m = s.abs_z();
  Vector g = p.objective.jacobian(s.t, Vector(0)).first.row(0).transpose();
  if (p.num_eq() > 0) g += p.eq.jacobian(s.t, m).first.transpose() * lam.eq;
  if (p.num_ineq() > 0)
    g -= p.ineq.jacobian(s.t, m).first.transpose() * lam.ineq;
  if (p.num_switching > 0)
    g += p.switching.jacobian(s.t, m).first.transpose() * lam.sw;
  return g;
}

void record(StationarityVerdict& v, const std::string& group, double residual,
            double tol) {
  v.residuals[group] = residual;
  if (residual > tol) {
    v.violated.push_back(group);
    v.holds = false;
  }
}

}  // namespace

StationarityVerdict check_kink_stationarity(const AbsNormalProblem& p,
                                            const SwitchingState& s,
                                            const MultiplierSet& lam,
                                            const TolerancePolicy& pol) {
  require_feasible(s, pol);
  check_dims(p, lam);
  StationarityVerdict v;
  v.kind = "kink";
  v.holds = true;
  v.multipliers = lam;

  const double eq_tol = kEqTol * multiplier_scale(lam);

  record(v, "gradient", gradient_residual_abs(p, s, lam).cwiseAbs().maxCoeff(),
         eq_tol);

  const Vector g = second_arg_combination(p, s, lam);
  double growth_violation = 0.0;
  for (int i : s.alpha)
    growth_violation =
        std::max(growth_violation, std::abs(lam.sw[i]) - g[i]);
  record(v, "normalGrowth", growth_violation, pol.active);

  double sign_residual = 0.0;
  for (int i = 0; i < p.num_switching; ++i)
    if (s.sigma[i] != 0)
      sign_residual =
          std::max(sign_residual, std::abs(g[i] - lam.sw[i] * s.sigma[i]));
  record(v, "inactiveSignEquality", sign_residual, eq_tol);

  double ineq_sign = 0.0;
  for (int i = 0; i < lam.ineq.size(); ++i)
    ineq_sign = std::max(ineq_sign, -lam.ineq[i]);
  record(v, "ineqMultiplierSign", ineq_sign, pol.active);

  const double comp_slack =
      lam.ineq.size() ? std::abs(lam.ineq.dot(s.ineq_values)) : 0.0;
  record(v, "complementarySlackness", comp_slack, eq_tol);

  if (v.holds) v.qualifiers = qualifier_flags(p, s, lam, pol);
  return v;
}

KinkEqualitySystem kink_multiplier_equalities(const AbsNormalProblem& p,
                                              const SwitchingState& s) {
  const int m1 = p.num_eq(), m2 = p.num_ineq(), sw = p.num_switching;
  const int n = p.num_primal;
  const int nvars = m1 + m2 + sw;
  const Vector m = s.abs_z();

  auto [d1e, d2e] = p.eq.jacobian(s.t, m);
  auto [d1i, d2i] = p.ineq.jacobian(s.t, m);
  auto [d1z, d2z] = p.switching.jacobian(s.t, m);
  const Vector f_grad =
      p.objective.jacobian(s.t, Vector(0)).first.row(0).transpose();

  int inactive_sw = 0;
  for (int i = 0; i < sw; ++i)
    if (s.sigma[i] != 0) ++inactive_sw;
  int inactive_ineq = m2 - static_cast<int>(s.active_ineq.size());

  KinkEqualitySystem sys;
  sys.num_vars = nvars;
  sys.a_eq = Matrix::Zero(n + inactive_sw + inactive_ineq, nvars);
  sys.b_eq = Vector::Zero(sys.a_eq.rows());

  // gradient rows
  sys.a_eq.block(0, 0, n, m1) = d1e.transpose();
  sys.a_eq.block(0, m1, n, m2) = -d1i.transpose();
  sys.a_eq.block(0, m1 + m2, n, sw) = d1z.transpose();
  sys.b_eq.head(n) = -f_grad;

  // sign equalities on inactive switching rows
  int r = n;
  for (int i = 0; i < sw; ++i) {
    if (s.sigma[i] == 0) continue;
    sys.a_eq.block(r, 0, 1, m1) = d2e.col(i).transpose();
    sys.a_eq.block(r, m1, 1, m2) = -d2i.col(i).transpose();
    sys.a_eq.block(r, m1 + m2, 1, sw) = d2z.col(i).transpose();
    sys.a_eq(r, m1 + m2 + i) -= static_cast<double>(s.sigma[i]);
    ++r;
  }

  // complementary slackness: lamI vanishes on inactive inequalities
  for (int i = 0; i < m2; ++i) {
    if (std::find(s.active_ineq.begin(), s.active_ineq.end(), i) !=
        s.active_ineq.end())
      continue;
    sys.a_eq(r, m1 + i) = 1.0;
    ++r;
  }
  return sys;
}

MultiplierSolve solve_kink_multipliers(const AbsNormalProblem& p,
                                       const SwitchingState& s,
                                       const TolerancePolicy& pol) {
  require_feasible(s, pol);
  const int m1 = p.num_eq(), m2 = p.num_ineq(), sw = p.num_switching;
  const int nvars = m1 + m2 + sw;
  const Vector m = s.abs_z();

  KinkEqualitySystem sys = kink_multiplier_equalities(p, s);

  auto [d1e, d2e] = p.eq.jacobian(s.t, m);
  auto [d1i, d2i] = p.ineq.jacobian(s.t, m);
  auto [d1z, d2z] = p.switching.jacobian(s.t, m);

  // normal growth split into two linear inequalities per active row, plus
  // sign constraints on all inequality multipliers
  const int na = static_cast<int>(s.alpha.size());
  Matrix a_ineq = Matrix::Zero(2 * na + m2, nvars);
  int r = 0;
  for (int i : s.alpha) {
    for (double sign : {1.0, -1.0}) {
      a_ineq.block(r, 0, 1, m1) = d2e.col(i).transpose();
      a_ineq.block(r, m1, 1, m2) = -d2i.col(i).transpose();
      a_ineq.block(r, m1 + m2, 1, sw) = d2z.col(i).transpose();
      a_ineq(r, m1 + m2 + i) -= sign;
      ++r;
    }
  }
  for (int i = 0; i < m2; ++i) a_ineq(r++, m1 + i) = 1.0;

  MultiplierSolve out;
  LpResult lp = solve_linear_feasibility(sys.a_eq, sys.b_eq, a_ineq,
                                         Vector::Zero(a_ineq.rows()));
  if (lp.status == LpStatus::IterationLimit) {
    out.diagnostic = "simplex iteration guard exceeded";
    return out;
  }
  if (lp.status == LpStatus::Optimal) {
    out.multipliers.eq = lp.x.head(m1);
    out.multipliers.ineq = lp.x.segment(m1, m2);
    out.multipliers.sw = lp.x.tail(sw);
    StationarityVerdict check = check_kink_stationarity(p, s, out.multipliers, pol);
    out.found = check.holds;
    if (!out.found) out.diagnostic = "solver certificate failed verification";
    return out;
  }

  // Infeasible: describe what the equality part forces.
  Vector ls = sys.a_eq.completeOrthogonalDecomposition().solve(sys.b_eq);
  const double ls_residual =
      sys.a_eq.rows() ? (sys.a_eq * ls - sys.b_eq).cwiseAbs().maxCoeff() : 0.0;
  if (ls_residual > 1e-6 * (1.0 + ls.cwiseAbs().maxCoeff())) {
    out.diagnostic =
        "equality conditions inconsistent (least-squares residual " +
        std::to_string(ls_residual) + ")";
    return out;
  }
  MultiplierSet cand;
  cand.eq = ls.head(m1);
  cand.ineq = ls.segment(m1, m2);
  cand.sw = ls.tail(sw);
  const Vector g = second_arg_combination(p, s, cand);
  double worst = 0.0;
  int worst_row = -1;
  for (int i : s.alpha) {
    const double margin = g[i] - std::abs(cand.sw[i]);
    if (margin < worst) {
      worst = margin;
      worst_row = i;
    }
  }
  out.diagnostic = "first-order system infeasible";
  if (worst_row >= 0)
    out.diagnostic += "; equality part admits multipliers but normal growth "
                      "fails at switching row " +
                      std::to_string(worst_row + 1) + " (margin " +
                      std::to_string(worst) + ")";
  return out;
}

namespace {

void require_counterpart(const MpccProblem& mp) {
  if (mp.num_eq_base < 0 || mp.num_eq() != mp.num_eq_base + mp.num_pairs)
    throw std::invalid_argument(
        "stationarity analysis needs a counterpart MPCC with row layout");
}

void check_dims_mpcc(const MpccProblem& mp, const MultiplierSet& lam) {
  if (lam.eq.size() != mp.num_eq_base || lam.ineq.size() != mp.num_ineq() ||
      lam.sw.size() != mp.num_pairs)
    throw std::invalid_argument("multiplier dimensions do not match mpcc");
  if (!lam.mu_u || !lam.mu_v || lam.mu_u->size() != mp.num_pairs ||
      lam.mu_v->size() != mp.num_pairs)
    throw std::invalid_argument("mu multipliers missing or mis-sized");
}

}  // namespace

StationarityVerdict check_s_stationarity(const MpccProblem& mp,
                                         const MpccPoint& y,
                                         const MultiplierSet& lam_mu,
                                         const TolerancePolicy& pol) {
  require_counterpart(mp);
  check_dims_mpcc(mp, lam_mu);
  require_mpcc_feasible(mp, y, pol);

  StationarityVerdict v;
  v.kind = "s";
  v.holds = true;
  v.multipliers = lam_mu;

  double scale = multiplier_scale(lam_mu);
  if (mp.num_pairs > 0) {
    scale = std::max(scale, lam_mu.mu_u->cwiseAbs().maxCoeff());
    scale = std::max(scale, lam_mu.mu_v->cwiseAbs().maxCoeff());
  }
  const double eq_tol = kEqTol * scale;

  Vector lam_all(mp.num_eq());
  lam_all << lam_mu.eq, lam_mu.sw;

  Vector grad = mpcc_obj_gradient(mp, y);
  if (mp.num_eq() > 0)
    grad += mpcc_eq_jacobian(mp, y).transpose() * lam_all;
  if (mp.num_ineq() > 0)
    grad -= mpcc_ineq_jacobian(mp, y).transpose() * lam_mu.ineq;
  for (int i = 0; i < mp.num_pairs; ++i) {
    grad[mp.u_index(i)] -= (*lam_mu.mu_u)[i];
    grad[mp.v_index(i)] -= (*lam_mu.mu_v)[i];
  }
  record(v, "gradient", grad.cwiseAbs().maxCoeff(), eq_tol);

  double degenerate_sign = 0.0;
  for (int i : y.degenerate)
    degenerate_sign = std::max(
        degenerate_sign, std::max(-(*lam_mu.mu_u)[i], -(*lam_mu.mu_v)[i]));
  record(v, "degenerateSign", degenerate_sign, pol.active);

  double u_plus_zero = 0.0;
  for (int i : y.u_plus)
    u_plus_zero = std::max(u_plus_zero, std::abs((*lam_mu.mu_u)[i]));
  record(v, "uPlusZero", u_plus_zero, eq_tol);

  double v_plus_zero = 0.0;
  for (int i : y.v_plus)
    v_plus_zero = std::max(v_plus_zero, std::abs((*lam_mu.mu_v)[i]));
  record(v, "vPlusZero", v_plus_zero, eq_tol);

  double ineq_sign = 0.0;
  for (int i = 0; i < lam_mu.ineq.size(); ++i)
    ineq_sign = std::max(ineq_sign, -lam_mu.ineq[i]);
  record(v, "ineqMultiplierSign", ineq_sign, pol.active);

  const double comp = lam_mu.ineq.size()
                          ? std::abs(lam_mu.ineq.dot(mpcc_ineq_values(mp, y)))
                          : 0.0;
  record(v, "complementarySlackness", comp, eq_tol);

  if (v.holds && mp.base) {
    // Qualifier flags live on the abs-normal side of the correspondence.
    SwitchingState s = evaluate_switching(*mp.base, y.x, pol);
    v.qualifiers = qualifier_flags(*mp.base, s, lam_mu, pol);
  }
  return v;
}

MultiplierSolve solve_s_multipliers(const MpccProblem& mp, const MpccPoint& y,
                                    const TolerancePolicy& pol) {
  require_counterpart(mp);
  require_mpcc_feasible(mp, y, pol);

  const int me = mp.num_eq_base;
  const int mi = mp.num_ineq();
  const int sp = mp.num_pairs;
  const int dim = mp.var_dim();
  // variables: lam_base(me), lam_z(sp), lam_I(mi), mu_u(sp), mu_v(sp)
  const int nvars = me + sp + mi + 2 * sp;

  Matrix eq_jac = mpcc_eq_jacobian(mp, y);
  Matrix ineq_jac = mpcc_ineq_jacobian(mp, y);
  Vector f_grad = mpcc_obj_gradient(mp, y);
  Vector ineq_vals = mpcc_ineq_values(mp, y);

  std::vector<int> zero_mu_u = y.u_plus, zero_mu_v = y.v_plus;
  std::vector<int> inactive_ineq;
  for (int i = 0; i < mi; ++i)
    if (std::abs(ineq_vals[i]) > pol.active) inactive_ineq.push_back(i);

  const int eq_rows = dim + static_cast<int>(zero_mu_u.size()) +
                      static_cast<int>(zero_mu_v.size()) +
                      static_cast<int>(inactive_ineq.size());
  Matrix a_eq = Matrix::Zero(eq_rows, nvars);
  Vector b_eq = Vector::Zero(eq_rows);

  a_eq.block(0, 0, dim, me + sp) = eq_jac.transpose();
  if (mi > 0) a_eq.block(0, me + sp, dim, mi) = -ineq_jac.transpose();
  for (int i = 0; i < sp; ++i) {
    a_eq(mp.u_index(i), me + sp + mi + i) = -1.0;
    a_eq(mp.v_index(i), me + sp + mi + sp + i) = -1.0;
  }
  b_eq.head(dim) = -f_grad;

  int r = dim;
  for (int i : zero_mu_u) a_eq(r++, me + sp + mi + i) = 1.0;
  for (int i : zero_mu_v) a_eq(r++, me + sp + mi + sp + i) = 1.0;
  for (int i : inactive_ineq) a_eq(r++, me + sp + i) = 1.0;

  const int ineq_rows = 2 * static_cast<int>(y.degenerate.size()) + mi;
  Matrix a_ineq = Matrix::Zero(ineq_rows, nvars);
  r = 0;
  for (int i : y.degenerate) {
    a_ineq(r++, me + sp + mi + i) = 1.0;
    a_ineq(r++, me + sp + mi + sp + i) = 1.0;
  }
  for (int i = 0; i < mi; ++i) a_ineq(r++, me + sp + i) = 1.0;

  MultiplierSolve out;
  LpResult lp = solve_linear_feasibility(a_eq, b_eq, a_ineq,
                                         Vector::Zero(ineq_rows));
  if (lp.status == LpStatus::IterationLimit) {
    out.diagnostic = "simplex iteration guard exceeded";
    return out;
  }
  if (lp.status != LpStatus::Optimal) {
    out.diagnostic = "first-order system infeasible";
    return out;
  }
  out.multipliers.eq = lp.x.head(me);
  out.multipliers.sw = lp.x.segment(me, sp);
  out.multipliers.ineq = lp.x.segment(me + sp, mi);
  out.multipliers.mu_u = lp.x.segment(me + sp + mi, sp);
  out.multipliers.mu_v = lp.x.tail(sp);
  StationarityVerdict check = check_s_stationarity(mp, y, out.multipliers, pol);
  out.found = check.holds;
  if (!out.found) out.diagnostic = "solver certificate failed verification";
  return out;
}

MultiplierSet map_multipliers_kink_to_s(const AbsNormalProblem& p,
                                        const SwitchingState& s,
                                        const MultiplierSet& lam) {
  check_dims(p, lam);
  MultiplierSet out = lam;
  const Vector g = second_arg_combination(p, s, lam);
  out.mu_u = g - lam.sw;
  out.mu_v = g + lam.sw;
  return out;
}

MultiplierSet map_multipliers_s_to_kink(const MultiplierSet& lam_mu) {
  MultiplierSet out = lam_mu;
  out.mu_u.reset();
  out.mu_v.reset();
  return out;
}

StationarityQualifiers qualifier_flags(const AbsNormalProblem& p,
                                       const SwitchingState& s,
                                       const MultiplierSet& lam,
                                       const TolerancePolicy& pol) {
  check_dims(p, lam);
  StationarityQualifiers q;
  q.strict_complementarity = true;
  for (int i : s.active_ineq)
    if (lam.ineq[i] <= pol.active) q.strict_complementarity = false;

  const Vector g = second_arg_combination(p, s, lam);
  q.strict_normal_growth = true;
  for (int i : s.alpha)
    if (g[i] - std::abs(lam.sw[i]) <= pol.active)
      q.strict_normal_growth = false;

  Vector mu_u, mu_v;
  if (lam.mu_u && lam.mu_v) {
    mu_u = *lam.mu_u;
    mu_v = *lam.mu_v;
  } else {
    mu_u = g - lam.sw;
    mu_v = g + lam.sw;
  }
  q.mpcc_strict_complementarity = q.strict_complementarity;
  for (int i : s.alpha)
    if (mu_u[i] <= pol.active || mu_v[i] <= pol.active)
      q.mpcc_strict_complementarity = false;
  return q;
}

}  // namespace kinkcheck
