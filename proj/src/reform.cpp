#include "kinkcheck/reform.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "kinkcheck/errors.hpp"

namespace kinkcheck {

AbsNormalProblem build_slack_nlp(const AbsNormalProblem& p) {
  const int m2 = p.num_ineq();
  if (m2 == 0) return p;

  const int n = p.num_primal;
  const int s = p.num_switching;
  AbsNormalProblem q;
  q.name = p.name + "-slack";
  q.num_primal = n + m2;
  q.num_switching = s + m2;
  q.slack_reformed = true;

  q.objective = {q.num_primal, 0, p.objective.rows};

  std::vector<ExprPtr> eq_rows = p.eq.rows;
  for (int k = 0; k < m2; ++k)
    eq_rows.push_back(Expr::sub(p.ineq.rows[k], Expr::abs_ref(s + k)));
  q.eq = {q.num_primal, q.num_switching, std::move(eq_rows)};
  q.ineq = {q.num_primal, q.num_switching, {}};

  std::vector<ExprPtr> sw_rows = p.switching.rows;
  for (int k = 0; k < m2; ++k) sw_rows.push_back(Expr::var(n + k));
  q.switching = {q.num_primal, q.num_switching, std::move(sw_rows)};

  q.validate();
  return q;
}

namespace {

// m_j -> u_j + v_j over the extended variable vector (x, u, v).
std::vector<ExprPtr> abs_to_pair_sums(int num_x, int num_pairs) {
  std::vector<ExprPtr> repl;
  repl.reserve(num_pairs);
  for (int j = 0; j < num_pairs; ++j)
    repl.push_back(
        Expr::add(Expr::var(num_x + j), Expr::var(num_x + num_pairs + j)));
  return repl;
}

MpccProblem counterpart_of(const AbsNormalProblem& p, MpccFlavor flavor,
                           std::string name, int num_t) {
  const int n = p.num_primal;
  const int s = p.num_switching;
  MpccProblem mp;
  mp.name = std::move(name);
  mp.flavor = flavor;
  mp.num_x = n;
  mp.num_pairs = s;
  mp.num_t = num_t;
  mp.num_eq_base = p.num_eq();
  mp.base = std::make_shared<AbsNormalProblem>(p);

  const int dim = mp.var_dim();
  const auto repl = abs_to_pair_sums(n, s);

  mp.objective = {dim, 0, p.objective.rows};

  std::vector<ExprPtr> eq_rows;
  for (const auto& row : p.eq.rows)
    eq_rows.push_back(substitute_abs_refs(row, repl));
  for (int i = 0; i < s; ++i) {
    ExprPtr z_term =
        Expr::sub(Expr::var(n + i), Expr::var(n + s + i));  // u_i - v_i
    eq_rows.push_back(
        Expr::sub(substitute_abs_refs(p.switching.rows[i], repl), z_term));
  }
  mp.eq = {dim, 0, std::move(eq_rows)};

  std::vector<ExprPtr> ineq_rows;
  for (const auto& row : p.ineq.rows)
    ineq_rows.push_back(substitute_abs_refs(row, repl));
  mp.ineq = {dim, 0, std::move(ineq_rows)};

  mp.validate();
  return mp;
}

}  // namespace

MpccProblem build_counterpart_mpcc(const AbsNormalProblem& p, MpccFlavor f) {
  if (f == MpccFlavor::I)
    return counterpart_of(p, f, p.name + "-mpcc-i", p.num_primal);
  if (p.slack_reformed)
    throw std::invalid_argument(
        "flavor E counterpart of an already slack-reformed problem");
  return counterpart_of(build_slack_nlp(p), MpccFlavor::E, p.name + "-mpcc-e",
                        p.num_primal);
}

MpccPoint classify_mpcc_point(const MpccProblem& mp, const Vector& x,
                              const Vector& u, const Vector& v,
                              const TolerancePolicy& pol) {
  if (x.size() != mp.num_x || u.size() != mp.num_pairs ||
      v.size() != mp.num_pairs)
    throw std::invalid_argument("mpcc point dimensions do not match problem");
  MpccPoint y;
  y.x = x;
  y.u = u;
  y.v = v;
  for (int i = 0; i < mp.num_pairs; ++i) {
    const bool u_act = u[i] <= pol.active;
    const bool v_act = v[i] <= pol.active;
    (u_act ? y.u_zero : y.u_plus).push_back(i);
    (v_act ? y.v_zero : y.v_plus).push_back(i);
    if (u_act && v_act) y.degenerate.push_back(i);
  }
  return y;
}

AbsPoint phi(const MpccProblem& mp, const MpccPoint& y,
             const TolerancePolicy& pol) {
  for (int i = 0; i < mp.num_pairs; ++i) {
    if (y.u[i] < -pol.active || y.v[i] < -pol.active ||
        std::max(y.u[i], 0.0) * std::max(y.v[i], 0.0) >
            pol.active * pol.active)
      throw InfeasiblePointError(
          "complementarity violated at pair " + std::to_string(i + 1),
          std::max(y.u[i], 0.0) * std::max(y.v[i], 0.0));
  }
  return {y.x, y.u - y.v};
}

MpccPoint phi_inv(const SwitchingState& s, const TolerancePolicy& pol) {
  MpccPoint y;
  y.x = s.t;
  y.u = s.z.cwiseMax(0.0);
  y.v = (-s.z).cwiseMax(0.0);
  for (int i = 0; i < s.z.size(); ++i) {
    const bool u_act = y.u[i] <= pol.active;
    const bool v_act = y.v[i] <= pol.active;
    (u_act ? y.u_zero : y.u_plus).push_back(i);
    (v_act ? y.v_zero : y.v_plus).push_back(i);
    if (u_act && v_act) y.degenerate.push_back(i);
  }
  return y;
}

namespace {

std::vector<Vector> slack_choices_impl(const AbsNormalProblem& p,
                                       const SwitchingState& s,
                                       const TolerancePolicy& pol,
                                       int sample_count, std::uint64_t seed) {
  const int m2 = p.num_ineq();
  Vector base = Vector::Zero(m2);
  std::vector<int> inactive;
  for (int i = 0; i < m2; ++i) {
    const double ci = s.ineq_values[i];
    if (ci < -pol.active)
      throw InfeasiblePointError(
          "inequality " + std::to_string(i + 1) + " negative (" +
              std::to_string(ci) + "); no slack choice exists",
          -ci);
    if (std::abs(ci) <= pol.active) continue;  // active: w_i forced to 0
    base[i] = ci;
    inactive.push_back(i);
  }

  std::vector<Vector> out;
  if (sample_count < 0) {
    if (inactive.size() > 20)
      throw NumericError("slack enumeration guard exceeded (2^" +
                         std::to_string(inactive.size()) + " choices)");
    const std::uint64_t count = 1ull << inactive.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      Vector w = base;
      for (size_t k = 0; k < inactive.size(); ++k)
        if (mask & (1ull << k)) w[inactive[k]] = -w[inactive[k]];
      out.push_back(std::move(w));
    }
  } else {
    std::mt19937_64 rng(seed);
    for (int c = 0; c < sample_count; ++c) {
      Vector w = base;
      for (int i : inactive)
        if (rng() & 1u) w[i] = -w[i];
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace

std::vector<Vector> enumerate_slack_choices(const AbsNormalProblem& p,
                                            const SwitchingState& s,
                                            const TolerancePolicy& pol) {
  return slack_choices_impl(p, s, pol, -1, 0);
}

std::vector<Vector> sample_slack_choices(const AbsNormalProblem& p,
                                         const SwitchingState& s,
                                         const TolerancePolicy& pol, int count,
                                         std::uint64_t seed) {
  return slack_choices_impl(p, s, pol, count, seed);
}

Vector mpcc_stack(const MpccProblem& mp, const MpccPoint& y) {
  Vector xuv(mp.var_dim());
  xuv << y.x, y.u, y.v;
  return xuv;
}

Vector mpcc_eq_values(const MpccProblem& mp, const MpccPoint& y) {
  return mp.eq.eval(mpcc_stack(mp, y), Vector(0));
}

Vector mpcc_ineq_values(const MpccProblem& mp, const MpccPoint& y) {
  return mp.ineq.eval(mpcc_stack(mp, y), Vector(0));
}

Matrix mpcc_eq_jacobian(const MpccProblem& mp, const MpccPoint& y) {
  return mp.eq.jacobian(mpcc_stack(mp, y), Vector(0)).first;
}

Matrix mpcc_ineq_jacobian(const MpccProblem& mp, const MpccPoint& y) {
  return mp.ineq.jacobian(mpcc_stack(mp, y), Vector(0)).first;
}

Vector mpcc_obj_gradient(const MpccProblem& mp, const MpccPoint& y) {
  return mp.objective.jacobian(mpcc_stack(mp, y), Vector(0))
      .first.row(0)
      .transpose();
}

double mpcc_feasibility_violation(const MpccProblem& mp, const MpccPoint& y,
                                  const TolerancePolicy& pol) {
  double v = 0.0;
  Vector eq = mpcc_eq_values(mp, y);
  if (eq.size() > 0) v = eq.cwiseAbs().maxCoeff();
  Vector ineq = mpcc_ineq_values(mp, y);
  for (int i = 0; i < ineq.size(); ++i) v = std::max(v, -ineq[i]);
  for (int i = 0; i < mp.num_pairs; ++i) {
    v = std::max(v, -y.u[i]);
    v = std::max(v, -y.v[i]);
    const double prod = std::max(y.u[i], 0.0) * std::max(y.v[i], 0.0);
    if (prod > pol.active * pol.active) v = std::max(v, std::sqrt(prod));
  }
  return v;
}

void require_mpcc_feasible(const MpccProblem& mp, const MpccPoint& y,
                           const TolerancePolicy& pol) {
  const double v = mpcc_feasibility_violation(mp, y, pol);
  if (v > pol.active)
    throw InfeasiblePointError("mpcc point infeasible (violation " +
                                   std::to_string(v) + ")",
                               v);
}

}  // namespace kinkcheck
