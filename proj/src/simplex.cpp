#include <cmath>
#include <limits>
#include <vector>

#include "kinkcheck/errors.hpp"
#include "kinkcheck/numkernel.hpp"

namespace kinkcheck {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kReducedCostTol = 1e-9;

// Dense tableau simplex with Bland's anti-cycling rule. The tableau holds
// the constraint body and rhs; `basis` maps rows to basic columns.
struct Tableau {
  Matrix body;  // m x n
  Vector rhs;   // m
  std::vector<int> basis;

  int rows() const { return static_cast<int>(body.rows()); }
  int cols() const { return static_cast<int>(body.cols()); }

  void pivot(int row, int col) {
    const double p = body(row, col);
    body.row(row) /= p;
    rhs[row] /= p;
    for (int i = 0; i < rows(); ++i) {
      if (i == row) continue;
      const double factor = body(i, col);
      if (factor == 0.0) continue;
      body.row(i) -= factor * body.row(row);
      rhs[i] -= factor * rhs[row];
    }
    basis[row] = col;
  }
};

enum class IterOutcome { Optimal, Unbounded, IterationLimit };

// Minimize cost over columns marked allowed. Bland: entering = lowest index
// with negative reduced cost; leaving = lowest basic index among ratio ties.
IterOutcome run_simplex(Tableau& t, const Vector& cost,
                        const std::vector<bool>& allowed, int max_iter) {
  for (int iter = 0; iter < max_iter; ++iter) {
    // reduced costs: c_j - c_B^T body_j
    Vector dual = Vector::Zero(t.rows());
    for (int i = 0; i < t.rows(); ++i) dual[i] = cost[t.basis[i]];
    int entering = -1;
    for (int j = 0; j < t.cols(); ++j) {
      if (!allowed[j]) continue;
      const double r = cost[j] - dual.dot(t.body.col(j));
      if (r < -kReducedCostTol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return IterOutcome::Optimal;

    int leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < t.rows(); ++i) {
      const double a = t.body(i, entering);
      if (a <= kPivotTol) continue;
      const double ratio = t.rhs[i] / a;
      if (ratio < best_ratio - 1e-12 ||
          (std::abs(ratio - best_ratio) <= 1e-12 &&
           (leaving < 0 || t.basis[i] < t.basis[leaving]))) {
        best_ratio = ratio;
        leaving = i;
      }
    }
    if (leaving < 0) return IterOutcome::Unbounded;
    t.pivot(leaving, entering);
  }
  return IterOutcome::IterationLimit;
}

}  // namespace

LpResult solve_lp_standard(const Vector& c, const Matrix& a, const Vector& b) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  LpResult out;
  if (m == 0) {
    out.status = LpStatus::Optimal;
    out.x = Vector::Zero(n);
    out.objective = 0.0;
    return out;
  }

  Tableau t;
  t.body = Matrix::Zero(m, n + m);
  t.body.leftCols(n) = a;
  t.rhs = b;
  for (int i = 0; i < m; ++i) {
    if (t.rhs[i] < 0.0) {
      t.body.row(i) = -t.body.row(i);
      t.rhs[i] = -t.rhs[i];
    }
    t.body(i, n + i) = 1.0;
    t.basis.push_back(n + i);
  }

  const int max_iter = 10 * (m + n + m);

  // Phase 1: drive the artificial variables to zero.
  Vector phase1_cost = Vector::Zero(n + m);
  phase1_cost.tail(m).setOnes();
  std::vector<bool> all_allowed(n + m, true);
  IterOutcome o = run_simplex(t, phase1_cost, all_allowed, max_iter);
  if (o == IterOutcome::IterationLimit) {
    out.status = LpStatus::IterationLimit;
    return out;
  }
  double artificial_sum = 0.0;
  for (int i = 0; i < m; ++i)
    if (t.basis[i] >= n) artificial_sum += t.rhs[i];
  if (artificial_sum > 1e-9 * (1.0 + b.cwiseAbs().sum())) {
    out.status = LpStatus::Infeasible;
    return out;
  }

  // Pivot remaining artificials out of the basis; rows that cannot pivot are
  // redundant and get dropped.
  std::vector<int> keep;
  for (int i = 0; i < t.rows(); ++i) {
    if (t.basis[i] < n) {
      keep.push_back(i);
      continue;
    }
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t.body(i, j)) > 1e-8) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      t.pivot(i, col);
      keep.push_back(i);
    }
  }
  if (static_cast<int>(keep.size()) < t.rows()) {
    Matrix body(keep.size(), t.cols());
    Vector rhs(keep.size());
    std::vector<int> basis;
    for (size_t k = 0; k < keep.size(); ++k) {
      body.row(k) = t.body.row(keep[k]);
      rhs[k] = t.rhs[keep[k]];
      basis.push_back(t.basis[keep[k]]);
    }
    t.body = std::move(body);
    t.rhs = std::move(rhs);
    t.basis = std::move(basis);
  }

  // Phase 2 over the structural columns only.
  Vector phase2_cost = Vector::Zero(n + m);
  phase2_cost.head(n) = c;
  std::vector<bool> structural(n + m, false);
  for (int j = 0; j < n; ++j) structural[j] = true;
  o = run_simplex(t, phase2_cost, structural, max_iter);
  if (o == IterOutcome::IterationLimit) {
    out.status = LpStatus::IterationLimit;
    return out;
  }
  if (o == IterOutcome::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  out.status = LpStatus::Optimal;
  out.x = Vector::Zero(n);
  for (int i = 0; i < t.rows(); ++i)
    if (t.basis[i] < n) out.x[t.basis[i]] = t.rhs[i];
  out.objective = c.dot(out.x);
  return out;
}

LpResult solve_linear_feasibility(const Matrix& a_eq, const Vector& b_eq,
                                  const Matrix& a_ineq, const Vector& b_ineq) {
  const int n = static_cast<int>(std::max(a_eq.cols(), a_ineq.cols()));
  const int me = static_cast<int>(a_eq.rows());
  const int mi = static_cast<int>(a_ineq.rows());

  // free x split into x = p - q; inequalities get surplus columns.
  const int cols = 2 * n + mi;
  Matrix a = Matrix::Zero(me + mi, cols);
  Vector b(me + mi);
  if (me > 0) {
    a.block(0, 0, me, n) = a_eq;
    a.block(0, n, me, n) = -a_eq;
    b.head(me) = b_eq;
  }
  if (mi > 0) {
    a.block(me, 0, mi, n) = a_ineq;
    a.block(me, n, mi, n) = -a_ineq;
    a.block(me, 2 * n, mi, mi) = -Matrix::Identity(mi, mi);
    b.tail(mi) = b_ineq;
  }

  LpResult lp = solve_lp_standard(Vector::Zero(cols), a, b);
  LpResult out;
  out.status = lp.status;
  if (lp.status == LpStatus::Optimal) {
    out.x = lp.x.head(n) - lp.x.segment(n, n);
    out.objective = 0.0;
  }
  return out;
}

StrictDirectionResult strict_direction(const Matrix& a_eq,
                                       const Matrix& a_strict,
                                       const TolerancePolicy& pol) {
  StrictDirectionResult res;
  const int n = static_cast<int>(std::max(a_eq.cols(), a_strict.cols()));
  const int me = static_cast<int>(a_eq.rows());
  const int ms = static_cast<int>(a_strict.rows());
  if (me > 0 && ms > 0 && a_eq.cols() != a_strict.cols())
    throw std::invalid_argument("strict_direction: column count mismatch");

  if (ms == 0) {
    // Vacuous strict part: d = 0 works and the margin is unbounded.
    res.feasible = true;
    res.direction = Vector::Zero(n);
    res.margin = std::numeric_limits<double>::infinity();
    return res;
  }
  if (n == 0) {
    res.feasible = false;
    res.margin = 0.0;
    return res;
  }

  // max s  s.t.  a_eq (p-q) = 0,  a_strict (p-q) - s - r = 0,
  //              p + sp = 1,  q + sq = 1,  all vars >= 0, s = s+ - s-.
  // Columns: p(n) q(n) s+ s- r(ms) sp(n) sq(n).
  const int cols = 4 * n + 2 + ms;
  const int rows = me + ms + 2 * n;
  Matrix a = Matrix::Zero(rows, cols);
  Vector b = Vector::Zero(rows);
  if (me > 0) {
    a.block(0, 0, me, n) = a_eq;
    a.block(0, n, me, n) = -a_eq;
  }
  a.block(me, 0, ms, n) = a_strict;
  a.block(me, n, ms, n) = -a_strict;
  a.block(me, 2 * n, ms, 1).setConstant(-1.0);
  a.block(me, 2 * n + 1, ms, 1).setConstant(1.0);
  a.block(me, 2 * n + 2, ms, ms) = -Matrix::Identity(ms, ms);
  for (int i = 0; i < n; ++i) {
    a(me + ms + i, i) = 1.0;
    a(me + ms + i, 2 * n + 2 + ms + i) = 1.0;
    b[me + ms + i] = 1.0;
    a(me + ms + n + i, n + i) = 1.0;
    a(me + ms + n + i, 2 * n + 2 + ms + n + i) = 1.0;
    b[me + ms + n + i] = 1.0;
  }
  Vector c = Vector::Zero(cols);
  c[2 * n] = -1.0;  // min -s+  (+ s-)
  c[2 * n + 1] = 1.0;

  LpResult lp = solve_lp_standard(c, a, b);
  if (lp.status == LpStatus::IterationLimit) {
    res.diagnostic = "simplex iteration guard exceeded";
    return res;
  }
  if (lp.status == LpStatus::Unbounded) {
    res.diagnostic = "strict-direction LP unbounded";
    return res;
  }
  if (lp.status != LpStatus::Optimal) {
    res.diagnostic = "strict-direction LP infeasible";
    return res;
  }
  res.direction = lp.x.head(n) - lp.x.segment(n, n);
  res.margin = -lp.objective;
  res.feasible = res.margin > pol.strict;
  // The witness must verify by direct substitution.
  if (res.feasible) {
    const double scale =
        1.0 + (me > 0 ? a_eq.cwiseAbs().maxCoeff() : 0.0);
    if (me > 0 && (a_eq * res.direction).cwiseAbs().maxCoeff() > 1e-9 * scale)
      res.diagnostic = "witness violates equality rows";
    if ((a_strict * res.direction).minCoeff() < res.margin - 1e-9 * scale)
      res.diagnostic = "witness does not achieve reported margin";
  }
  return res;
}

}  // namespace kinkcheck
