#pragma once

#include <Eigen/Core>

#include <memory>
#include <utility>
#include <vector>

namespace kinkcheck {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ExprKind {
  Constant,
  Var,     // primal variable t_i (0-based index)
  AbsRef,  // second-argument variable m_j = |z_j| (0-based index)
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // integer exponent only
  Sin,
  Cos,
  Exp,
  Log,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. Trees are shared freely; evaluation is pure,
/// so concurrent use after construction is safe.
struct Expr {
  ExprKind kind;
  double value = 0.0;  // Constant
  int index = -1;      // Var / AbsRef
  int exponent = 0;    // Pow
  ExprPtr a, b;

  static ExprPtr constant(double c);
  static ExprPtr var(int i);
  static ExprPtr abs_ref(int j);
  static ExprPtr add(ExprPtr l, ExprPtr r);
  static ExprPtr sub(ExprPtr l, ExprPtr r);
  static ExprPtr mul(ExprPtr l, ExprPtr r);
  static ExprPtr div(ExprPtr l, ExprPtr r);
  static ExprPtr pow(ExprPtr base, int k);
  static ExprPtr sin(ExprPtr x);
  static ExprPtr cos(ExprPtr x);
  static ExprPtr exp(ExprPtr x);
  static ExprPtr log(ExprPtr x);
  /// -x, folding literal constants so that "-1.7" stays a single node.
  static ExprPtr neg(ExprPtr x);
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// Largest AbsRef index used anywhere in the tree, or -1.
int max_abs_ref(const ExprPtr& e);
/// Largest Var index used anywhere in the tree, or -1.
int max_var(const ExprPtr& e);

/// Replace every AbsRef(j) by replacements[j]. Used to rewrite |z_j| into
/// u_j + v_j when forming complementarity counterparts.
ExprPtr substitute_abs_refs(const ExprPtr& e,
                            const std::vector<ExprPtr>& replacements);

/// Evaluate at the stacked input (x = [t; m], first n entries primal).
/// Throws EvalError at singular points.
double eval_expr(const Expr& e, const Vector& t, const Vector& m);

/// Value and gradient with respect to the stacked (t, m) input.
void eval_expr_d1(const Expr& e, const Vector& t, const Vector& m, double& v,
                  Vector& grad);

/// Value, gradient, and Hessian with respect to the stacked (t, m) input.
void eval_expr_d2(const Expr& e, const Vector& t, const Vector& m, double& v,
                  Vector& grad, Matrix& hess);

/// A vector-valued smooth function c(t, m) with t in R^{primal_dim} and
/// m in R^{second_dim}. Holds one expression per output row. Rows only ever
/// reference declared indices; derivative evaluation is exact (forward mode).
struct SmoothFunction {
  int primal_dim = 0;
  int second_dim = 0;
  std::vector<ExprPtr> rows;

  int out_dim() const { return static_cast<int>(rows.size()); }
  int in_dim() const { return primal_dim + second_dim; }

  Vector eval(const Vector& t, const Vector& m) const;
  /// Partial Jacobians (d1 : out x primal_dim, d2 : out x second_dim).
  std::pair<Matrix, Matrix> jacobian(const Vector& t, const Vector& m) const;
  /// Hessian of one output row over the stacked (t, m) input.
  Matrix hessian(int row, const Vector& t, const Vector& m) const;

  void check_args(const Vector& t, const Vector& m) const;
};

}  // namespace kinkcheck
