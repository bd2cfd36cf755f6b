#include "kinkcheck/expr.hpp"

#include <cmath>
#include <stdexcept>

#include "kinkcheck/errors.hpp"

namespace kinkcheck {

namespace {

std::shared_ptr<Expr> make(ExprKind k) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  return e;
}

ExprPtr make_binary(ExprKind k, ExprPtr l, ExprPtr r) {
  auto e = make(k);
  e->a = std::move(l);
  e->b = std::move(r);
  return e;
}

ExprPtr make_unary(ExprKind k, ExprPtr x) {
  auto e = make(k);
  e->a = std::move(x);
  return e;
}

double int_pow(double base, int k) {
  if (k == 0) return 1.0;
  if (base == 0.0 && k < 0) throw EvalError("zero raised to a negative power");
  return std::pow(base, static_cast<double>(k));
}

}  // namespace

ExprPtr Expr::constant(double c) {
  auto e = make(ExprKind::Constant);
  e->value = c;
  return e;
}

ExprPtr Expr::var(int i) {
  auto e = make(ExprKind::Var);
  e->index = i;
  return e;
}

ExprPtr Expr::abs_ref(int j) {
  auto e = make(ExprKind::AbsRef);
  e->index = j;
  return e;
}

ExprPtr Expr::add(ExprPtr l, ExprPtr r) {
  return make_binary(ExprKind::Add, std::move(l), std::move(r));
}
ExprPtr Expr::sub(ExprPtr l, ExprPtr r) {
  return make_binary(ExprKind::Sub, std::move(l), std::move(r));
}
ExprPtr Expr::mul(ExprPtr l, ExprPtr r) {
  return make_binary(ExprKind::Mul, std::move(l), std::move(r));
}
ExprPtr Expr::div(ExprPtr l, ExprPtr r) {
  return make_binary(ExprKind::Div, std::move(l), std::move(r));
}

ExprPtr Expr::pow(ExprPtr base, int k) {
  auto e = make(ExprKind::Pow);
  e->a = std::move(base);
  e->exponent = k;
  return e;
}

ExprPtr Expr::sin(ExprPtr x) { return make_unary(ExprKind::Sin, std::move(x)); }
ExprPtr Expr::cos(ExprPtr x) { return make_unary(ExprKind::Cos, std::move(x)); }
ExprPtr Expr::exp(ExprPtr x) { return make_unary(ExprKind::Exp, std::move(x)); }
ExprPtr Expr::log(ExprPtr x) { return make_unary(ExprKind::Log, std::move(x)); }

ExprPtr Expr::neg(ExprPtr x) {
  if (x->kind == ExprKind::Constant) return constant(-x->value);
  return sub(constant(0.0), std::move(x));
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Constant:
      // Bitwise comparison: round-trips must be exact, and -0.0 != 0.0 here.
      return a->value == b->value &&
             std::signbit(a->value) == std::signbit(b->value);
    case ExprKind::Var:
    case ExprKind::AbsRef:
      return a->index == b->index;
    case ExprKind::Pow:
      return a->exponent == b->exponent && expr_equal(a->a, b->a);
    default:
      return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
  }
}

int max_abs_ref(const ExprPtr& e) {
  if (!e) return -1;
  int m = e->kind == ExprKind::AbsRef ? e->index : -1;
  m = std::max(m, max_abs_ref(e->a));
  return std::max(m, max_abs_ref(e->b));
}

int max_var(const ExprPtr& e) {
  if (!e) return -1;
  int m = e->kind == ExprKind::Var ? e->index : -1;
  m = std::max(m, max_var(e->a));
  return std::max(m, max_var(e->b));
}

ExprPtr substitute_abs_refs(const ExprPtr& e,
                            const std::vector<ExprPtr>& replacements) {
  if (!e) return nullptr;
  if (e->kind == ExprKind::AbsRef) {
    if (e->index < 0 || e->index >= static_cast<int>(replacements.size()))
      throw std::invalid_argument("abs reference out of substitution range");
    return replacements[e->index];
  }
  if (!e->a && !e->b) return e;
  auto out = std::make_shared<Expr>(*e);
  out->a = substitute_abs_refs(e->a, replacements);
  out->b = substitute_abs_refs(e->b, replacements);
  return out;
}

double eval_expr(const Expr& e, const Vector& t, const Vector& m) {
  switch (e.kind) {
    case ExprKind::Constant:
      return e.value;
    case ExprKind::Var:
      return t[e.index];
    case ExprKind::AbsRef:
      return m[e.index];
    case ExprKind::Add:
      return eval_expr(*e.a, t, m) + eval_expr(*e.b, t, m);
    case ExprKind::Sub:
      return eval_expr(*e.a, t, m) - eval_expr(*e.b, t, m);
    case ExprKind::Mul:
      return eval_expr(*e.a, t, m) * eval_expr(*e.b, t, m);
    case ExprKind::Div: {
      double num = eval_expr(*e.a, t, m);
      double den = eval_expr(*e.b, t, m);
      if (den == 0.0) throw EvalError("division by zero");
      return num / den;
    }
    case ExprKind::Pow:
      return int_pow(eval_expr(*e.a, t, m), e.exponent);
    case ExprKind::Sin:
      return std::sin(eval_expr(*e.a, t, m));
    case ExprKind::Cos:
      return std::cos(eval_expr(*e.a, t, m));
    case ExprKind::Exp:
      return std::exp(eval_expr(*e.a, t, m));
    case ExprKind::Log: {
      double x = eval_expr(*e.a, t, m);
      if (x <= 0.0) throw EvalError("log of a nonpositive argument");
      return std::log(x);
    }
  }
  throw std::logic_error("unhandled expression kind");
}

namespace {

// Forward-mode value/gradient propagation over the stacked (t, m) input.
struct D1 {
  double v = 0.0;
  Vector g;
};

D1 d1(const Expr& e, const Vector& t, const Vector& m, int n) {
  const int nt = static_cast<int>(t.size());
  D1 r;
  r.g = Vector::Zero(n);
  switch (e.kind) {
    case ExprKind::Constant:
      r.v = e.value;
      return r;
    case ExprKind::Var:
      r.v = t[e.index];
      r.g[e.index] = 1.0;
      return r;
    case ExprKind::AbsRef:
      r.v = m[e.index];
      r.g[nt + e.index] = 1.0;
      return r;
    case ExprKind::Add: {
      D1 x = d1(*e.a, t, m, n), y = d1(*e.b, t, m, n);
      r.v = x.v + y.v;
      r.g = x.g + y.g;
      return r;
    }
    case ExprKind::Sub: {
      D1 x = d1(*e.a, t, m, n), y = d1(*e.b, t, m, n);
      r.v = x.v - y.v;
      r.g = x.g - y.g;
      return r;
    }
    case ExprKind::Mul: {
      D1 x = d1(*e.a, t, m, n), y = d1(*e.b, t, m, n);
      r.v = x.v * y.v;
      r.g = x.v * y.g + y.v * x.g;
      return r;
    }
    case ExprKind::Div: {
      D1 x = d1(*e.a, t, m, n), y = d1(*e.b, t, m, n);
      if (y.v == 0.0) throw EvalError("division by zero");
      r.v = x.v / y.v;
      r.g = (x.g - r.v * y.g) / y.v;
      return r;
    }
    case ExprKind::Pow: {
      D1 x = d1(*e.a, t, m, n);
      const int k = e.exponent;
      r.v = int_pow(x.v, k);
      r.g = k == 0 ? Vector::Zero(n).eval()
                   : (k * int_pow(x.v, k - 1) * x.g).eval();
      return r;
    }
    case ExprKind::Sin: {
      D1 x = d1(*e.a, t, m, n);
      r.v = std::sin(x.v);
      r.g = std::cos(x.v) * x.g;
      return r;
    }
    case ExprKind::Cos: {
      D1 x = d1(*e.a, t, m, n);
      r.v = std::cos(x.v);
      r.g = -std::sin(x.v) * x.g;
      return r;
    }
    case ExprKind::Exp: {
      D1 x = d1(*e.a, t, m, n);
      r.v = std::exp(x.v);
      r.g = r.v * x.g;
      return r;
    }
    case ExprKind::Log: {
      D1 x = d1(*e.a, t, m, n);
      if (x.v <= 0.0) throw EvalError("log of a nonpositive argument");
      r.v = std::log(x.v);
      r.g = x.g / x.v;
      return r;
    }
  }
  throw std::logic_error("unhandled expression kind");
}

// Value/gradient/Hessian propagation.
struct D2 {
  double v = 0.0;
  Vector g;
  Matrix h;
};

D2 d2(const Expr& e, const Vector& t, const Vector& m, int n) {
  const int nt = static_cast<int>(t.size());
  D2 r;
  r.g = Vector::Zero(n);
  r.h = Matrix::Zero(n, n);
  switch (e.kind) {
    case ExprKind::Constant:
      r.v = e.value;
      return r;
    case ExprKind::Var:
      r.v = t[e.index];
      r.g[e.index] = 1.0;
      return r;
    case ExprKind::AbsRef:
      r.v = m[e.index];
      r.g[nt + e.index] = 1.0;
      return r;
    case ExprKind::Add: {
      D2 x = d2(*e.a, t, m, n), y = d2(*e.b, t, m, n);
      r.v = x.v + y.v;
      r.g = x.g + y.g;
      r.h = x.h + y.h;
      return r;
    }
    case ExprKind::Sub: {
      D2 x = d2(*e.a, t, m, n), y = d2(*e.b, t, m, n);
      r.v = x.v - y.v;
      r.g = x.g - y.g;
      r.h = x.h - y.h;
      return r;
    }
    case ExprKind::Mul: {
      D2 x = d2(*e.a, t, m, n), y = d2(*e.b, t, m, n);
      r.v = x.v * y.v;
      r.g = x.v * y.g + y.v * x.g;
      r.h = x.v * y.h + y.v * x.h + x.g * y.g.transpose() +
            y.g * x.g.transpose();
      return r;
    }
    case ExprKind::Div: {
      D2 x = d2(*e.a, t, m, n), y = d2(*e.b, t, m, n);
      if (y.v == 0.0) throw EvalError("division by zero");
      r.v = x.v / y.v;
      r.g = (x.g - r.v * y.g) / y.v;
      r.h = (x.h - r.v * y.h - r.g * y.g.transpose() -
             y.g * r.g.transpose()) /
            y.v;
      return r;
    }
    case ExprKind::Pow: {
      D2 x = d2(*e.a, t, m, n);
      const int k = e.exponent;
      r.v = int_pow(x.v, k);
      if (k == 0) return r;
      const double d1v = k * int_pow(x.v, k - 1);
      const double d2v = k == 1 ? 0.0 : k * (k - 1) * int_pow(x.v, k - 2);
      r.g = d1v * x.g;
      r.h = d1v * x.h + d2v * x.g * x.g.transpose();
      return r;
    }
    case ExprKind::Sin: {
      D2 x = d2(*e.a, t, m, n);
      const double s = std::sin(x.v), c = std::cos(x.v);
      r.v = s;
      r.g = c * x.g;
      r.h = c * x.h - s * x.g * x.g.transpose();
      return r;
    }
    case ExprKind::Cos: {
      D2 x = d2(*e.a, t, m, n);
      const double s = std::sin(x.v), c = std::cos(x.v);
      r.v = c;
      r.g = -s * x.g;
      r.h = -s * x.h - c * x.g * x.g.transpose();
      return r;
    }
    case ExprKind::Exp: {
      D2 x = d2(*e.a, t, m, n);
      const double w = std::exp(x.v);
      r.v = w;
      r.g = w * x.g;
      r.h = w * (x.h + x.g * x.g.transpose());
      return r;
    }
    case ExprKind::Log: {
      D2 x = d2(*e.a, t, m, n);
      if (x.v <= 0.0) throw EvalError("log of a nonpositive argument");
      r.v = std::log(x.v);
      r.g = x.g / x.v;
      r.h = x.h / x.v - x.g * x.g.transpose() / (x.v * x.v);
      return r;
    }
  }
  throw std::logic_error("unhandled expression kind");
}

}  // namespace

void eval_expr_d1(const Expr& e, const Vector& t, const Vector& m, double& v,
                  Vector& grad) {
  D1 r = d1(e, t, m, static_cast<int>(t.size() + m.size()));
  v = r.v;
  grad = std::move(r.g);
}

void eval_expr_d2(const Expr& e, const Vector& t, const Vector& m, double& v,
                  Vector& grad, Matrix& hess) {
  D2 r = d2(e, t, m, static_cast<int>(t.size() + m.size()));
  v = r.v;
  grad = std::move(r.g);
  hess = std::move(r.h);
}

void SmoothFunction::check_args(const Vector& t, const Vector& m) const {
  if (t.size() != primal_dim || m.size() != second_dim)
    throw std::invalid_argument("argument dimensions do not match function");
}

Vector SmoothFunction::eval(const Vector& t, const Vector& m) const {
  check_args(t, m);
  Vector out(out_dim());
  for (int i = 0; i < out_dim(); ++i) out[i] = eval_expr(*rows[i], t, m);
  return out;
}

std::pair<Matrix, Matrix> SmoothFunction::jacobian(const Vector& t,
                                                   const Vector& m) const {
  check_args(t, m);
  Matrix d1m(out_dim(), primal_dim), d2m(out_dim(), second_dim);
  double v;
  Vector g;
  for (int i = 0; i < out_dim(); ++i) {
    eval_expr_d1(*rows[i], t, m, v, g);
    d1m.row(i) = g.head(primal_dim).transpose();
    d2m.row(i) = g.tail(second_dim).transpose();
  }
  return {std::move(d1m), std::move(d2m)};
}

Matrix SmoothFunction::hessian(int row, const Vector& t,
                               const Vector& m) const {
  check_args(t, m);
  if (row < 0 || row >= out_dim())
    throw std::invalid_argument("hessian row out of range");
  double v;
  Vector g;
  Matrix h;
  eval_expr_d2(*rows[row], t, m, v, g, h);
  return h;
}

}  // namespace kinkcheck
