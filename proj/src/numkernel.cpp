#include "kinkcheck/numkernel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "kinkcheck/errors.hpp"

namespace kinkcheck {

RankResult matrix_rank(const Matrix& m, const TolerancePolicy& pol) {
  RankResult r;
  r.rows = static_cast<int>(m.rows());
  r.cols = static_cast<int>(m.cols());
  if (!m.allFinite()) throw NumericError("rank of a matrix with non-finite entries");
  if (r.rows == 0 || r.cols == 0) {
    r.rank = 0;
    r.tolerance = 0.0;
    r.full_row_rank = r.rows == 0;
    r.singular_values = Vector(0);
    return r;
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  r.singular_values = svd.singularValues();
  const double sigma_max = r.singular_values[0];
  r.tolerance = pol.rank_eps * std::max(r.rows, r.cols) * sigma_max;
  r.rank = 0;
  for (int i = 0; i < r.singular_values.size(); ++i)
    if (r.singular_values[i] > r.tolerance) ++r.rank;
  r.full_row_rank = r.rank == r.rows;
  return r;
}

Matrix nullspace_basis(const Matrix& m, const TolerancePolicy& pol) {
  const int cols = static_cast<int>(m.cols());
  if (m.rows() == 0 || cols == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double tol =
      pol.rank_eps * std::max(m.rows(), m.cols()) * (sv.size() ? sv[0] : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

std::string to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite:
      return "positive-definite";
    case Definiteness::PositiveSemidefinite:
      return "positive-semidefinite";
    case Definiteness::Indefinite:
      return "indefinite";
    case Definiteness::NegativeSemidefinite:
      return "negative-semidefinite";
    case Definiteness::NegativeDefinite:
      return "negative-definite";
  }
  return "?";
}

Definiteness classify_definiteness(const Matrix& m,
                                   const TolerancePolicy& pol) {
  Vector ev;
  return classify_definiteness(m, pol, ev);
}

Definiteness classify_definiteness(const Matrix& m, const TolerancePolicy& pol,
                                   Vector& eigenvalues) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("definiteness of a non-square matrix");
  if (m.rows() == 0) {
    eigenvalues = Vector(0);
    return Definiteness::PositiveDefinite;
  }
  Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  eigenvalues = es.eigenvalues();
  const double lmin = eigenvalues.minCoeff();
  const double lmax = eigenvalues.maxCoeff();
  const double eps = pol.psd * (1.0 + std::max(std::abs(lmin), std::abs(lmax)));
  if (lmin > eps) return Definiteness::PositiveDefinite;
  if (lmax < -eps) return Definiteness::NegativeDefinite;
  if (lmin > -eps) return Definiteness::PositiveSemidefinite;
  if (lmax < eps) return Definiteness::NegativeSemidefinite;
  return Definiteness::Indefinite;
}

Matrix fd_jacobian(const VectorFn& f, const Vector& x) {
  return fd_jacobian(f, x, 1e-6);
}

Matrix fd_jacobian(const VectorFn& f, const Vector& x, double step_scale) {
  const int n = static_cast<int>(x.size());
  Vector f0 = f(x);
  Matrix jac(f0.size(), n);
  for (int i = 0; i < n; ++i) {
    const double h = step_scale * (1.0 + std::abs(x[i]));
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    jac.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

}  // namespace kinkcheck
