#include "kinkcheck/problem.hpp"

#include <stdexcept>
#include <string>

#include "kinkcheck/mpcc.hpp"

namespace kinkcheck {

namespace {

void check_rows(const SmoothFunction& f, const std::string& what,
                int num_primal, int num_abs) {
  if (f.primal_dim != num_primal)
    throw std::invalid_argument(what + ": primal arity mismatch");
  if (f.second_dim != num_abs)
    throw std::invalid_argument(what + ": second-argument arity mismatch");
  for (const auto& row : f.rows) {
    if (!row) throw std::invalid_argument(what + ": null expression row");
    if (max_var(row) >= num_primal)
      throw std::invalid_argument(what + ": variable index out of range");
    if (max_abs_ref(row) >= num_abs)
      throw std::invalid_argument(what + ": abs reference out of range");
  }
}

}  // namespace

void AbsNormalProblem::validate() const {
  if (num_primal < 0 || num_switching < 0)
    throw std::invalid_argument("negative dimension");
  if (objective.out_dim() != 1)
    throw std::invalid_argument("objective must have exactly one row");
  check_rows(objective, "objective", num_primal, 0);
  check_rows(eq, "eq", num_primal, num_switching);
  check_rows(ineq, "ineq", num_primal, num_switching);
  check_rows(switching, "switching", num_primal, num_switching);
  if (switching.out_dim() != num_switching)
    throw std::invalid_argument("switching row count mismatch");
  for (int i = 0; i < num_switching; ++i)
    if (max_abs_ref(switching.rows[i]) >= i)
      throw std::invalid_argument(
          "switching definitions are not strictly lower triangular");
}

void MpccProblem::validate() const {
  if (num_x < 0 || num_pairs < 0)
    throw std::invalid_argument("negative dimension");
  if (objective.out_dim() != 1)
    throw std::invalid_argument("objective must have exactly one row");
  const int dim = var_dim();
  check_rows(objective, "objective", dim, 0);
  check_rows(eq, "eq", dim, 0);
  check_rows(ineq, "ineq", dim, 0);
  if (max_var(objective.rows[0]) >= num_x)
    throw std::invalid_argument("objective may reference x variables only");
}

}  // namespace kinkcheck
