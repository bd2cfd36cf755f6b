#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kinkcheck/expr.hpp"
#include "kinkcheck/problem.hpp"

namespace kinkcheck {

/// Which abs-normal formulation the counterpart was derived from:
/// I keeps inequalities, E is the counterpart of the slack reformulation
/// (purely equality constrained apart from the complementarities).
enum class MpccFlavor { I, E };

/// A complementarity program over variables (x, u, v):
///
///   min  f(x)
///   s.t. eq(x, u, v)   = 0
///        ineq(x, u, v) >= 0
///        0 <= u  complementary to  v >= 0    (num_pairs pairs)
///
/// Counterparts built from an AbsNormalProblem keep a pointer to the base
/// problem plus layout metadata; problems parsed from files have no base and
/// support only the generic operations (evaluation, CQ checks,
/// serialization).
struct MpccProblem {
  std::string name;
  MpccFlavor flavor = MpccFlavor::I;
  int num_x = 0;      // x variables: t, or (t, w) for flavor E
  int num_pairs = 0;  // complementarity pairs

  // Layout of counterparts: leading t variables and leading equality rows
  // that stem from cE. -1 marks "unknown" (parsed from a file).
  int num_t = 0;
  int num_eq_base = -1;

  // Expressions over the flat variable order (x_1..x_n, u_1..u_s, v_1..v_s);
  // all three have primal_dim = num_x + 2*num_pairs and second_dim = 0.
  SmoothFunction objective;  // references x entries only
  SmoothFunction eq;
  SmoothFunction ineq;

  std::shared_ptr<const AbsNormalProblem> base;

  int num_eq() const { return eq.out_dim(); }
  int num_ineq() const { return ineq.out_dim(); }
  int var_dim() const { return num_x + 2 * num_pairs; }
  int u_index(int i) const { return num_x + i; }
  int v_index(int i) const { return num_x + num_pairs + i; }

  void validate() const;
};

/// A point of an MPCC with its complementarity index sets:
/// u_plus = {i : u_i > 0}, u_zero = {i : u_i = 0}, likewise for v, and
/// degenerate = u_zero intersect v_zero. At a feasible point the pair index
/// range partitions into u_plus, v_plus and degenerate.
struct MpccPoint {
  Vector x, u, v;
  std::vector<int> u_plus, u_zero, v_plus, v_zero, degenerate;
};

}  // namespace kinkcheck
