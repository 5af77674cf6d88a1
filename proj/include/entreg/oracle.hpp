#pragma once

#include <vector>

#include "entreg/types.hpp"

namespace entreg {

struct VertexSolveResult {
  double objective = kInf;
  /// Every optimal vertex within 1e-9 * (1 + |objective|) of the optimum;
  /// degenerate instances have more than one.
  std::vector<VectorXd> vertices;
};

/// Exact reference for small LPs: enumerates all basic solutions, keeps the
/// nonnegative ones, and returns the minimum objective together with the
/// whole optimal face's vertex set. Guarded to num_vars <= 25 and
/// C(num_vars, num_cons) <= 2e5; throws on the guard or on infeasibility.
VertexSolveResult lp_vertex_solve(const LpInstance& inst);

struct BruteforceResult {
  double value = kInf;
  VectorXd x;
  int iterations = 0;
  double feasibility = kInf;    // ||A x - b||_inf at the returned point
  double stationarity = kInf;   // final Newton decrement
  bool converged = false;
};

/// Independent primal reference for the regularized objective: damped
/// equality-constrained Newton on c^T x + epsilon sum x_i ln x_i over
/// {A x = b, x >= 0}, with the exact diagonal Hessian epsilon/x_i, a
/// fraction-to-boundary step cap, and clipping of coordinates that vanish
/// below representable scale. Starts from the least-squares point of
/// A x = b and runs to Newton decrement 1e-8. Never evaluates the dual;
/// usable as a cross-check on the dual-ascent route. Guarded to
/// num_vars <= 50.
BruteforceResult primal_bruteforce(const LpInstance& inst, double epsilon);

}  // namespace entreg
