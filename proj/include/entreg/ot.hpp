#pragma once

#include "entreg/types.hpp"

namespace entreg {

/// Standard-form LP for a transport problem: variables are the row-major
/// vectorized plan, constraints are the row sums followed by all but the
/// last column sum. The last column constraint is redundant given the rest
/// and dropping it keeps the constraint matrix at full row rank.
struct OtLpReduction {
  LpInstance lp;
  int rows = 0;
  int cols = 0;

  /// Reshape a vectorized plan back to rows x cols.
  MatrixXd plan_from_vector(const VectorXd& x) const;
};
OtLpReduction ot_to_lp(const OtInstance& ot);

struct SinkhornResult {
  MatrixXd plan;
  /// Regularized transport cost sum_ij plan_ij C_ij + epsilon sum_ij plan_ij ln(plan_ij).
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double row_residual = kInf;
  double col_residual = kInf;
};

/// Plain (non-log-domain) Sinkhorn scaling of K = exp(-C/epsilon). Stops
/// when both L1 marginal residuals fall below tol. Throws when K underflows
/// to an all-zero row or column, or the scalings stop being finite; the
/// remedy in both cases is a larger epsilon (around 0.005 and above works
/// for cost entries of order one).
SinkhornResult sinkhorn(const OtInstance& ot, double epsilon, double tol, int max_iter);

struct OtComparison {
  SinkhornResult sinkhorn;
  SolveReport dual_report;
  MatrixXd dual_plan;
  double value_gap = kInf;     // |sinkhorn value - dual-route primal value|
  double plan_l1_dist = kInf;  // sum_ij |difference|
  double sinkhorn_seconds = 0.0;
  double dual_seconds = 0.0;
};

/// Runs both solvers on the same instance and epsilon: Sinkhorn directly,
/// and the dual route through ot_to_lp. sinkhorn_tol/max_iter control the
/// Sinkhorn side; config controls the dual solve.
OtComparison compare_ot(const OtInstance& ot, double epsilon, double sinkhorn_tol,
                        int sinkhorn_max_iter, const SolverConfig& config);

}  // namespace entreg
