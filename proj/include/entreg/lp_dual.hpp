#pragma once

#include "entreg/types.hpp"

namespace entreg {

/// Closed-form inner minimizer x_i(lambda) = exp((A^T lambda - c)_i / epsilon - 1).
/// Exponents are clamped to [-exp_clamp, exp_clamp], so the result is
/// strictly positive for every lambda.
VectorXd lp_primal_point(const LpInstance& inst, const VectorXd& lambda, double epsilon,
                         double exp_clamp = 700.0);

struct LpDualEval {
  /// b^T lambda - epsilon sum_i x_i(lambda); replaced by the -inf sentinel
  /// when an exponent hit the upper clamp or the sum overflowed, so line
  /// searches treat the point as a rejection rather than propagate inf/NaN.
  double value = -kInf;
  /// b - A x(lambda), computed from the clamped x even at sentinel points;
  /// this is also the primal feasibility residual.
  VectorXd gradient;
  bool clamped = false;
};
LpDualEval lp_dual_eval(const LpInstance& inst, const VectorXd& lambda, double epsilon,
                        double exp_clamp = 700.0);

/// Log-barrier analogue of the dual, defined only where A^T lambda < c.
/// The domain restriction is the point of the operation: the entropic dual
/// above is finite for arbitrary lambda, this one is not.
struct LogBarrierEval {
  bool in_domain = false;
  double value = -kInf;
  VectorXd point;
};
LogBarrierEval log_barrier_dual_eval(const LpInstance& inst, const VectorXd& lambda, double mu);

}  // namespace entreg
