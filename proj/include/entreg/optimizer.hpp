#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "entreg/types.hpp"

namespace entreg {

/// Concave objective callback: lambda -> (value, gradient). A value of -inf
/// marks a sentinel point that the line search must back away from.
using DualFn = std::function<std::pair<double, VectorXd>(const VectorXd&)>;

struct MaximizeResult {
  VectorXd argmax;
  double value = -kInf;
  double grad_inf_norm = kInf;
  int iterations = 0;
  bool converged = false;
  std::string note;
  std::vector<TraceEntry> trace;
};

/// L-BFGS ascent with a strong-Wolfe line search. Terminates when the
/// gradient sup-norm drops below config.grad_tol or after config.max_iter
/// accepted steps. Values along accepted steps are strictly increasing.
/// Throws if the objective is not finite at the starting point; a failed
/// line search (no improving step within 50 evaluations) returns the last
/// iterate with converged = false and a diagnostic note.
MaximizeResult maximize_concave(const DualFn& eval, VectorXd start, const SolverConfig& config);

SolveReport solve_lp(const LpInstance& inst, const SolverConfig& config);
SolveReport solve_lp(const LpInstance& inst, const SolverConfig& config, const VectorXd& start);
SolveReport solve_sdp(const SdpInstance& inst, const SolverConfig& config);
SolveReport solve_sdp(const SdpInstance& inst, const SolverConfig& config, const VectorXd& start);

/// Solves along the schedule, warm-starting each epsilon from the previous
/// multiplier. A step that throws is retried from a cold start; if that
/// fails too, a non-converged report with the diagnostic is recorded and
/// the driver moves on.
std::vector<SolveReport> solve_continuation(const LpInstance& inst, const Schedule& schedule,
                                            const SolverConfig& config);
std::vector<SolveReport> solve_continuation(const SdpInstance& inst, const Schedule& schedule,
                                            const SolverConfig& config);

}  // namespace entreg
