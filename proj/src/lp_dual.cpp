#include "entreg/lp_dual.hpp"

#include <cmath>
#include <stdexcept>

namespace entreg {

namespace {

VectorXd dual_exponents(const LpInstance& inst, const VectorXd& lambda, double epsilon) {
  if (lambda.size() != inst.num_cons())
    throw std::invalid_argument("lp dual: multiplier length mismatch");
  if (!(epsilon > 0)) throw std::invalid_argument("lp dual: epsilon must be positive");
  return ((inst.con_matrix().transpose() * lambda - inst.cost()) / epsilon).array() - 1.0;
}

}  // namespace

VectorXd lp_primal_point(const LpInstance& inst, const VectorXd& lambda, double epsilon,
                         double exp_clamp) {
  const VectorXd s = dual_exponents(inst, lambda, epsilon);
  return s.array().min(exp_clamp).max(-exp_clamp).exp();
}

LpDualEval lp_dual_eval(const LpInstance& inst, const VectorXd& lambda, double epsilon,
                        double exp_clamp) {
  const VectorXd s = dual_exponents(inst, lambda, epsilon);
  const VectorXd x = s.array().min(exp_clamp).max(-exp_clamp).exp();
  const double sum = x.sum();
  LpDualEval out;
  out.clamped = (s.array() > exp_clamp).any() || !std::isfinite(sum);
  out.value = out.clamped ? -kInf : inst.rhs().dot(lambda) - epsilon * sum;
  out.gradient = inst.rhs() - inst.con_matrix() * x;
  return out;
}

LogBarrierEval log_barrier_dual_eval(const LpInstance& inst, const VectorXd& lambda, double mu) {
  if (lambda.size() != inst.num_cons())
    throw std::invalid_argument("log_barrier_dual_eval: multiplier length mismatch");
  if (!(mu > 0)) throw std::invalid_argument("log_barrier_dual_eval: mu must be positive");
  const VectorXd slack = inst.cost() - inst.con_matrix().transpose() * lambda;
  LogBarrierEval out;
  if ((slack.array() <= 0).any()) return out;
  out.in_domain = true;
  out.point = mu * slack.cwiseInverse();
  const double d = static_cast<double>(inst.num_vars());
  out.value = inst.rhs().dot(lambda) + d * mu * (1.0 - std::log(mu)) +
              mu * slack.array().log().sum();
  return out;
}

}  // namespace entreg
