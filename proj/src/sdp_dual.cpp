#include "entreg/sdp_dual.hpp"

#include <cmath>
#include <stdexcept>

namespace entreg {

SymEig sym_eig(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m.mat());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sym_eig: eigendecomposition did not converge");
  return {es.eigenvectors(), es.eigenvalues()};
}

namespace {

struct ClampedExp {
  SymMatrix x;
  double trace;
  bool upper_clamped;
};

ClampedExp exp_from_eig(const SymEig& eig, double exp_clamp) {
  const bool upper_clamped = (eig.values.array() > exp_clamp).any();
  const VectorXd e = eig.values.array().min(exp_clamp).max(-exp_clamp).exp();
  MatrixXd x = eig.vectors * e.asDiagonal() * eig.vectors.transpose();
  return {SymMatrix(x), e.sum(), upper_clamped};
}

SymMatrix dual_exponent(const SdpInstance& inst, const VectorXd& lambda, double epsilon) {
  if (lambda.size() != inst.num_cons())
    throw std::invalid_argument("sdp dual: multiplier length mismatch");
  if (!(epsilon > 0)) throw std::invalid_argument("sdp dual: epsilon must be positive");
  MatrixXd s = (inst.adjoint_apply(lambda) - inst.cost().mat()) / epsilon;
  s.diagonal().array() -= 1.0;
  return SymMatrix(s);
}

}  // namespace

SymMatrix mat_exp_sym(const SymMatrix& m, double exp_clamp) {
  return exp_from_eig(sym_eig(m), exp_clamp).x;
}

SymMatrix sdp_primal_point(const SdpInstance& inst, const VectorXd& lambda, double epsilon,
                           double exp_clamp) {
  return mat_exp_sym(dual_exponent(inst, lambda, epsilon), exp_clamp);
}

SdpDualEval sdp_dual_eval(const SdpInstance& inst, const VectorXd& lambda, double epsilon,
                          double exp_clamp) {
  const ClampedExp e = exp_from_eig(sym_eig(dual_exponent(inst, lambda, epsilon)), exp_clamp);
  SdpDualEval out;
  out.clamped = e.upper_clamped || !std::isfinite(e.trace);
  out.value = out.clamped ? -kInf : inst.rhs().dot(lambda) - epsilon * e.trace;
  out.gradient = inst.rhs() - inst.forward_apply(e.x.mat());
  return out;
}

std::pair<double, double> trace_bounds(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_bounds: dimension mismatch");
  const VectorXd sa = sym_eig(a).values;
  const VectorXd sb = sym_eig(b).values;
  if (sb.minCoeff() < -1e-10 * b.frobenius_norm())
    throw std::invalid_argument("trace_bounds: second argument is not positive semidefinite");
  const int n = a.dim();
  double lower = 0.0, upper = 0.0;
  for (int j = 0; j < n; ++j) {
    lower += sa[j] * sb[n - 1 - j];
    upper += sa[j] * sb[j];
  }
  return {lower, upper};
}

}  // namespace entreg
