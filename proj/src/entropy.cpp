#include "entreg/entropy.hpp"

#include <cmath>
#include <stdexcept>

#include "entreg/sdp_dual.hpp"

namespace entreg {

double shannon_entropy(const VectorXd& x) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (std::isnan(xi)) return std::numeric_limits<double>::quiet_NaN();
    if (xi < 0) return kInf;
    if (xi > 0) sum += xi * std::log(xi);
  }
  return sum;
}

double von_neumann_entropy(const SymMatrix& x) {
  const VectorXd sigma = sym_eig(x).values;
  const double eig_tol = 1e-12 * std::max(1.0, x.frobenius_norm());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double s = sigma[i];
    if (s < -eig_tol) return kInf;
    if (s > eig_tol) sum += s * std::log(s);
  }
  return sum;
}

double lp_primal_objective(const LpInstance& inst, const VectorXd& x, double epsilon) {
  if (x.size() != inst.num_vars())
    throw std::invalid_argument("lp_primal_objective: point length mismatch");
  const double linear = inst.cost().dot(x);
  if (epsilon == 0) return linear;
  const double f = shannon_entropy(x);
  if (!std::isfinite(f)) return f;
  return linear + epsilon * f;
}

double sdp_primal_objective(const SdpInstance& inst, const SymMatrix& x, double epsilon) {
  if (x.dim() != inst.dim())
    throw std::invalid_argument("sdp_primal_objective: point dimension mismatch");
  const double linear = (inst.cost().mat().array() * x.mat().array()).sum();
  if (epsilon == 0) return linear;
  const double g = von_neumann_entropy(x);
  if (!std::isfinite(g)) return g;
  return linear + epsilon * g;
}

}  // namespace entreg
