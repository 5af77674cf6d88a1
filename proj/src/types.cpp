#include "entreg/types.hpp"

#include <cmath>
#include <stdexcept>

namespace entreg {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

SymMatrix::SymMatrix(const MatrixXd& m) {
  require(m.rows() == m.cols() && m.rows() > 0, "SymMatrix: matrix must be square and non-empty");
  mat_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int n) { return SymMatrix(MatrixXd::Identity(n, n)); }

SymMatrix SymMatrix::zero(int n) { return SymMatrix(MatrixXd::Zero(n, n)); }

SymMatrix SymMatrix::from_diagonal(const VectorXd& diag) {
  return SymMatrix(MatrixXd(diag.asDiagonal()));
}

LpInstance::LpInstance(MatrixXd con_matrix, VectorXd rhs, VectorXd cost)
    : con_(std::move(con_matrix)), rhs_(std::move(rhs)), cost_(std::move(cost)) {
  const auto m = con_.rows();
  const auto d = con_.cols();
  require(m > 0 && d > 0, "LpInstance: empty constraint matrix");
  require(rhs_.size() == m, "LpInstance: rhs length must equal the number of constraints");
  require(cost_.size() == d, "LpInstance: cost length must equal the number of variables");
  require(m <= d, "LpInstance: standard form requires num_cons <= num_vars");
  require(con_.allFinite() && rhs_.allFinite() && cost_.allFinite(),
          "LpInstance: all entries must be finite");
  Eigen::BDCSVD<MatrixXd> svd(con_);
  const VectorXd& sv = svd.singularValues();
  require(sv.minCoeff() > 1e-10 * sv.maxCoeff(),
          "LpInstance: constraint matrix is not of full row rank");
}

SdpInstance::SdpInstance(MatrixXd cost, std::vector<MatrixXd> con_matrices, VectorXd rhs)
    : cost_(SymMatrix::zero(1)), rhs_(std::move(rhs)) {
  const int m = static_cast<int>(con_matrices.size());
  require(m > 0, "SdpInstance: at least one constraint required");
  require(rhs_.size() == m, "SdpInstance: rhs length must equal the number of constraints");
  require(cost.rows() == cost.cols() && cost.rows() > 0, "SdpInstance: cost matrix must be square");
  const int n = static_cast<int>(cost.rows());

  auto check_symmetric = [&](const MatrixXd& a, const std::string& name) {
    require(a.rows() == n && a.cols() == n, "SdpInstance: " + name + " has wrong dimensions");
    require(a.allFinite(), "SdpInstance: " + name + " has non-finite entries");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    require(asym <= 1e-12 * scale, "SdpInstance: " + name + " is not symmetric within tolerance");
  };

  check_symmetric(cost, "cost matrix");
  cost_ = SymMatrix(cost);
  cons_.reserve(con_matrices.size());
  for (int k = 0; k < m; ++k) {
    check_symmetric(con_matrices[k], "constraint matrix " + std::to_string(k + 1));
    cons_.emplace_back(con_matrices[k]);
  }
  require(rhs_.allFinite(), "SdpInstance: rhs has non-finite entries");

  // Injectivity of the adjoint map: Gram matrix of the vectorized A_k.
  MatrixXd gram(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = j; k < m; ++k)
      gram(j, k) = gram(k, j) = (cons_[j].mat().array() * cons_[k].mat().array()).sum();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram);
  const VectorXd& ev = es.eigenvalues();
  require(ev.minCoeff() > 1e-10 * ev.maxCoeff(),
          "SdpInstance: constraint matrices are not linearly independent");
}

MatrixXd SdpInstance::adjoint_apply(const VectorXd& lambda) const {
  if (lambda.size() != num_cons())
    throw std::invalid_argument("adjoint_apply: multiplier length mismatch");
  MatrixXd out = MatrixXd::Zero(dim(), dim());
  for (int k = 0; k < num_cons(); ++k) out += lambda[k] * cons_[k].mat();
  return out;
}

VectorXd SdpInstance::forward_apply(const MatrixXd& x) const {
  if (x.rows() != dim() || x.cols() != dim())
    throw std::invalid_argument("forward_apply: matrix dimension mismatch");
  VectorXd out(num_cons());
  for (int k = 0; k < num_cons(); ++k) out[k] = (cons_[k].mat().array() * x.array()).sum();
  return out;
}

OtInstance::OtInstance(MatrixXd cost, VectorXd source, VectorXd target)
    : cost_(std::move(cost)), source_(std::move(source)), target_(std::move(target)) {
  require(cost_.rows() > 0 && cost_.cols() > 0, "OtInstance: empty cost matrix");
  require(source_.size() == cost_.rows(), "OtInstance: source marginal length mismatch");
  require(target_.size() == cost_.cols(), "OtInstance: target marginal length mismatch");
  require(cost_.allFinite(), "OtInstance: cost has non-finite entries");
  require((source_.array() > 0).all() && (target_.array() > 0).all(),
          "OtInstance: marginals must be entrywise positive");
  require(std::abs(source_.sum() - 1.0) <= 1e-12, "OtInstance: source marginal must sum to 1");
  require(std::abs(target_.sum() - 1.0) <= 1e-12, "OtInstance: target marginal must sum to 1");
}

void SolverConfig::validate() const {
  require(std::isfinite(epsilon) && epsilon >= 1e-9,
          "SolverConfig: epsilon must be at least 1e-9");
  require(std::isfinite(grad_tol) && grad_tol > 0, "SolverConfig: grad_tol must be positive");
  require(max_iter >= 1, "SolverConfig: max_iter must be at least 1");
  require(lbfgs_memory >= 1, "SolverConfig: lbfgs_memory must be at least 1");
  require(0 < wolfe_c1 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1,
          "SolverConfig: need 0 < wolfe_c1 < wolfe_c2 < 1");
  require(std::isfinite(exp_clamp) && exp_clamp > 0, "SolverConfig: exp_clamp must be positive");
}

void Schedule::validate() const {
  require(std::isfinite(eps_start) && eps_start > 0, "Schedule: eps_start must be positive");
  require(0 < ratio && ratio < 1, "Schedule: ratio must lie in (0, 1)");
  require(num_steps >= 1, "Schedule: num_steps must be at least 1");
}

std::vector<double> Schedule::epsilons() const {
  validate();
  std::vector<double> out(static_cast<size_t>(num_steps));
  double eps = eps_start;
  for (int k = 0; k < num_steps; ++k, eps *= ratio) out[static_cast<size_t>(k)] = eps;
  return out;
}

const VectorXd& SolveReport::primal_vector() const {
  const VectorXd* v = std::get_if<VectorXd>(&primal_point);
  if (!v) throw std::logic_error("SolveReport: primal point is a matrix, not a vector");
  return *v;
}

const SymMatrix& SolveReport::primal_matrix() const {
  const SymMatrix* x = std::get_if<SymMatrix>(&primal_point);
  if (!x) throw std::logic_error("SolveReport: primal point is a vector, not a matrix");
  return *x;
}

}  // namespace entreg
