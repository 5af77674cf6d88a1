#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace entreg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense real symmetric matrix. Construction averages M and M^T, so
/// entries (i, j) and (j, i) are bitwise equal afterwards.
class SymMatrix {
 public:
  explicit SymMatrix(const MatrixXd& m);

  static SymMatrix identity(int n);
  static SymMatrix zero(int n);
  static SymMatrix from_diagonal(const VectorXd& diag);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const MatrixXd& mat() const { return mat_; }
  double operator()(int i, int j) const { return mat_(i, j); }
  double frobenius_norm() const { return mat_.norm(); }

 private:
  MatrixXd mat_;
};

/// Standard-form LP data: min c^T x subject to A x = b, x >= 0.
///
/// Validated at construction: m <= d, all entries finite, and A has full
/// row rank (smallest singular value > 1e-10 times the largest).
class LpInstance {
 public:
  LpInstance(MatrixXd con_matrix, VectorXd rhs, VectorXd cost);

  int num_vars() const { return static_cast<int>(cost_.size()); }
  int num_cons() const { return static_cast<int>(rhs_.size()); }
  const MatrixXd& con_matrix() const { return con_; }
  const VectorXd& rhs() const { return rhs_; }
  const VectorXd& cost() const { return cost_; }

 private:
  MatrixXd con_;
  VectorXd rhs_;
  VectorXd cost_;
};

/// Standard-form SDP data: min Tr(C X) subject to Tr(A_k X) = b_k, X PSD.
///
/// Constraint matrices must be symmetric to within 1e-12 relative tolerance
/// and linearly independent (smallest eigenvalue of their Gram matrix
/// > 1e-10 times the largest); both are checked at construction.
class SdpInstance {
 public:
  SdpInstance(MatrixXd cost, std::vector<MatrixXd> con_matrices, VectorXd rhs);

  int dim() const { return cost_.dim(); }
  int num_cons() const { return static_cast<int>(rhs_.size()); }
  const SymMatrix& cost() const { return cost_; }
  const std::vector<SymMatrix>& con_matrices() const { return cons_; }
  const VectorXd& rhs() const { return rhs_; }

  /// Adjoint of the constraint map: sum_k lambda_k A_k.
  MatrixXd adjoint_apply(const VectorXd& lambda) const;
  /// Constraint map: (Tr(A_k X))_k.
  VectorXd forward_apply(const MatrixXd& x) const;

 private:
  SymMatrix cost_;
  std::vector<SymMatrix> cons_;
  VectorXd rhs_;
};

/// Discrete optimal-transport instance: cost matrix plus two strictly
/// positive marginals, each summing to one within 1e-12.
class OtInstance {
 public:
  OtInstance(MatrixXd cost, VectorXd source, VectorXd target);

  int rows() const { return static_cast<int>(cost_.rows()); }
  int cols() const { return static_cast<int>(cost_.cols()); }
  const MatrixXd& cost() const { return cost_; }
  const VectorXd& source() const { return source_; }
  const VectorXd& target() const { return target_; }

 private:
  MatrixXd cost_;
  VectorXd source_;
  VectorXd target_;
};

struct SolverConfig {
  double epsilon = 0.01;
  double grad_tol = 1e-8;
  int max_iter = 500;
  int lbfgs_memory = 10;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  double exp_clamp = 700.0;

  /// Defaults for SDP solves; the dual evaluation is noisier through the
  /// eigendecomposition, so the gradient tolerance is looser.
  static SolverConfig sdp_defaults() {
    SolverConfig c;
    c.grad_tol = 1e-6;
    return c;
  }

  /// Throws std::invalid_argument on out-of-range fields. Epsilon below
  /// 1e-9 is rejected: the closed forms divide by it.
  void validate() const;
};

/// Geometric epsilon schedule eps_start * ratio^k, k = 0..num_steps-1.
struct Schedule {
  double eps_start = 1.0;
  double ratio = 0.5;
  int num_steps = 8;

  void validate() const;
  std::vector<double> epsilons() const;
};

struct TraceEntry {
  int iteration = 0;
  double dual_value = -kInf;
  double grad_inf_norm = kInf;
};

struct SolveReport {
  VectorXd dual_opt;
  std::variant<VectorXd, SymMatrix> primal_point = VectorXd();
  double dual_value = -kInf;
  double primal_value = kInf;
  double grad_inf_norm = kInf;
  int iterations = 0;
  bool converged = false;
  double epsilon = 0.0;
  std::string note;
  std::vector<TraceEntry> trace;

  const VectorXd& primal_vector() const;
  const SymMatrix& primal_matrix() const;
};

}  // namespace entreg
