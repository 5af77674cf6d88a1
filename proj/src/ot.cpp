#include "entreg/ot.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "entreg/entropy.hpp"
#include "entreg/optimizer.hpp"

namespace entreg {

MatrixXd OtLpReduction::plan_from_vector(const VectorXd& x) const {
  if (x.size() != static_cast<Eigen::Index>(rows) * cols)
    throw std::invalid_argument("plan_from_vector: length mismatch");
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      x.data(), rows, cols);
}

OtLpReduction ot_to_lp(const OtInstance& ot) {
  const int n1 = ot.rows();
  const int n2 = ot.cols();
  const int d = n1 * n2;
  const int m = n1 + n2 - 1;

  MatrixXd a = MatrixXd::Zero(m, d);
  VectorXd b(m);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) a(i, i * n2 + j) = 1.0;
    b[i] = ot.source()[i];
  }
  for (int j = 0; j + 1 < n2; ++j) {
    for (int i = 0; i < n1; ++i) a(n1 + j, i * n2 + j) = 1.0;
    b[n1 + j] = ot.target()[j];
  }

  VectorXd c(d);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) c[i * n2 + j] = ot.cost()(i, j);

  return {LpInstance(std::move(a), std::move(b), std::move(c)), n1, n2};
}

SinkhornResult sinkhorn(const OtInstance& ot, double epsilon, double tol, int max_iter) {
  if (!(epsilon > 0)) throw std::invalid_argument("sinkhorn: epsilon must be positive");
  if (!(tol >= 0)) throw std::invalid_argument("sinkhorn: tol must be nonnegative");
  if (max_iter < 1) throw std::invalid_argument("sinkhorn: max_iter must be at least 1");

  // Scalar std::exp on purpose: the vectorized path saturates deep
  // underflow at the smallest normal instead of flushing to zero, which
  // would hide a degenerate kernel.
  const MatrixXd kernel =
      (-ot.cost() / epsilon).unaryExpr([](double v) { return std::exp(v); });
  if ((kernel.rowwise().maxCoeff().array() == 0).any() ||
      (kernel.colwise().maxCoeff().array() == 0).any())
    throw std::runtime_error(
        "sinkhorn: kernel exp(-C/epsilon) underflowed to an all-zero row or column; "
        "increase epsilon");

  const VectorXd& p = ot.source();
  const VectorXd& q = ot.target();
  VectorXd u = VectorXd::Ones(ot.rows());
  VectorXd v = VectorXd::Ones(ot.cols());

  SinkhornResult res;
  while (res.iterations < max_iter) {
    u = p.cwiseQuotient(kernel * v);
    v = q.cwiseQuotient(kernel.transpose() * u);
    ++res.iterations;
    if (!u.allFinite() || !v.allFinite())
      throw std::runtime_error(
          "sinkhorn: scaling vectors overflowed or hit a zero denominator; increase epsilon");
    // Column sums match q exactly after the v-update; the row residual is
    // the quantity still converging.
    res.row_residual = (u.cwiseProduct(kernel * v) - p).lpNorm<1>();
    res.col_residual = 0.0;
    if (res.row_residual <= tol) {
      res.converged = true;
      break;
    }
  }

  res.plan = u.asDiagonal() * kernel * v.asDiagonal();
  res.col_residual = (res.plan.colwise().sum().transpose() - q).lpNorm<1>();
  res.row_residual = (res.plan.rowwise().sum() - p).lpNorm<1>();
  res.converged = res.converged && res.row_residual <= tol && res.col_residual <= tol;

  const Eigen::Map<const VectorXd> plan_vec(res.plan.data(), res.plan.size());
  res.value = (res.plan.array() * ot.cost().array()).sum() + epsilon * shannon_entropy(plan_vec);
  return res;
}

OtComparison compare_ot(const OtInstance& ot, double epsilon, double sinkhorn_tol,
                        int sinkhorn_max_iter, const SolverConfig& config) {
  using clock = std::chrono::steady_clock;
  OtComparison cmp;

  auto t0 = clock::now();
  cmp.sinkhorn = sinkhorn(ot, epsilon, sinkhorn_tol, sinkhorn_max_iter);
  cmp.sinkhorn_seconds = std::chrono::duration<double>(clock::now() - t0).count();

  const OtLpReduction red = ot_to_lp(ot);
  SolverConfig cfg = config;
  cfg.epsilon = epsilon;
  t0 = clock::now();
  cmp.dual_report = solve_lp(red.lp, cfg);
  cmp.dual_seconds = std::chrono::duration<double>(clock::now() - t0).count();

  cmp.dual_plan = red.plan_from_vector(cmp.dual_report.primal_vector());
  cmp.value_gap = std::abs(cmp.sinkhorn.value - cmp.dual_report.primal_value);
  cmp.plan_l1_dist = (cmp.sinkhorn.plan - cmp.dual_plan).cwiseAbs().sum();
  return cmp;
}

}  // namespace entreg
