#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "entreg/generate.hpp"
#include "entreg/types.hpp"

namespace entreg::testing {

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

inline VectorXd random_normal_vector(SplitMix64& rng, int n, double scale = 1.0) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * rng.next_normal();
  return v;
}

inline VectorXd random_uniform_vector(SplitMix64& rng, int n, double lo, double hi) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.next_uniform(lo, hi);
  return v;
}

inline MatrixXd random_normal_matrix(SplitMix64& rng, int rows, int cols) {
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.next_normal();
  return m;
}

inline SymMatrix random_symmetric(SplitMix64& rng, int n) {
  return SymMatrix(random_normal_matrix(rng, n, n));
}

inline MatrixXd random_orthogonal(SplitMix64& rng, int n) {
  const Eigen::HouseholderQR<MatrixXd> qr(random_normal_matrix(rng, n, n));
  return qr.householderQ() * MatrixXd::Identity(n, n);
}

/// Central finite difference of a scalar function of lambda, one coordinate,
/// with the step scaled to that coordinate.
inline double central_difference(const std::function<double(const VectorXd&)>& f,
                                 const VectorXd& lambda, int j) {
  const double h = 1e-6 * (1.0 + std::abs(lambda[j]));
  VectorXd hi = lambda, lo = lambda;
  hi[j] += h;
  lo[j] -= h;
  return (f(hi) - f(lo)) / (2.0 * h);
}

/// Diagonal SDP induced by an LP: A_k = diag(row k of A), C = diag(c).
/// The dual functions of the two problems coincide.
struct DiagonalPair {
  LpInstance lp;
  SdpInstance sdp;
};

inline DiagonalPair make_diagonal_pair(SplitMix64& rng, int n, int m) {
  GeneratedLp gen = generate_lp(rng.next_u64(), n, m, /*with_compactness_row=*/true);
  std::vector<MatrixXd> cons;
  cons.reserve(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k)
    cons.push_back(MatrixXd(gen.instance.con_matrix().row(k).transpose().asDiagonal()));
  MatrixXd c(gen.instance.cost().asDiagonal());
  SdpInstance sdp(std::move(c), std::move(cons), gen.instance.rhs());
  return {std::move(gen.instance), std::move(sdp)};
}

}  // namespace entreg::testing
