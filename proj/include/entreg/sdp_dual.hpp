#pragma once

#include <utility>

#include "entreg/types.hpp"

namespace entreg {

/// Symmetric eigendecomposition M = Q diag(values) Q^T with eigenvalues in
/// ascending order and Q orthogonal. Backed by a tridiagonalization solver;
/// the contract is the reconstruction tolerance, not the algorithm:
/// ||Q^T Q - I||_F <= 1e-10 n and ||Q diag Q^T - M||_F <= 1e-9 max(1, ||M||_F).
struct SymEig {
  MatrixXd vectors;
  VectorXd values;
};
SymEig sym_eig(const SymMatrix& m);

/// exp(M) through the spectral decomposition, with eigenvalue exponents
/// clamped to [-exp_clamp, exp_clamp]. Result is symmetric positive definite.
SymMatrix mat_exp_sym(const SymMatrix& m, double exp_clamp = 700.0);

/// Closed-form dual minimizer X(lambda) = exp((A*lambda - C)/epsilon - I).
SymMatrix sdp_primal_point(const SdpInstance& inst, const VectorXd& lambda, double epsilon,
                           double exp_clamp = 700.0);

struct SdpDualEval {
  /// b^T lambda - epsilon Tr(X(lambda)); -inf sentinel when the exponent
  /// clamp fired or the trace overflowed.
  double value = -kInf;
  /// gradient_k = b_k - Tr(A_k X(lambda)), evaluated from the clamped X.
  VectorXd gradient;
  bool clamped = false;
};
SdpDualEval sdp_dual_eval(const SdpInstance& inst, const VectorXd& lambda, double epsilon,
                          double exp_clamp = 700.0);

/// Eigenvalue sandwich for Tr(A B) with B PSD: pairing both spectra in
/// ascending order gives the upper bound, pairing them in opposite order the
/// lower bound. Throws if B is not PSD (min eigenvalue < -1e-10 ||B||_F).
std::pair<double, double> trace_bounds(const SymMatrix& a, const SymMatrix& b);

}  // namespace entreg
