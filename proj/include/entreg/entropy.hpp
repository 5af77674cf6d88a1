#pragma once

#include "entreg/types.hpp"

namespace entreg {

/// Boltzmann-Shannon entropy sum_i x_i ln(x_i) with the 0 ln 0 = 0
/// convention. Returns +inf if any coordinate is negative; the sentinel
/// encodes the extended-value domain {x >= 0}.
double shannon_entropy(const VectorXd& x);

/// Von Neumann entropy Tr(X ln X) = sum_i sigma_i ln(sigma_i) over the
/// eigenvalues, with 0 ln 0 = 0 applied to eigenvalues within
/// eig_tol = 1e-12 * max(1, ||X||_F) of zero. Returns +inf if some
/// eigenvalue falls below -eig_tol.
double von_neumann_entropy(const SymMatrix& x);

/// c^T x + epsilon * shannon_entropy(x); the +inf sentinel propagates.
double lp_primal_objective(const LpInstance& inst, const VectorXd& x, double epsilon);

/// Tr(C X) + epsilon * von_neumann_entropy(X); the +inf sentinel propagates.
double sdp_primal_objective(const SdpInstance& inst, const SymMatrix& x, double epsilon);

}  // namespace entreg
