#pragma once

#include <cstdint>

#include "entreg/types.hpp"

namespace entreg {

/// SplitMix64 stream with Box-Muller normals. The exact update constants
/// and draw orders are documented in the README so generated instances are
/// reproducible from the seed alone.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 random bits.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }

  /// Standard normal via Box-Muller on consecutive uniforms.
  double next_normal();

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct GeneratedLp {
  LpInstance instance;
  /// Strictly positive point with A x0 = b exactly (b is defined as A x0),
  /// so Slater's condition holds by construction.
  VectorXd feasible_point;
};

/// Random standard-form LP: A and c standard normal, x0 uniform in
/// (0.5, 1.5), b = A x0. With with_compactness_row the first row of A is
/// all ones, which bounds the feasible set. Deterministic in the seed.
GeneratedLp generate_lp(std::uint64_t seed, int num_vars, int num_cons,
                        bool with_compactness_row);

struct GeneratedSdp {
  SdpInstance instance;
  SymMatrix feasible_point;  // strictly positive definite, A(X0) = b exactly
};

/// Random SDP: symmetrized standard-normal constraint matrices and cost,
/// X0 = M^T M / n + 0.1 I, b_k = Tr(A_k X0). With with_trace_row the first
/// constraint matrix is the identity, so Tr X = b_1 bounds the feasible
/// set. Linear independence of the constraint matrices is validated;
/// on failure the generator retries with a fresh substream, at most ten
/// times. Deterministic in the seed.
GeneratedSdp generate_sdp(std::uint64_t seed, int dim, int num_cons, bool with_trace_row);

/// Random transport instance: costs uniform in [0, 4), marginals uniform in
/// (0.2, 1.2) then normalized. Deterministic in the seed.
OtInstance generate_ot(std::uint64_t seed, int rows, int cols);

}  // namespace entreg
