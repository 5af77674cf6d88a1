#include "entreg/generate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entreg {

double SplitMix64::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 drawn in (0, 1] so the log is finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

GeneratedLp generate_lp(std::uint64_t seed, int num_vars, int num_cons,
                        bool with_compactness_row) {
  if (num_vars < 1 || num_cons < 1) throw std::invalid_argument("generate_lp: dimensions must be positive");
  if (num_cons > num_vars) throw std::invalid_argument("generate_lp: num_cons must not exceed num_vars");

  SplitMix64 rng(seed);
  MatrixXd a(num_cons, num_vars);
  for (int i = 0; i < num_cons; ++i) {
    if (i == 0 && with_compactness_row) {
      a.row(0).setOnes();
      continue;
    }
    for (int j = 0; j < num_vars; ++j) a(i, j) = rng.next_normal();
  }
  VectorXd c(num_vars);
  for (int j = 0; j < num_vars; ++j) c[j] = rng.next_normal();
  VectorXd x0(num_vars);
  for (int j = 0; j < num_vars; ++j) x0[j] = rng.next_uniform(0.5, 1.5);

  VectorXd b = a * x0;
  return {LpInstance(std::move(a), std::move(b), std::move(c)), std::move(x0)};
}

GeneratedSdp generate_sdp(std::uint64_t seed, int dim, int num_cons, bool with_trace_row) {
  if (dim < 1 || num_cons < 1) throw std::invalid_argument("generate_sdp: dimensions must be positive");
  if (static_cast<long>(num_cons) > static_cast<long>(dim) * (dim + 1) / 2)
    throw std::invalid_argument("generate_sdp: num_cons exceeds the symmetric dimension");

  for (int attempt = 0; attempt < 10; ++attempt) {
    // Attempt k runs on the substream seed + k * 0x9E3779B97F4A7C15.
    SplitMix64 rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt));
    auto random_symmetric = [&] {
      MatrixXd m(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = rng.next_normal();
      return MatrixXd(0.5 * (m + m.transpose()));
    };

    std::vector<MatrixXd> cons;
    cons.reserve(static_cast<size_t>(num_cons));
    for (int k = 0; k < num_cons; ++k) {
      if (k == 0 && with_trace_row)
        cons.push_back(MatrixXd::Identity(dim, dim));
      else
        cons.push_back(random_symmetric());
    }
    MatrixXd c = random_symmetric();

    MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = rng.next_normal();
    const SymMatrix x0(MatrixXd(m.transpose() * m / dim + 0.1 * MatrixXd::Identity(dim, dim)));

    VectorXd b(num_cons);
    for (int k = 0; k < num_cons; ++k)
      b[k] = (cons[static_cast<size_t>(k)].array() * x0.mat().array()).sum();

    try {
      return {SdpInstance(std::move(c), std::move(cons), std::move(b)), x0};
    } catch (const std::invalid_argument&) {
      continue;  // dependent constraint draw; retry on the next substream
    }
  }
  throw std::runtime_error("generate_sdp: could not draw independent constraints in 10 attempts");
}

OtInstance generate_ot(std::uint64_t seed, int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("generate_ot: dimensions must be positive");
  SplitMix64 rng(seed);
  MatrixXd cost(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) cost(i, j) = rng.next_uniform(0.0, 4.0);
  VectorXd p(rows), q(cols);
  for (int i = 0; i < rows; ++i) p[i] = rng.next_uniform(0.2, 1.2);
  for (int j = 0; j < cols; ++j) q[j] = rng.next_uniform(0.2, 1.2);
  p /= p.sum();
  q /= q.sum();
  return OtInstance(std::move(cost), std::move(p), std::move(q));
}

}  // namespace entreg
