#include "entreg/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "entreg/entropy.hpp"

namespace entreg {

namespace {

double binomial_guarded(int n, int k, double cap) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) {
    out *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (out > cap) return out;
  }
  return out;
}

bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[static_cast<size_t>(i)] < n - k + i) {
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

VertexSolveResult lp_vertex_solve(const LpInstance& inst) {
  const int d = inst.num_vars();
  const int m = inst.num_cons();
  if (d > 25) throw std::invalid_argument("lp_vertex_solve: limited to 25 variables");
  if (binomial_guarded(d, m, 2e5) > 2e5)
    throw std::invalid_argument("lp_vertex_solve: too many bases to enumerate");

  const MatrixXd& a = inst.con_matrix();
  const VectorXd& b = inst.rhs();
  const VectorXd& c = inst.cost();

  VertexSolveResult res;
  std::vector<std::pair<double, VectorXd>> candidates;
  auto band = [&] { return 1e-9 * (1.0 + std::abs(res.objective)); };

  std::vector<int> idx(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<size_t>(i)] = i;
  MatrixXd basis(m, m);
  do {
    for (int j = 0; j < m; ++j) basis.col(j) = a.col(idx[static_cast<size_t>(j)]);
    Eigen::FullPivLU<MatrixXd> lu(basis);
    if (!lu.isInvertible()) continue;
    const VectorXd xb = lu.solve(b);
    const double feas_tol = 1e-10 * std::max(1.0, xb.cwiseAbs().maxCoeff());
    if ((xb.array() < -feas_tol).any()) continue;

    VectorXd vertex = VectorXd::Zero(d);
    for (int j = 0; j < m; ++j) vertex[idx[static_cast<size_t>(j)]] = std::max(xb[j], 0.0);
    const double obj = c.dot(vertex);
    if (!std::isfinite(res.objective) || obj < res.objective - band()) {
      res.objective = obj;
      std::erase_if(candidates,
                    [&](const auto& cand) { return cand.first > res.objective + band(); });
    } else if (obj > res.objective + band()) {
      continue;
    }
    res.objective = std::min(res.objective, obj);
    candidates.emplace_back(obj, std::move(vertex));
  } while (next_combination(idx, d));

  if (candidates.empty()) throw std::runtime_error("lp_vertex_solve: instance is infeasible");

  for (auto& [obj, vertex] : candidates) {
    if (obj > res.objective + band()) continue;
    const double dedup_tol = 1e-9 * (1.0 + vertex.cwiseAbs().maxCoeff());
    bool seen = false;
    for (const VectorXd& kept : res.vertices)
      if ((kept - vertex).lpNorm<Eigen::Infinity>() <= dedup_tol) {
        seen = true;
        break;
      }
    if (!seen) res.vertices.push_back(std::move(vertex));
  }
  return res;
}

BruteforceResult primal_bruteforce(const LpInstance& inst, double epsilon) {
  if (inst.num_vars() > 50) throw std::invalid_argument("primal_bruteforce: limited to 50 variables");
  if (!(epsilon > 0)) throw std::invalid_argument("primal_bruteforce: epsilon must be positive");

  const MatrixXd& a = inst.con_matrix();
  const VectorXd& b = inst.rhs();
  const VectorXd& c = inst.cost();
  const int m = inst.num_cons();

  const Eigen::LLT<MatrixXd> aat(a * a.transpose());
  if (aat.info() != Eigen::Success)
    throw std::runtime_error("primal_bruteforce: could not factor A A^T");
  const VectorXd x_ls = a.transpose() * aat.solve(b);
  if ((a * x_ls - b).lpNorm<Eigen::Infinity>() > 1e-8 * (1.0 + b.lpNorm<Eigen::Infinity>()))
    throw std::runtime_error("primal_bruteforce: no feasible starting point found");

  constexpr double kFloor = 1e-300;
  const double start_floor = 1e-3 * (1.0 + x_ls.lpNorm<Eigen::Infinity>());
  VectorXd x = x_ls.cwiseMax(start_floor);
  VectorXd nu = VectorXd::Zero(m);

  BruteforceResult res;
  const double feas_tol = 1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>());
  const int max_iter = 1000;
  double merit_kappa = 1.0;

  auto merit = [&](const VectorXd& xx) {
    return lp_primal_objective(inst, xx, epsilon) + merit_kappa * (a * xx - b).lpNorm<1>();
  };

  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    const VectorXd grad = c.array() + epsilon * (1.0 + x.array().log());
    const VectorXd hinv = x / epsilon;
    const VectorXd r_dual = grad + a.transpose() * nu;
    const VectorXd r_primal = a * x - b;

    // KKT step via the Schur complement of the diagonal Hessian.
    const MatrixXd schur = a * hinv.asDiagonal() * a.transpose();
    const Eigen::LLT<MatrixXd> schur_llt(schur);
    if (schur_llt.info() != Eigen::Success) break;
    const VectorXd dnu = schur_llt.solve(r_primal - a * hinv.cwiseProduct(r_dual));
    const VectorXd dx = -hinv.cwiseProduct(r_dual + a.transpose() * dnu);

    const double decrement = std::sqrt(dx.cwiseAbs2().cwiseQuotient(hinv.cwiseMax(1e-300)).sum());
    res.feasibility = r_primal.lpNorm<Eigen::Infinity>();
    res.stationarity = decrement;
    if (res.feasibility <= feas_tol && decrement <= 1e-8) {
      res.converged = true;
      break;
    }

    // Fraction-to-boundary over coordinates of macroscopic size; the
    // vanishing ones are clipped at the floor after the step instead of
    // throttling everyone else.
    const double active_tol = 1e-12 * (1.0 + x.lpNorm<Eigen::Infinity>());
    double t_max = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (dx[i] < 0 && x[i] > active_tol) t_max = std::min(t_max, -0.995 * x[i] / dx[i]);

    merit_kappa = std::max(merit_kappa, 2.0 * (nu + dnu).lpNorm<Eigen::Infinity>() + 1.0);
    const double merit0 = merit(x);
    double t = t_max;
    VectorXd x_next;
    bool stepped = false;
    for (int bt = 0; bt < 60; ++bt, t *= 0.5) {
      x_next = (x + t * dx).cwiseMax(kFloor);
      if (merit(x_next) <= merit0 + 1e-12 * (1.0 + std::abs(merit0))) {
        stepped = true;
        break;
      }
    }
    if (!stepped) break;
    x = std::move(x_next);
    nu += t * dnu;
  }

  res.x = std::move(x);
  res.value = lp_primal_objective(inst, res.x, epsilon);
  return res;
}

}  // namespace entreg
