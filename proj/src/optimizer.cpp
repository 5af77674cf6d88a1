#include "entreg/optimizer.hpp"

#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>

#include "entreg/entropy.hpp"
#include "entreg/lp_dual.hpp"
#include "entreg/sdp_dual.hpp"

namespace entreg {

namespace {

// Internally the maximizer runs as a minimizer of f = -G.
struct Point {
  VectorXd x;
  double f = kInf;
  VectorXd g;
  bool valid = false;  // finite value and finite gradient
};

class Objective {
 public:
  explicit Objective(const DualFn& eval) : eval_(eval) {}

  Point at(VectorXd x) const {
    auto [value, grad] = eval_(x);
    Point p;
    p.x = std::move(x);
    p.f = -value;
    p.g = -grad;
    p.valid = std::isfinite(value) && grad.allFinite();
    return p;
  }

 private:
  const DualFn& eval_;
};

struct Correction {
  VectorXd s;
  VectorXd y;
  double rho;
};

VectorXd lbfgs_direction(const std::deque<Correction>& mem, const VectorXd& grad) {
  VectorXd q = grad;
  std::vector<double> alpha(mem.size());
  for (size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * mem[i].s.dot(q);
    q -= alpha[i] * mem[i].y;
  }
  const Correction& last = mem.back();
  q *= last.s.dot(last.y) / last.y.squaredNorm();
  for (size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * mem[i].y.dot(q);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return -q;
}

struct LineSearchResult {
  bool ok = false;
  bool wolfe = false;
  double alpha = 0.0;
  Point point;
};

// Strong-Wolfe bracketing line search on f along the descent direction d,
// with dphi0 = g.d < 0. Non-finite trial values count as "too far" and
// shrink the bracket. Budget counts objective evaluations.
class WolfeSearch {
 public:
  WolfeSearch(const Objective& obj, const Point& origin, const VectorXd& dir, double dphi0,
              const SolverConfig& cfg)
      : obj_(obj), origin_(origin), dir_(dir), dphi0_(dphi0), cfg_(cfg) {}

  LineSearchResult run(double alpha_init) {
    double alpha_prev = 0.0;
    double phi_prev = origin_.f;
    double alpha = alpha_init;
    for (int i = 0; budget_ > 0; ++i) {
      Point p = probe(alpha);
      if (plateau_accept(p)) return accept(alpha, std::move(p), true);
      if (!p.valid || p.f > armijo(alpha) || (i > 0 && p.f >= phi_prev)) {
        return zoom(alpha_prev, phi_prev, alpha);
      }
      const double dphi = p.g.dot(dir_);
      if (std::abs(dphi) <= -cfg_.wolfe_c2 * dphi0_) return accept(alpha, std::move(p), true);
      remember(alpha, p);
      if (dphi >= 0) return zoom(alpha, p.f, alpha_prev);
      alpha_prev = alpha;
      phi_prev = p.f;
      if (alpha >= 1e100) break;
      alpha *= 2.0;
    }
    return fallback();
  }

 private:
  double armijo(double alpha) const { return origin_.f + cfg_.wolfe_c1 * alpha * dphi0_; }

  Point probe(double alpha) {
    --budget_;
    return obj_.at(origin_.x + alpha * dir_);
  }

  void remember(double alpha, const Point& p) {
    if (!best_ || p.f < best_->second.f) best_.emplace(alpha, p);
  }

  LineSearchResult accept(double alpha, Point p, bool wolfe) const {
    return {true, wolfe, alpha, std::move(p)};
  }

  // Near the optimum the true improvement falls below the resolution of the
  // value itself; the directional derivative stays measurable, so a step
  // that does not increase f and meets the curvature condition is accepted.
  bool plateau_accept(const Point& p) const {
    return p.valid && p.f <= origin_.f && std::abs(p.g.dot(dir_)) <= -cfg_.wolfe_c2 * dphi0_;
  }

  LineSearchResult zoom(double lo, double phi_lo, double hi) {
    std::optional<Point> lo_point;
    while (budget_ > 0 && std::abs(hi - lo) > 1e-18 * (1.0 + std::abs(lo))) {
      const double alpha = 0.5 * (lo + hi);
      Point p = probe(alpha);
      if (plateau_accept(p)) return accept(alpha, std::move(p), true);
      if (!p.valid || p.f > armijo(alpha) || p.f >= phi_lo) {
        hi = alpha;
        continue;
      }
      const double dphi = p.g.dot(dir_);
      if (std::abs(dphi) <= -cfg_.wolfe_c2 * dphi0_) return accept(alpha, std::move(p), true);
      remember(alpha, p);
      if (dphi * (hi - lo) >= 0) hi = lo;
      lo = alpha;
      phi_lo = p.f;
      lo_point = std::move(p);
    }
    if (lo_point) return accept(lo, std::move(*lo_point), false);
    return fallback();
  }

  // Accept the best sufficient-decrease point seen when the curvature
  // condition is unreachable within the budget.
  LineSearchResult fallback() {
    if (best_) return accept(best_->first, std::move(best_->second), false);
    return {};
  }

  const Objective& obj_;
  const Point& origin_;
  const VectorXd& dir_;
  double dphi0_;
  const SolverConfig& cfg_;
  int budget_ = 50;
  std::optional<std::pair<double, Point>> best_;
};

}  // namespace

MaximizeResult maximize_concave(const DualFn& eval, VectorXd start, const SolverConfig& config) {
  config.validate();
  const Objective obj(eval);
  Point cur = obj.at(std::move(start));
  if (!cur.valid)
    throw std::runtime_error(
        "maximize_concave: objective not finite at the starting point; "
        "rescale epsilon or shift the start");

  MaximizeResult res;
  std::deque<Correction> memory;
  res.trace.push_back({0, -cur.f, cur.g.lpNorm<Eigen::Infinity>()});

  while (true) {
    const double gnorm = cur.g.lpNorm<Eigen::Infinity>();
    if (gnorm <= config.grad_tol) {
      res.converged = true;
      break;
    }
    if (res.iterations >= config.max_iter) {
      res.note = "iteration limit reached";
      break;
    }

    VectorXd dir;
    double dphi0 = 0.0;
    bool steepest = memory.empty();
    if (!steepest) {
      dir = lbfgs_direction(memory, cur.g);
      dphi0 = dir.dot(cur.g);
      if (!(dphi0 < 0) || !std::isfinite(dphi0)) steepest = true;
    }
    if (steepest) {
      memory.clear();
      dir = -cur.g / std::max(1.0, cur.g.norm());
      dphi0 = dir.dot(cur.g);
    }

    LineSearchResult ls = WolfeSearch(obj, cur, dir, dphi0, config).run(1.0);
    if (!ls.ok && !steepest) {
      // Stale curvature pairs can poison the direction on the exponential
      // cliffs; fall back to steepest ascent before giving up.
      memory.clear();
      dir = -cur.g / std::max(1.0, cur.g.norm());
      dphi0 = dir.dot(cur.g);
      ls = WolfeSearch(obj, cur, dir, dphi0, config).run(1.0);
    }
    if (!ls.ok) {
      res.note = "line search failed at iteration " + std::to_string(res.iterations + 1) +
                 " (no improving step within 50 evaluations)";
      break;
    }

    const VectorXd s = ls.point.x - cur.x;
    const VectorXd y = ls.point.g - cur.g;
    const double sy = s.dot(y);
    if (std::isfinite(sy) && sy > 1e-10 * s.norm() * y.norm()) {
      memory.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(memory.size()) > config.lbfgs_memory) memory.pop_front();
    } else if (!ls.wolfe) {
      memory.clear();
    }

    // A gradient magnitude jump of several orders means the local quadratic
    // model changed scale entirely (descending an exponential cliff); the
    // stored pairs would only mislead the next direction.
    const double new_gnorm = ls.point.g.lpNorm<Eigen::Infinity>();
    if (new_gnorm > 1.0 && (new_gnorm < 1e-4 * gnorm || new_gnorm > 1e4 * gnorm)) memory.clear();

    cur = std::move(ls.point);
    ++res.iterations;
    res.trace.push_back({res.iterations, -cur.f, cur.g.lpNorm<Eigen::Infinity>()});
  }

  res.argmax = std::move(cur.x);
  res.value = -cur.f;
  res.grad_inf_norm = cur.g.lpNorm<Eigen::Infinity>();
  return res;
}

namespace {

// When the dual is a sentinel at the requested start, move along a
// direction w with A^T w > 0 (when one exists) far enough that every
// exponent is nonpositive. The least-squares solve targets the all-ones
// profile; for instances carrying an all-ones constraint row it recovers
// that row exactly.
std::optional<VectorXd> shifted_lp_start(const LpInstance& inst, double epsilon) {
  const MatrixXd& a = inst.con_matrix();
  const Eigen::LLT<MatrixXd> gram(a * a.transpose());
  if (gram.info() != Eigen::Success) return std::nullopt;
  const VectorXd w = gram.solve(a * VectorXd::Ones(inst.num_vars()));
  const VectorXd r = a.transpose() * w;
  if (r.minCoeff() <= 1e-10 * std::max(1.0, r.maxCoeff())) return std::nullopt;
  double t = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    t = std::max(t, (-inst.cost()[i] - epsilon) / r[i]);
  return VectorXd(-(t + 1.0) * w);
}

std::optional<VectorXd> shifted_sdp_start(const SdpInstance& inst, double epsilon) {
  const int m = inst.num_cons();
  MatrixXd gram(m, m);
  VectorXd traces(m);
  for (int j = 0; j < m; ++j) {
    traces[j] = inst.con_matrices()[j].mat().trace();
    for (int k = j; k < m; ++k)
      gram(j, k) = gram(k, j) =
          (inst.con_matrices()[j].mat().array() * inst.con_matrices()[k].mat().array()).sum();
  }
  const Eigen::LLT<MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const VectorXd w = llt.solve(traces);
  const VectorXd sw = sym_eig(SymMatrix(inst.adjoint_apply(w))).values;
  if (sw.minCoeff() <= 1e-10 * std::max(1.0, sw.maxCoeff())) return std::nullopt;
  const VectorXd sc = sym_eig(inst.cost()).values;
  const double t = std::max(0.0, (-sc.minCoeff() - epsilon) / sw.minCoeff());
  return VectorXd(-(t + 1.0) * w);
}

// Exponents far above zero put the start high up an exponential cliff where
// line searches crawl; a start with every exponent at or below zero ascends
// the dual from its flat side instead. Warm starts near an optimum have
// exponents of order ln(x*) and are left alone.
constexpr double kCliffExponent = 30.0;

template <typename MaxExponent, typename StartShift>
VectorXd pick_start(const DualFn& fn, const VectorXd& requested, int m,
                    const MaxExponent& max_exponent, const StartShift& shift) {
  auto finite_at = [&](const VectorXd& l) { return std::isfinite(fn(l).first); };
  if (finite_at(requested) && max_exponent(requested) <= kCliffExponent) return requested;
  if (auto shifted = shift(); shifted && finite_at(*shifted)) return *shifted;
  if (finite_at(requested)) return requested;
  if (requested.norm() > 0 && finite_at(VectorXd::Zero(m))) return VectorXd::Zero(m);
  return requested;  // let maximize_concave raise the designed error
}

SolveReport report_from(MaximizeResult&& mr, double epsilon) {
  SolveReport rep;
  rep.dual_opt = std::move(mr.argmax);
  rep.dual_value = mr.value;
  rep.grad_inf_norm = mr.grad_inf_norm;
  rep.iterations = mr.iterations;
  rep.converged = mr.converged;
  rep.note = std::move(mr.note);
  rep.trace = std::move(mr.trace);
  rep.epsilon = epsilon;
  return rep;
}

}  // namespace

SolveReport solve_lp(const LpInstance& inst, const SolverConfig& config, const VectorXd& start) {
  config.validate();
  const DualFn fn = [&](const VectorXd& lambda) {
    LpDualEval e = lp_dual_eval(inst, lambda, config.epsilon, config.exp_clamp);
    return std::make_pair(e.value, std::move(e.gradient));
  };
  const auto max_exponent = [&](const VectorXd& l) {
    return (((inst.con_matrix().transpose() * l - inst.cost()) / config.epsilon).array() - 1.0)
        .maxCoeff();
  };
  const VectorXd start0 = pick_start(fn, start, inst.num_cons(), max_exponent,
                                     [&] { return shifted_lp_start(inst, config.epsilon); });
  SolveReport rep = report_from(maximize_concave(fn, start0, config), config.epsilon);
  const VectorXd x = lp_primal_point(inst, rep.dual_opt, config.epsilon, config.exp_clamp);
  rep.primal_value = lp_primal_objective(inst, x, config.epsilon);
  rep.primal_point = x;
  return rep;
}

SolveReport solve_lp(const LpInstance& inst, const SolverConfig& config) {
  return solve_lp(inst, config, VectorXd::Zero(inst.num_cons()));
}

SolveReport solve_sdp(const SdpInstance& inst, const SolverConfig& config, const VectorXd& start) {
  config.validate();
  const DualFn fn = [&](const VectorXd& lambda) {
    SdpDualEval e = sdp_dual_eval(inst, lambda, config.epsilon, config.exp_clamp);
    return std::make_pair(e.value, std::move(e.gradient));
  };
  const auto max_exponent = [&](const VectorXd& l) {
    const MatrixXd s = (inst.adjoint_apply(l) - inst.cost().mat()) / config.epsilon;
    return sym_eig(SymMatrix(s)).values.maxCoeff() - 1.0;
  };
  const VectorXd start0 = pick_start(fn, start, inst.num_cons(), max_exponent,
                                     [&] { return shifted_sdp_start(inst, config.epsilon); });
  SolveReport rep = report_from(maximize_concave(fn, start0, config), config.epsilon);
  const SymMatrix x = sdp_primal_point(inst, rep.dual_opt, config.epsilon, config.exp_clamp);
  rep.primal_value = sdp_primal_objective(inst, x, config.epsilon);
  rep.primal_point = x;
  return rep;
}

SolveReport solve_sdp(const SdpInstance& inst, const SolverConfig& config) {
  return solve_sdp(inst, config, VectorXd::Zero(inst.num_cons()));
}

namespace {

template <typename Inst, typename Solve>
std::vector<SolveReport> run_continuation(const Inst& inst, const Schedule& schedule,
                                          SolverConfig config, int num_cons,
                                          const Solve& solve) {
  schedule.validate();
  std::vector<SolveReport> reports;
  std::optional<VectorXd> warm;
  for (const double eps : schedule.epsilons()) {
    config.epsilon = eps;
    const VectorXd start = warm ? *warm : VectorXd::Zero(num_cons);
    try {
      reports.push_back(solve(inst, config, start));
      warm = reports.back().dual_opt;
    } catch (const std::exception& first_error) {
      try {
        reports.push_back(solve(inst, config, VectorXd::Zero(num_cons)));
        warm = reports.back().dual_opt;
      } catch (const std::exception& second_error) {
        SolveReport failed;
        failed.epsilon = eps;
        failed.note = std::string("step failed: ") + second_error.what();
        reports.push_back(std::move(failed));
        warm.reset();
      }
    }
  }
  return reports;
}

}  // namespace

std::vector<SolveReport> solve_continuation(const LpInstance& inst, const Schedule& schedule,
                                            const SolverConfig& config) {
  return run_continuation(inst, schedule, config, inst.num_cons(),
                          [](const LpInstance& i, const SolverConfig& c, const VectorXd& s) {
                            return solve_lp(i, c, s);
                          });
}

std::vector<SolveReport> solve_continuation(const SdpInstance& inst, const Schedule& schedule,
                                            const SolverConfig& config) {
  return run_continuation(inst, schedule, config, inst.num_cons(),
                          [](const SdpInstance& i, const SolverConfig& c, const VectorXd& s) {
                            return solve_sdp(i, c, s);
                          });
}

}  // namespace entreg
