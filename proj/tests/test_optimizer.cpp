#include <doctest.h>

#include <cmath>

#include "entreg/entropy.hpp"
#include "entreg/generate.hpp"
#include "entreg/io.hpp"
#include "entreg/lp_dual.hpp"
#include "entreg/optimizer.hpp"
#include "entreg/oracle.hpp"
#include "entreg/ot.hpp"
#include "helpers.hpp"

using namespace entreg;
using namespace entreg::testing;

namespace {

LpInstance load_lp(const std::string& name) {
  return std::get<LpInstance>(parse_instance_file(std::string(ENTREG_DATA_DIR) + "/" + name));
}

OtInstance load_ot(const std::string& name) {
  return std::get<OtInstance>(parse_instance_file(std::string(ENTREG_DATA_DIR) + "/" + name));
}

void check_strong_duality(const SolveReport& rep) {
  REQUIRE(rep.converged);
  CHECK(std::abs(rep.dual_value - rep.primal_value) <= 1e-6 * (1 + std::abs(rep.dual_value)));
}

}  // namespace

TEST_CASE("maximize_concave on a concave quadratic") {
  VectorXd target(2);
  target << 1, 2;
  const DualFn quad = [&](const VectorXd& l) {
    return std::make_pair(-(l - target).squaredNorm(), VectorXd(-2 * (l - target)));
  };
  SolverConfig cfg;
  cfg.grad_tol = 1e-10;
  const MaximizeResult res = maximize_concave(quad, VectorXd::Zero(2), cfg);
  REQUIRE(res.converged);
  CHECK((res.argmax - target).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("maximize_concave finds the analytic dual optimum of the toy LP") {
  const LpInstance inst = load_lp("uniform2.lp");
  SolverConfig cfg;
  const DualFn fn = [&](const VectorXd& l) {
    LpDualEval e = lp_dual_eval(inst, l, 1.0);
    return std::make_pair(e.value, std::move(e.gradient));
  };
  const MaximizeResult res = maximize_concave(fn, VectorXd::Zero(1), cfg);
  REQUIRE(res.converged);
  CHECK(res.argmax[0] == doctest::Approx(1.0 - std::log(2.0)));
  CHECK(res.value == doctest::Approx(-std::log(2.0)));
}

TEST_CASE("maximize_concave rejects a sentinel starting point") {
  const LpInstance inst = load_lp("uniform2.lp");
  const DualFn fn = [&](const VectorXd& l) {
    LpDualEval e = lp_dual_eval(inst, l, 1.0);
    return std::make_pair(e.value, std::move(e.gradient));
  };
  VectorXd far(1);
  far << 1e6;
  CHECK_THROWS_AS(maximize_concave(fn, far, SolverConfig()), std::runtime_error);
}

TEST_CASE("accepted iterates have non-decreasing dual values") {
  const GeneratedLp gen = generate_lp(41, 40, 6, true);
  SolverConfig cfg;
  cfg.epsilon = 0.05;
  const SolveReport rep = solve_lp(gen.instance, cfg);
  REQUIRE(rep.converged);
  for (size_t k = 1; k < rep.trace.size(); ++k)
    CHECK(rep.trace[k].dual_value >= rep.trace[k - 1].dual_value);
}

TEST_CASE("solve_lp on the uniform toy") {
  SolverConfig cfg;
  cfg.epsilon = 1.0;
  const SolveReport rep = solve_lp(load_lp("uniform2.lp"), cfg);
  check_strong_duality(rep);
  CHECK(rep.dual_value == doctest::Approx(-std::log(2.0)));
  CHECK(rep.primal_vector()[0] == doctest::Approx(0.5));
  CHECK(rep.primal_vector()[1] == doctest::Approx(0.5));
}

TEST_CASE("solve_lp reproduces the transport toy value") {
  SolverConfig cfg;
  cfg.epsilon = 0.01;
  const SolveReport rep = solve_lp(load_lp("toy_ot.lp"), cfg);
  check_strong_duality(rep);
  CHECK(std::abs(rep.dual_value - 1.7906) <= 5e-3);
  CHECK(rep.grad_inf_norm <= 1e-5);
  // The gradient is the feasibility residual.
  const VectorXd residual =
      load_lp("toy_ot.lp").con_matrix() * rep.primal_vector() - load_lp("toy_ot.lp").rhs();
  CHECK(residual.lpNorm<Eigen::Infinity>() <= 10 * cfg.grad_tol);
}

TEST_CASE("solve_lp agrees with both oracles on a random instance") {
  const GeneratedLp gen = generate_lp(42, 8, 3, true);
  const VertexSolveResult vertex = lp_vertex_solve(gen.instance);
  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  const SolveReport rep = solve_lp(gen.instance, cfg);
  check_strong_duality(rep);
  CHECK(std::abs(rep.dual_value - vertex.objective) <= 0.05);

  const BruteforceResult bf = primal_bruteforce(gen.instance, cfg.epsilon);
  CHECK(close_rel(rep.primal_value, bf.value, 1e-5));
}

TEST_CASE("solve_lp recovers from a sentinel cold start via the shifted start") {
  // Gaussian costs at this epsilon put lambda = 0 past the exponent clamp.
  const GeneratedLp gen = generate_lp(43, 12, 4, true);
  SolverConfig cfg;
  cfg.epsilon = 1e-3;
  REQUIRE(lp_dual_eval(gen.instance, VectorXd::Zero(4), cfg.epsilon).clamped);
  const SolveReport rep = solve_lp(gen.instance, cfg);
  CHECK(rep.converged);
}

TEST_CASE("solve_sdp on the unit-trace toy") {
  const SdpInstance inst = std::get<SdpInstance>(
      parse_instance_file(std::string(ENTREG_DATA_DIR) + "/trace2.sdp"));
  SolverConfig cfg = SolverConfig::sdp_defaults();
  cfg.epsilon = 1.0;
  const SolveReport rep = solve_sdp(inst, cfg);
  check_strong_duality(rep);
  CHECK(rep.dual_value == doctest::Approx(-std::log(2.0)));
  CHECK(rep.primal_matrix().mat().isApprox(0.5 * MatrixXd::Identity(2, 2), 1e-6));
  for (int k = 0; k < inst.num_cons(); ++k) {
    const double residual = (inst.con_matrices()[static_cast<size_t>(k)].mat().array() *
                             rep.primal_matrix().mat().array())
                                .sum() -
                            inst.rhs()[k];
    CHECK(std::abs(residual) <= 10 * cfg.grad_tol);
  }
}

TEST_CASE("solve_sdp matches solve_lp on a diagonal instance") {
  SplitMix64 rng(44);
  DiagonalPair pair = make_diagonal_pair(rng, 6, 3);
  SolverConfig lp_cfg;
  lp_cfg.epsilon = 0.1;
  lp_cfg.grad_tol = 1e-9;
  SolverConfig sdp_cfg = lp_cfg;
  const SolveReport lp_rep = solve_lp(pair.lp, lp_cfg);
  const SolveReport sdp_rep = solve_sdp(pair.sdp, sdp_cfg);
  REQUIRE(lp_rep.converged);
  REQUIRE(sdp_rep.converged);
  CHECK(close(lp_rep.dual_value, sdp_rep.dual_value, 1e-8 * (1 + std::abs(lp_rep.dual_value))));
  CHECK((sdp_rep.primal_matrix().mat().diagonal() - lp_rep.primal_vector())
            .lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("continuation on the symmetric degenerate instance") {
  const LpInstance inst = load_lp("uniform2.lp");
  const Schedule sched{1.0, 0.5, 6};
  const std::vector<SolveReport> reps = solve_continuation(inst, sched, SolverConfig());
  REQUIRE(reps.size() == 6);
  for (const SolveReport& rep : reps) {
    REQUIRE(rep.converged);
    CHECK(rep.primal_vector()[0] == doctest::Approx(0.5));
    CHECK(rep.primal_vector()[1] == doctest::Approx(0.5));
  }
}

TEST_CASE("continuation approaches the entropy-minimal optimizer on the degenerate face") {
  const LpInstance inst = load_lp("face3.lp");
  const Schedule sched{0.1, 0.1, 4};
  const std::vector<SolveReport> reps = solve_continuation(inst, sched, SolverConfig());
  REQUIRE(reps.size() == 4);
  for (const SolveReport& rep : reps) REQUIRE(rep.converged);

  VectorXd limit(3);
  limit << 0.5, 0.5, 0.0;
  CHECK((reps.back().primal_vector() - limit).lpNorm<Eigen::Infinity>() <= 1e-3);

  // Value sandwich along the schedule: 0 <= c^T x(eps) - tau <=
  // eps (f(x_opt) - f(x(eps))) for the entropy-minimal vertex x_opt, and the
  // gap shrinks to zero.
  const VertexSolveResult vertex = lp_vertex_solve(inst);
  double best_entropy = kInf;
  VectorXd x_opt;
  for (const VectorXd& v : vertex.vertices) {
    const double f = shannon_entropy(v);
    if (f < best_entropy) {
      best_entropy = f;
      x_opt = v;
    }
  }
  double prev_gap = kInf;
  const std::vector<double> epsilons = sched.epsilons();
  for (size_t k = 0; k < reps.size(); ++k) {
    const VectorXd& x = reps[k].primal_vector();
    const double gap = inst.cost().dot(x) - vertex.objective;
    CHECK(gap >= -1e-9);
    CHECK(gap <= epsilons[k] * (best_entropy - shannon_entropy(x)) + 1e-6);
    CHECK(gap <= prev_gap + 1e-12);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 1e-3);
}

TEST_CASE("continuation dual values on the transport toy approach the vertex optimum") {
  const OtInstance ot = load_ot("toy_ot.ot");
  const OtLpReduction red = ot_to_lp(ot);
  const VertexSolveResult vertex = lp_vertex_solve(red.lp);
  CHECK(vertex.objective == doctest::Approx(1.8));

  const Schedule sched{0.1, 0.1, 3};
  const std::vector<SolveReport> reps = solve_continuation(red.lp, sched, SolverConfig());
  double prev_gap = kInf;
  for (const SolveReport& rep : reps) {
    REQUIRE(rep.converged);
    const double gap = std::abs(rep.dual_value - vertex.objective);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 0.01);
}

TEST_CASE("warm starts do not cost iterations against cold starts") {
  const Schedule sched{0.1, 0.5, 6};
  for (const std::string name : {"toy_ot.lp", "face3.lp", "uniform2.lp"}) {
    const LpInstance inst = load_lp(name);
    const std::vector<SolveReport> warm = solve_continuation(inst, sched, SolverConfig());
    int warm_total = 0, cold_total = 0;
    for (const SolveReport& rep : warm) warm_total += rep.iterations;
    SolverConfig cfg;
    for (const double eps : sched.epsilons()) {
      cfg.epsilon = eps;
      cold_total += solve_lp(inst, cfg).iterations;
    }
    CHECK(warm_total <= cold_total);
  }
}
