#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entreg/entropy.hpp"
#include "entreg/generate.hpp"
#include "entreg/lp_dual.hpp"
#include "helpers.hpp"

using namespace entreg;
using namespace entreg::testing;

namespace {

LpInstance simplex2(VectorXd cost) {
  return LpInstance(MatrixXd::Ones(1, 2), VectorXd::Ones(1), std::move(cost));
}

VectorXd scalar(double v) {
  VectorXd out(1);
  out << v;
  return out;
}

}  // namespace

TEST_CASE("lp_primal_point pinned values") {
  const LpInstance inst = simplex2(VectorXd::Zero(2));
  const VectorXd at_zero = lp_primal_point(inst, scalar(0.0), 1.0);
  CHECK(at_zero[0] == doctest::Approx(std::exp(-1.0)));
  CHECK(at_zero[1] == doctest::Approx(std::exp(-1.0)));

  // (A^T lambda - c)_i = epsilon everywhere gives a unit primal point.
  const double eps = 0.37;
  const VectorXd unit = lp_primal_point(inst, scalar(eps), eps);
  CHECK(unit[0] == doctest::Approx(1.0));
  CHECK(unit[1] == doctest::Approx(1.0));

  const VectorXd half = lp_primal_point(inst, scalar(1.0 - std::log(2.0)), 1.0);
  CHECK(half[0] == doctest::Approx(0.5));
  CHECK(half[1] == doctest::Approx(0.5));
}

TEST_CASE("lp_primal_point stays strictly positive for any multiplier") {
  SplitMix64 rng(21);
  const GeneratedLp gen = generate_lp(3, 6, 2, true);
  for (int trial = 0; trial < 200; ++trial) {
    const VectorXd lambda = random_normal_vector(rng, 2, 50.0);
    CHECK(lp_primal_point(gen.instance, lambda, 0.05).minCoeff() > 0.0);
  }
}

TEST_CASE("lp_dual_eval pinned values") {
  const LpInstance inst = simplex2(VectorXd::Zero(2));
  const LpDualEval at_zero = lp_dual_eval(inst, scalar(0.0), 1.0);
  CHECK(at_zero.value == doctest::Approx(-2.0 / std::numbers::e));
  CHECK(at_zero.gradient[0] == doctest::Approx(1.0 - 2.0 / std::numbers::e));

  const LpDualEval at_opt = lp_dual_eval(inst, scalar(1.0 - std::log(2.0)), 1.0);
  CHECK(at_opt.value == doctest::Approx(-std::log(2.0)));
  CHECK(at_opt.gradient[0] == doctest::Approx(0.0));

  CHECK_THROWS_AS(lp_dual_eval(inst, VectorXd::Zero(2), 1.0), std::invalid_argument);
}

TEST_CASE("lp_dual_eval gradient matches central finite differences") {
  const GeneratedLp gen = generate_lp(7, 5, 2, false);
  SplitMix64 rng(22);
  const double eps = 0.6;
  auto value = [&](const VectorXd& l) { return lp_dual_eval(gen.instance, l, eps).value; };
  for (int trial = 0; trial < 50; ++trial) {
    const VectorXd lambda = random_normal_vector(rng, 2);
    const LpDualEval e = lp_dual_eval(gen.instance, lambda, eps);
    for (int j = 0; j < 2; ++j) {
      const double fd = central_difference(value, lambda, j);
      CHECK(close(fd, e.gradient[j], 1e-6 * (1 + std::abs(e.gradient[j]))));
    }
  }
}

TEST_CASE("weak duality against the generator's feasible point") {
  SplitMix64 rng(23);
  const GeneratedLp gen = generate_lp(9, 8, 3, true);
  const double eps = 0.25;
  const double primal = lp_primal_objective(gen.instance, gen.feasible_point, eps);
  for (int trial = 0; trial < 200; ++trial) {
    const VectorXd lambda = random_normal_vector(rng, 3, 2.0);
    const double dual = lp_dual_eval(gen.instance, lambda, eps).value;
    CHECK(dual <= primal + 1e-9 * (1 + std::abs(primal) + std::abs(dual)));
  }
}

TEST_CASE("dual function is concave along random segments") {
  SplitMix64 rng(24);
  const GeneratedLp gen = generate_lp(10, 8, 3, true);
  const double eps = 0.5;
  auto value = [&](const VectorXd& l) { return lp_dual_eval(gen.instance, l, eps).value; };
  for (int trial = 0; trial < 1000; ++trial) {
    const VectorXd l1 = random_normal_vector(rng, 3);
    const VectorXd l2 = random_normal_vector(rng, 3);
    const double t = rng.next_uniform();
    const double lhs = value(t * l1 + (1 - t) * l2);
    const double rhs = t * value(l1) + (1 - t) * value(l2);
    CHECK(lhs >= rhs - 1e-9 * (1 + std::abs(lhs) + std::abs(rhs)));
  }
}

TEST_CASE("the dual decays along rays once far enough out") {
  SplitMix64 rng(25);
  const GeneratedLp gen = generate_lp(31, 10, 3, true);
  for (int trial = 0; trial < 100; ++trial) {
    VectorXd u = random_normal_vector(rng, 3);
    u /= u.norm();
    // Epsilon sized so the exponents stay below the clamp at t = 1000.
    const VectorXd row_scale = gen.instance.con_matrix().transpose() * u;
    const double eps =
        1000.0 * (row_scale.cwiseAbs().maxCoeff() + gen.instance.cost().cwiseAbs().maxCoeff() + 1) /
        600.0;
    const double at_100 = lp_dual_eval(gen.instance, 100.0 * u, eps).value;
    const double at_1000 = lp_dual_eval(gen.instance, 1000.0 * u, eps).value;
    CHECK(at_1000 < at_100);
  }
}

TEST_CASE("the two printed dual forms agree") {
  SplitMix64 rng(26);
  const GeneratedLp gen = generate_lp(11, 6, 2, false);
  for (int trial = 0; trial < 100; ++trial) {
    const VectorXd lambda = random_normal_vector(rng, 2);
    const double eps = rng.next_uniform(0.2, 2.0);
    const VectorXd x = lp_primal_point(gen.instance, lambda, eps);
    const VectorXd s =
        (gen.instance.con_matrix().transpose() * lambda - gen.instance.cost()) / eps;
    const double direct = eps * x.sum();
    const double printed = eps / std::numbers::e * s.array().exp().sum();
    CHECK(close_rel(direct, printed, 1e-12));
  }
}

TEST_CASE("the gradient is the feasibility residual") {
  SplitMix64 rng(27);
  const GeneratedLp gen = generate_lp(28, 7, 3, false);
  for (int trial = 0; trial < 50; ++trial) {
    const VectorXd lambda = random_normal_vector(rng, 3);
    const LpDualEval e = lp_dual_eval(gen.instance, lambda, 0.4);
    const VectorXd residual =
        gen.instance.rhs() -
        gen.instance.con_matrix() * lp_primal_point(gen.instance, lambda, 0.4);
    CHECK((e.gradient - residual).lpNorm<Eigen::Infinity>() <=
          1e-12 * (1 + residual.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("clamped exponents produce the sentinel but keep a gradient") {
  const LpInstance inst = simplex2(VectorXd::Zero(2));
  const LpDualEval e = lp_dual_eval(inst, scalar(1e5), 1.0);
  CHECK(e.clamped);
  CHECK(e.value == -kInf);
  CHECK(e.gradient.size() == 1);
  CHECK(std::isfinite(e.gradient[0]));
}

TEST_CASE("log-barrier dual pinned values and domain handling") {
  const LpInstance inst = simplex2(VectorXd::Ones(2));

  const LogBarrierEval at_zero = log_barrier_dual_eval(inst, scalar(0.0), 1.0);
  REQUIRE(at_zero.in_domain);
  CHECK(at_zero.value == doctest::Approx(2.0));
  CHECK(at_zero.point[0] == doctest::Approx(1.0));
  CHECK(at_zero.point[1] == doctest::Approx(1.0));

  CHECK_FALSE(log_barrier_dual_eval(inst, scalar(2.0), 1.0).in_domain);

  const LogBarrierEval at_half = log_barrier_dual_eval(inst, scalar(0.5), 1.0);
  REQUIRE(at_half.in_domain);
  CHECK(at_half.value == doctest::Approx(2.5 - 2.0 * std::log(2.0)));
  CHECK(at_half.point[0] == doctest::Approx(2.0));
}

TEST_CASE("log-barrier dual agrees with direct minimization of the Lagrangian") {
  // The inner problem separates per coordinate; golden-section search on
  // each term is an independent route to the same value.
  const LpInstance inst = simplex2(VectorXd::Ones(2));
  const double mu = 1.0;
  const VectorXd lambda = scalar(0.5);
  const VectorXd slack = inst.cost() - inst.con_matrix().transpose() * lambda;

  auto minimize_1d = [](const std::function<double(double)>& f, double lo, double hi) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      const double x1 = b - phi * (b - a);
      const double x2 = a + phi * (b - a);
      if (f(x1) < f(x2))
        b = x2;
      else
        a = x1;
    }
    return f(0.5 * (a + b));
  };

  double numeric = inst.rhs().dot(lambda);
  for (int i = 0; i < 2; ++i) {
    const double r = slack[i];
    numeric += minimize_1d([&](double x) { return r * x - mu * std::log(x); }, 1e-8, 50.0);
  }
  const LogBarrierEval closed = log_barrier_dual_eval(inst, lambda, mu);
  CHECK(close(numeric, closed.value, 1e-7 * (1 + std::abs(closed.value))));
}
