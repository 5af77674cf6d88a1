#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "entreg/entropy.hpp"
#include "entreg/generate.hpp"
#include "entreg/io.hpp"
#include "entreg/optimizer.hpp"
#include "entreg/oracle.hpp"
#include "entreg/ot.hpp"

namespace {

using namespace entreg;

struct CommonOpts {
  std::string input;
  double epsilon = 0.01;
  double grad_tol = 0.0;  // 0 = use the per-problem default
  int max_iter = 500;
  std::string schedule = "1,0.5,8";
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "keyvalue";
};

void add_shared_flags(CLI::App* cmd, CommonOpts& o, bool with_input = true) {
  if (with_input)
    cmd->add_option("file", o.input, "instance file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--epsilon", o.epsilon, "regularization strength")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--grad-tol", o.grad_tol, "gradient sup-norm termination threshold")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", o.max_iter, "iteration limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--schedule", o.schedule, "continuation schedule start,ratio,steps")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "generator seed")->capture_default_str();
  cmd->add_option("--out", o.out, "report output path");
  cmd->add_option("--format", o.format, "report format")
      ->check(CLI::IsMember({"text", "keyvalue"}))
      ->capture_default_str();
}

SolverConfig make_config(const CommonOpts& o, bool sdp) {
  SolverConfig cfg = sdp ? SolverConfig::sdp_defaults() : SolverConfig();
  cfg.epsilon = o.epsilon;
  cfg.max_iter = o.max_iter;
  if (o.grad_tol > 0) cfg.grad_tol = o.grad_tol;
  return cfg;
}

Schedule parse_schedule(const std::string& text) {
  Schedule s;
  if (std::sscanf(text.c_str(), "%lf,%lf,%d", &s.eps_start, &s.ratio, &s.num_steps) != 3)
    throw std::invalid_argument("--schedule expects start,ratio,steps");
  s.validate();
  return s;
}

void emit(const CommonOpts& o, const ReportWriter& w, const std::string& summary) {
  std::cout << summary << "\n";
  if (!o.out.empty()) write_text_file(o.out, w.str(o.format));
}

template <typename T>
const T& require_kind(const ParsedInstance& inst, const std::string& expected) {
  const T* p = std::get_if<T>(&inst);
  if (!p) throw std::runtime_error("input file does not contain " + expected);
  return *p;
}

int run_solve_lp(const CommonOpts& o) {
  const ParsedInstance parsed = parse_instance_file(o.input);
  const LpInstance& inst = require_kind<LpInstance>(parsed, "an LP instance");
  const SolveReport rep = solve_lp(inst, make_config(o, false));
  ReportWriter w;
  append_solve_report(w, rep, "lp");
  emit(o, w,
       "solve-lp: " + std::string(rep.converged ? "converged" : "did not converge") + " in " +
           std::to_string(rep.iterations) + " iterations, dual value " +
           format_number(rep.dual_value) + ", grad " + format_number(rep.grad_inf_norm));
  return rep.converged ? 0 : 2;
}

int run_solve_sdp(const CommonOpts& o) {
  const ParsedInstance parsed = parse_instance_file(o.input);
  const SdpInstance& inst = require_kind<SdpInstance>(parsed, "an SDP instance");
  const SolveReport rep = solve_sdp(inst, make_config(o, true));
  ReportWriter w;
  append_solve_report(w, rep, "sdp");
  emit(o, w,
       "solve-sdp: " + std::string(rep.converged ? "converged" : "did not converge") + " in " +
           std::to_string(rep.iterations) + " iterations, dual value " +
           format_number(rep.dual_value) + ", grad " + format_number(rep.grad_inf_norm));
  return rep.converged ? 0 : 2;
}

int run_solve_ot(const CommonOpts& o) {
  const ParsedInstance parsed = parse_instance_file(o.input);
  const OtInstance& ot = require_kind<OtInstance>(parsed, "an OT instance");
  const OtLpReduction red = ot_to_lp(ot);
  const SolveReport rep = solve_lp(red.lp, make_config(o, false));
  ReportWriter w;
  append_solve_report(w, rep, "ot");
  if (rep.dual_opt.size() > 0)
    w.matrix_block("plan", red.plan_from_vector(rep.primal_vector()));
  emit(o, w,
       "solve-ot: " + std::string(rep.converged ? "converged" : "did not converge") +
           ", regularized cost " + format_number(rep.primal_value));
  return rep.converged ? 0 : 2;
}

int run_sinkhorn(const CommonOpts& o, double tol) {
  const ParsedInstance parsed = parse_instance_file(o.input);
  const OtInstance& ot = require_kind<OtInstance>(parsed, "an OT instance");
  const SinkhornResult res = sinkhorn(ot, o.epsilon, tol, o.max_iter);
  ReportWriter w;
  w.scalar("problem", std::string("sinkhorn"));
  w.scalar("epsilon", o.epsilon);
  w.scalar("converged", res.converged);
  w.scalar("iterations", res.iterations);
  w.scalar("value", res.value);
  w.scalar("row_residual", res.row_residual);
  w.scalar("col_residual", res.col_residual);
  w.matrix_block("plan", res.plan);
  emit(o, w,
       "sinkhorn: " + std::string(res.converged ? "converged" : "did not converge") + " in " +
           std::to_string(res.iterations) + " iterations, value " + format_number(res.value));
  return res.converged ? 0 : 2;
}

int run_compare_ot(const CommonOpts& o, double tol) {
  const ParsedInstance parsed = parse_instance_file(o.input);
  const OtInstance& ot = require_kind<OtInstance>(parsed, "an OT instance");
  const OtComparison cmp = compare_ot(ot, o.epsilon, tol, o.max_iter, make_config(o, false));
  ReportWriter w;
  w.scalar("problem", std::string("compare-ot"));
  w.scalar("epsilon", o.epsilon);
  w.scalar("sinkhorn_value", cmp.sinkhorn.value);
  w.scalar("sinkhorn_iterations", cmp.sinkhorn.iterations);
  w.scalar("sinkhorn_seconds", cmp.sinkhorn_seconds);
  w.scalar("dual_value", cmp.dual_report.dual_value);
  w.scalar("dual_primal_value", cmp.dual_report.primal_value);
  w.scalar("dual_iterations", cmp.dual_report.iterations);
  w.scalar("dual_seconds", cmp.dual_seconds);
  w.scalar("value_gap", cmp.value_gap);
  w.scalar("plan_l1_dist", cmp.plan_l1_dist);
  w.matrix_block("sinkhorn_plan", cmp.sinkhorn.plan);
  w.matrix_block("dual_plan", cmp.dual_plan);
  emit(o, w,
       "compare-ot: value gap " + format_number(cmp.value_gap) + ", plan L1 distance " +
           format_number(cmp.plan_l1_dist));
  const bool ok = cmp.sinkhorn.converged && cmp.dual_report.converged;
  return ok ? 0 : 2;
}

int run_continuation(const CommonOpts& o) {
  const ParsedInstance parsed = parse_instance_file(o.input);
  const Schedule sched = parse_schedule(o.schedule);
  std::vector<SolveReport> reps;
  std::string kind;
  if (const LpInstance* lp = std::get_if<LpInstance>(&parsed)) {
    reps = solve_continuation(*lp, sched, make_config(o, false));
    kind = "lp";
  } else if (const SdpInstance* sdp = std::get_if<SdpInstance>(&parsed)) {
    reps = solve_continuation(*sdp, sched, make_config(o, true));
    kind = "sdp";
  } else {
    const OtInstance& ot = std::get<OtInstance>(parsed);
    reps = solve_continuation(ot_to_lp(ot).lp, sched, make_config(o, false));
    kind = "ot";
  }
  ReportWriter w;
  bool all_ok = true;
  for (size_t k = 0; k < reps.size(); ++k) {
    w.scalar("step", static_cast<int>(k));
    append_solve_report(w, reps[k], kind);
    w.blank();
    all_ok = all_ok && reps[k].converged;
  }
  emit(o, w,
       "continuation: " + std::to_string(reps.size()) + " steps, final dual value " +
           format_number(reps.back().dual_value));
  return all_ok ? 0 : 2;
}

int run_generate(const CommonOpts& o, const std::string& kind, int d, int m, int n, int n1,
                 int n2, bool compactness_row, bool trace_row) {
  std::string body;
  if (kind == "lp") {
    body = serialize(generate_lp(o.seed, d, m, compactness_row).instance);
  } else if (kind == "sdp") {
    body = serialize(generate_sdp(o.seed, n, m, trace_row).instance);
  } else {
    body = serialize(generate_ot(o.seed, n1, n2));
  }
  if (o.out.empty())
    std::cout << body;
  else
    write_text_file(o.out, body);
  if (!o.out.empty()) std::cout << "generate: wrote " << kind << " instance to " << o.out << "\n";
  return 0;
}

int run_oracle(const CommonOpts& o, double eps_opt) {
  const ParsedInstance parsed = parse_instance_file(o.input);
  const LpInstance* lp = std::get_if<LpInstance>(&parsed);
  std::optional<LpInstance> reduced;
  if (!lp) {
    const OtInstance& ot = require_kind<OtInstance>(parsed, "an LP or OT instance");
    reduced = ot_to_lp(ot).lp;
    lp = &*reduced;
  }
  const VertexSolveResult vs = lp_vertex_solve(*lp);
  ReportWriter w;
  w.scalar("problem", std::string("oracle"));
  w.scalar("tau", vs.objective);
  w.scalar("num_optimal_vertices", static_cast<int>(vs.vertices.size()));
  for (size_t i = 0; i < vs.vertices.size(); ++i)
    w.vector_block("vertex_" + std::to_string(i), vs.vertices[i]);
  std::string summary = "oracle: tau " + format_number(vs.objective) + ", " +
                        std::to_string(vs.vertices.size()) + " optimal vertex(es)";
  if (eps_opt > 0) {
    const BruteforceResult bf = primal_bruteforce(*lp, eps_opt);
    w.scalar("epsilon", eps_opt);
    w.scalar("tau_eps", bf.value);
    w.scalar("bruteforce_converged", bf.converged);
    w.vector_block("x_eps", bf.x);
    summary += ", tau_eps " + format_number(bf.value);
  }
  emit(o, w, summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entreg: entropy-regularized LP/SDP solving via explicit concave duals"};
  app.require_subcommand(1);

  CommonOpts o;
  double sinkhorn_tol = 1e-9;
  double oracle_eps = 0.0;
  std::string gen_kind = "lp";
  int gen_d = 4, gen_m = 2, gen_n = 3, gen_n1 = 2, gen_n2 = 2;
  bool compactness_row = false, trace_row = false;

  int rc = 0;
  auto wrap = [&rc](auto fn) {
    return [&rc, fn]() {
      try {
        rc = fn();
      } catch (const ParseError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        rc = 1;
      } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        rc = 1;
      }
    };
  };

  auto* c_lp = app.add_subcommand("solve-lp", "maximize the entropic LP dual");
  add_shared_flags(c_lp, o);
  c_lp->callback(wrap([&] { return run_solve_lp(o); }));

  auto* c_sdp = app.add_subcommand("solve-sdp", "maximize the entropic SDP dual");
  add_shared_flags(c_sdp, o);
  c_sdp->callback(wrap([&] { return run_solve_sdp(o); }));

  auto* c_ot = app.add_subcommand("solve-ot", "solve a transport instance through the LP dual");
  add_shared_flags(c_ot, o);
  c_ot->callback(wrap([&] { return run_solve_ot(o); }));

  auto* c_sk = app.add_subcommand("sinkhorn", "matrix-scaling baseline for transport instances");
  add_shared_flags(c_sk, o);
  c_sk->add_option("--tol", sinkhorn_tol, "L1 marginal residual tolerance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_sk->callback(wrap([&] { return run_sinkhorn(o, sinkhorn_tol); }));

  auto* c_cmp = app.add_subcommand("compare-ot", "run sinkhorn and the dual route side by side");
  add_shared_flags(c_cmp, o);
  c_cmp->add_option("--tol", sinkhorn_tol, "sinkhorn L1 residual tolerance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_cmp->callback(wrap([&] { return run_compare_ot(o, sinkhorn_tol); }));

  auto* c_cont = app.add_subcommand("continuation", "solve along a decreasing epsilon schedule");
  add_shared_flags(c_cont, o);
  c_cont->callback(wrap([&] { return run_continuation(o); }));

  auto* c_gen = app.add_subcommand("generate", "write a random feasible instance");
  add_shared_flags(c_gen, o, /*with_input=*/false);
  c_gen->add_option("--kind", gen_kind, "instance kind")
      ->check(CLI::IsMember({"lp", "sdp", "ot"}))
      ->capture_default_str();
  c_gen->add_option("--d", gen_d, "LP variables")->check(CLI::PositiveNumber);
  c_gen->add_option("--m", gen_m, "constraints")->check(CLI::PositiveNumber);
  c_gen->add_option("--n", gen_n, "SDP dimension")->check(CLI::PositiveNumber);
  c_gen->add_option("--n1", gen_n1, "OT rows")->check(CLI::PositiveNumber);
  c_gen->add_option("--n2", gen_n2, "OT columns")->check(CLI::PositiveNumber);
  c_gen->add_flag("--compactness-row", compactness_row, "make the first LP row all ones");
  c_gen->add_flag("--trace-row", trace_row, "make the first SDP constraint the identity");
  c_gen->callback(wrap([&] {
    return run_generate(o, gen_kind, gen_d, gen_m, gen_n, gen_n1, gen_n2, compactness_row,
                        trace_row);
  }));

  auto* c_or = app.add_subcommand("oracle", "vertex enumeration and the primal reference solve");
  add_shared_flags(c_or, o);
  c_or->remove_option(c_or->get_option_no_throw("--epsilon"));
  c_or->add_option("--epsilon", oracle_eps,
                   "also run the regularized primal reference at this epsilon")
      ->check(CLI::PositiveNumber);
  c_or->callback(wrap([&] { return run_oracle(o, oracle_eps); }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return rc;
}
