#include "lorank/driver.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace lorank {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool starts_with(const std::string& s, std::string_view prefix) {
  return s.size() >= prefix.size() && std::string_view(s).substr(0, prefix.size()) == prefix;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         std::string_view(s).substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

ProblemClass detect_class(const SdpProblemd& problem) {
  if (problem.m() != problem.n()) return ProblemClass::generic;
  std::vector<char> seen(static_cast<std::size_t>(problem.n()), 0);
  for (Index i = 0; i < problem.m(); ++i) {
    const auto& e = problem.constraint(i).entries();
    if (e.size() != 1 || e[0].row != e[0].col || e[0].value != 1.0 || problem.rhs()[i] != 1.0)
      return ProblemClass::generic;
    auto& mark = seen[static_cast<std::size_t>(e[0].row)];
    if (mark) return ProblemClass::generic;
    mark = 1;
  }
  return ProblemClass::maxcut;
}

double default_heuristic_factor(ProblemClass cls, const SdpProblemd& problem) {
  switch (cls) {
    case ProblemClass::maxcut: return 10.0;
    case ProblemClass::matrix_completion: return problem.n() < 10000 ? 5.0 : 2.5;
    default: break;
  }
  // Min-bisection, graph partition and QAP instances are recognized by name.
  const std::string& name = problem.name();
  if (starts_with(name, "gpp") || starts_with(name, "qap") || ends_with(name, "_mb")) return 10.0;
  return 1.0;
}

SplitState<double> switch_to_split(const SdpProblemd& problem, const BmState<double>& bm,
                                   double heuristic_factor, GammaRule rule, double gamma_param) {
  const double rho = heuristic_factor * bm.rho;
  double gamma = gamma_param;
  if (rule == GammaRule::equal_rho) gamma = rho;
  if (rule == GammaRule::slack_norm)
    gamma = gamma_param * std::max(1.0, slack_spectral_norm(problem, Vectord(-bm.lambda)));
  return make_split_state(problem, bm.R, bm.R, Vectord(0.5 * bm.lambda), rho, gamma);
}

SolveReport solve(const SdpProblemd& problem, const SolverConfig& config) {
  const auto t0 = Clock::now();
  const auto log = [&](const std::string& msg) {
    if (config.log) config.log(msg);
  };
  const auto time_up = [&] { return seconds_since(t0) >= config.time_limit_s; };

  SolveReport rep;
  rep.name = problem.name();
  rep.n = problem.n();
  rep.m = problem.m();
  rep.problem_class = config.class_override.value_or(
      problem.tag() != ProblemClass::generic ? problem.tag() : detect_class(problem));
  rep.switch_tol = config.switch_tol.value_or(rep.problem_class == ProblemClass::maxcut ? 1e-2 : 1e-3);
  rep.heuristic_factor =
      config.heuristic_factor.value_or(default_heuristic_factor(rep.problem_class, problem));
  if (!(config.epsilon < rep.switch_tol))
    log("warning: epsilon >= switching tolerance; Phase II starts from a point already meeting it");

  const RankPolicy policy = config.rank.for_problem(problem.n(), problem.m());
  AlmSettings<double> alm = config.alm;
  alm.switch_tol = rep.switch_tol;
  alm.rho_max = config.rho_max;

  std::mt19937_64 rng(config.seed);
  rep.initial_rank = initial_rank(problem.n(), problem.m(), policy);
  rep.rank_history.push_back(rep.initial_rank);
  BmState<double> bm = random_bm_state(problem, rep.initial_rank, config.rho_init, rng);

  // Phase I: warm start with rank escalation.
  bool stopped = false;
  for (;;) {
    const auto out = alm_outer_loop(problem, bm, alm, policy, true, time_up);
    rep.phase1_outer += out.outer_iters;
    rep.phase1_inner_total += out.inner_total;
    if (out.status == AlmStatus::escalation_requested) {
      bm.R = escalate(bm.R, policy, rng, config.log);
      rep.rank_history.push_back(bm.R.cols());
      log("phase I: rank -> " + std::to_string(bm.R.cols()) + " after " +
          std::to_string(out.last_inner) + " inner iterations");
      continue;
    }
    rep.phase1_converged = out.status == AlmStatus::converged;
    stopped = out.status == AlmStatus::stopped;
    {
      std::ostringstream os;
      os << "phase I: " << (rep.phase1_converged ? "switch" : "no switch") << " after "
         << rep.phase1_outer << " outer / " << rep.phase1_inner_total
         << " inner iterations, infeasibility " << out.infeas << ", rho " << bm.rho;
      log(os.str());
    }
    break;
  }
  rep.time_phase1 = seconds_since(t0);
  rep.final_rank = bm.R.cols();

  // Switch and Phase II.
  const auto t1 = Clock::now();
  SplitState<double> st =
      switch_to_split(problem, bm, rep.heuristic_factor, config.gamma_rule,
                      config.gamma_rule == GammaRule::slack_norm ? config.gamma_scale : config.gamma);
  rep.rho_switch = st.rho;
  rep.gamma = st.gamma;
  CgWorkspace<double> ws;

  auto check = check_termination(problem, st, st.V, config.epsilon, config.stop_rule);
  if (stopped) {
    rep.status = SolveStatus::time_cap;
  } else if (check) {
    rep.status = SolveStatus::converged;
  } else {
    rep.status = SolveStatus::iter_cap;
    for (long k = 1; k <= config.admm_cap; ++k) {
      const Factord prev_V = st.V;
      SweepDiagnostics<double> d;
      try {
        d = admm_sweep(problem, st, config.admm, ws);
      } catch (const NumericalFailure& e) {
        rep.status = SolveStatus::numerical_failure;
        rep.message = std::string("phase II, iteration ") + std::to_string(k) + ": " + e.what();
        log(rep.message);
        break;
      }
      rep.phase2_iters = k;
      rep.cg_total += d.cg_iters_u + d.cg_iters_v;
      if (!std::isfinite(d.lagrangian_after_dual)) {
        rep.status = SolveStatus::numerical_failure;
        rep.message = "phase II, iteration " + std::to_string(k) + ": iterates diverged";
        log(rep.message);
        break;
      }
      check = check_termination(problem, st, prev_V, config.epsilon, config.stop_rule);
      if (config.log && k % 100 == 0) {
        std::ostringstream os;
        os << "phase II " << k << ": infeasibility " << check.primal_infeas << ", step term "
           << check.step_term << ", rho " << st.rho << ", objective "
           << problem.reported_objective(objective_value(problem, st.U, st.V));
        log(os.str());
      }
      if (check) {
        rep.status = SolveStatus::converged;
        break;
      }
      if (time_up()) {
        rep.status = SolveStatus::time_cap;
        break;
      }
      st.rho = penalty_schedule(st.rho, k, config.rho_max, config.rho_growth, config.rho_growth_period);
    }
  }
  rep.split_p_infeas = check.primal_infeas;
  rep.split_step_term = check.step_term;
  rep.cg_avg = rep.phase2_iters > 0 ? static_cast<double>(rep.cg_total) / rep.phase2_iters : 0.0;
  rep.rho_final = st.rho;
  {
    std::ostringstream os;
    os << "phase II: " << to_string(rep.status) << " after " << rep.phase2_iters
       << " iterations, " << rep.cg_total << " CG steps, infeasibility " << check.primal_infeas
       << ", step term " << check.step_term;
    log(os.str());
  }
  rep.time_phase2 = seconds_since(t1);

  // Recombination and metrics.
  auto [Uhat, lambda_hat] = recombine(st.U, st.V, st.lambda);
  rep.factor = std::move(Uhat);
  rep.multipliers = std::move(lambda_hat);
  rep.dual = -0.5 * rep.multipliers;
  rep.U = std::move(st.U);
  rep.V = std::move(st.V);
  rep.lambda = std::move(st.lambda);

  rep.stored_objective = objective_value(problem, rep.factor, rep.factor);
  rep.objective = problem.reported_objective(rep.stored_objective);
  rep.p_infeas = primal_infeasibility(problem, rep.factor, rep.factor, RhsNorm::inf_norm);
  rep.p_infeas_one = primal_infeasibility(problem, rep.factor, rep.factor, RhsNorm::one_norm);
  rep.p_infeas_two = primal_infeasibility(problem, rep.factor, rep.factor, RhsNorm::two_norm);
  rep.pd_gap = pd_gap(problem, rep.factor, rep.factor, rep.dual);
  if (config.dual_metrics) {
    const auto d = dual_infeasibility(problem, rep.dual, config.lanczos);
    rep.d_infeas = d.value;
    rep.dual_estimate_converged = d.converged;
  }
  rep.time_total = seconds_since(t0);
  return rep;
}

bool same_outcome(const SolveReport& a, const SolveReport& b) {
  auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && (x.array() == y.array()).all();
  };
  return a.name == b.name && a.n == b.n && a.m == b.m && a.problem_class == b.problem_class &&
         a.status == b.status && a.objective == b.objective &&
         a.stored_objective == b.stored_objective && a.p_infeas == b.p_infeas &&
         a.p_infeas_one == b.p_infeas_one && a.p_infeas_two == b.p_infeas_two &&
         a.d_infeas == b.d_infeas && a.pd_gap == b.pd_gap &&
         a.split_p_infeas == b.split_p_infeas && a.split_step_term == b.split_step_term &&
         a.phase1_outer == b.phase1_outer && a.phase1_inner_total == b.phase1_inner_total &&
         a.phase2_iters == b.phase2_iters && a.cg_total == b.cg_total &&
         a.rank_history == b.rank_history && a.rho_final == b.rho_final && a.gamma == b.gamma &&
         same(a.factor, b.factor) && same(a.multipliers, b.multipliers) && same(a.U, b.U) &&
         same(a.V, b.V) && same(a.lambda, b.lambda);
}

}  // namespace lorank
