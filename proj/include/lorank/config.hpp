#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lorank/admm.hpp"
#include "lorank/alm.hpp"
#include "lorank/diagnostics.hpp"
#include "lorank/problem.hpp"
#include "lorank/rank_strategy.hpp"

namespace lorank {

/// How the proximal weight gamma is chosen at the phase switch. It stays fixed afterwards.
/// slack_norm: gamma_scale * max(1, ||C + A^*(lambda_bm)||_2), the spectral norm
/// of the warm-start dual slack.
enum class GammaRule { equal_rho, fixed, slack_norm };

struct SolverConfig {
  double epsilon = 1e-5;
  std::optional<double> switch_tol;        // default: 1e-2 for maxcut, 1e-3 otherwise
  double rho_init = 1.0;
  double rho_max = 5000.0;
  double rho_growth = 1.2;
  long rho_growth_period = 5;
  std::optional<double> heuristic_factor;  // default: see default_heuristic_factor()
  GammaRule gamma_rule = GammaRule::slack_norm;
  double gamma = 1.0;                      // used when gamma_rule == fixed
  double gamma_scale = 2.0;                // used when gamma_rule == slack_norm
  StopRule stop_rule = StopRule::primal_and_step;
  long admm_cap = 5000;
  RankPolicy rank;
  AdmmSettings<double> admm;
  AlmSettings<double> alm;                 // alm.switch_tol is overwritten from switch_tol
  LanczosSettings<double> lanczos;
  bool dual_metrics = true;
  std::optional<ProblemClass> class_override;
  std::uint64_t seed = 42;
  double time_limit_s = 10000.0;
  std::function<void(std::string_view)> log;
};

enum class SolveStatus { converged, iter_cap, time_cap, numerical_failure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::iter_cap: return "iter_cap";
    case SolveStatus::time_cap: return "time_cap";
    default: return "numerical_failure";
  }
}

struct SolveReport {
  std::string name;
  Index n = 0;
  Index m = 0;
  ProblemClass problem_class = ProblemClass::generic;
  SolveStatus status = SolveStatus::iter_cap;
  std::string message;

  // Objective <C, X> at X = Uhat Uhat^T, sign-corrected for maximization problems.
  double objective = 0;
  double stored_objective = 0;

  // Metrics at the recombined point (Uhat, y) with y = -lambda_hat / 2.
  double p_infeas = 0;      // ||A(X) - b||_2 / (1 + ||b||_inf)
  double p_infeas_one = 0;  // ... / (1 + ||b||_1)
  double p_infeas_two = 0;  // ... / (1 + ||b||_2)
  double d_infeas = 0;
  double pd_gap = 0;
  bool dual_estimate_converged = true;

  // Phase II stopping quantities at the split point (U, V).
  double split_p_infeas = 0;
  double split_step_term = 0;

  bool phase1_converged = false;
  long phase1_outer = 0;
  long phase1_inner_total = 0;
  long phase2_iters = 0;
  long cg_total = 0;
  double cg_avg = 0;  // per ADMM iteration (two subproblems)

  Index initial_rank = 0;
  Index final_rank = 0;
  std::vector<Index> rank_history;

  double switch_tol = 0;
  double heuristic_factor = 1;
  double rho_switch = 0;  // rho entering Phase II
  double rho_final = 0;
  double gamma = 0;

  double time_phase1 = 0;
  double time_phase2 = 0;
  double time_total = 0;

  Factord factor;       // Uhat = (U + V) / 2
  Vectord multipliers;  // lambda_hat = 2 lambda
  Vectord dual;         // y = -lambda_hat / 2, slack C - A^*(y)
  Factord U, V;         // split solution
  Vectord lambda;       // Phase II multiplier
};

}  // namespace lorank
