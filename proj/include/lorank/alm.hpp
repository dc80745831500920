#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "lorank/errors.hpp"
#include "lorank/problem.hpp"
#include "lorank/rank_strategy.hpp"

namespace lorank {

/// Warm-start iterate for the factored problem min <C, RR^T> s.t. A(RR^T) = b.
template <typename Scalar>
struct BmState {
  Factor<Scalar> R;
  Vector<Scalar> lambda;
  Scalar rho = 1;
  long inner_iter_count = 0;  // iterations used by the latest subproblem
  long outer_iter = 0;
  // Schedule state carried across calls so a rank escalation resumes cleanly.
  Scalar inner_tol = Scalar(1e-3);
  Scalar prev_infeas = std::numeric_limits<Scalar>::infinity();
};

/// R with i.i.d. N(0, 1/r) entries, lambda = 0.
template <typename Scalar, typename Rng>
BmState<Scalar> random_bm_state(const SdpProblem<Scalar>& problem, Index r, Scalar rho, Rng& rng) {
  if (r < 1 || r > problem.n()) throw InvalidInput("random_bm_state: rank outside [1, n]");
  if (!(rho > 0)) throw InvalidInput("random_bm_state: rho must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(r));
  BmState<Scalar> s;
  s.R.resize(problem.n(), r);
  for (Index i = 0; i < s.R.rows(); ++i)
    for (Index j = 0; j < r; ++j) s.R(i, j) = scale * static_cast<Scalar>(gauss(rng));
  s.lambda = Vector<Scalar>::Zero(problem.m());
  s.rho = rho;
  return s;
}

template <typename Scalar>
struct BmEvaluation {
  Scalar value = 0;
  Vector<Scalar> residual;
  Factor<Scalar> gradient;
};

/// Value (and optionally gradient) of
/// L(R) = <C, RR^T> + lambda'r + rho/2 ||r||^2, r = A(RR^T) - b,
/// grad L = 2 (C + A^*(lambda + rho r)) R.
template <typename Scalar>
BmEvaluation<Scalar> bm_evaluate(const SdpProblem<Scalar>& problem, const Factor<Scalar>& R,
                                 const Vector<Scalar>& lambda, Scalar rho, bool with_gradient = true) {
  if (lambda.size() != problem.m()) throw DimensionMismatch("bm_evaluate: multiplier length");
  BmEvaluation<Scalar> e;
  e.residual = constraint_residual(problem, R, R);
  e.value = objective_value(problem, R, R) + lambda.dot(e.residual) + rho / 2 * e.residual.squaredNorm();
  if (with_gradient) {
    const Vector<Scalar> y = lambda + rho * e.residual;
    e.gradient = Scalar(2) * apply_combination(problem, Scalar(1), y, R);
  }
  return e;
}

template <typename Scalar>
Scalar bm_aug_lagrangian(const SdpProblem<Scalar>& problem, const BmState<Scalar>& s) {
  return bm_evaluate(problem, s.R, s.lambda, s.rho, false).value;
}

template <typename Scalar>
Factor<Scalar> bm_gradient(const SdpProblem<Scalar>& problem, const BmState<Scalar>& s) {
  return bm_evaluate(problem, s.R, s.lambda, s.rho, true).gradient;
}

template <typename Scalar>
struct LbfgsSettings {
  int memory = 10;
  Scalar armijo_c1 = Scalar(1e-4);
  Scalar shrink = Scalar(0.5);
  Scalar min_step = Scalar(1e-20);
  Scalar curvature_eps = Scalar(1e-12);
};

template <typename Scalar>
struct LbfgsResult {
  Factor<Scalar> R;
  long iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
  Scalar value = 0;
  Scalar grad_norm = 0;
  Vector<Scalar> residual;  // at the returned R
};

/**
 * L-BFGS on the warm-start augmented Lagrangian with lambda and rho held
 * fixed. Stops when ||grad||_F / (1 + |L|) <= tol or after max_inner steps.
 * Backtracking Armijo search from a unit step; curvature pairs with
 * y's <= eps ||s|| ||y|| are dropped. With an empty memory the direction is
 * the gradient scaled to length at most one.
 */
template <typename Scalar>
LbfgsResult<Scalar> lbfgs_minimize(const SdpProblem<Scalar>& problem, const BmState<Scalar>& state,
                                   Scalar tol, long max_inner, const LbfgsSettings<Scalar>& settings = {}) {
  if (!(tol > 0)) throw InvalidInput("lbfgs_minimize: tolerance must be positive");
  struct Pair {
    Factor<Scalar> s, y;
    Scalar inv_sy;
  };
  std::deque<Pair> memory;
  std::vector<Scalar> alpha;

  LbfgsResult<Scalar> out;
  out.R = state.R;
  auto cur = bm_evaluate(problem, out.R, state.lambda, state.rho);
  Factor<Scalar> dir(out.R.rows(), out.R.cols());

  for (;;) {
    const Scalar gnorm = cur.gradient.norm();
    if (gnorm / (Scalar(1) + std::abs(cur.value)) <= tol) {
      out.converged = true;
      break;
    }
    if (out.iterations >= max_inner) break;

    // Two-loop recursion.
    dir = cur.gradient;
    alpha.assign(memory.size(), Scalar(0));
    for (std::size_t k = memory.size(); k-- > 0;) {
      alpha[k] = memory[k].inv_sy * memory[k].s.cwiseProduct(dir).sum();
      dir -= alpha[k] * memory[k].y;
    }
    Scalar h0;
    if (memory.empty()) {
      h0 = std::min(Scalar(1), Scalar(1) / gnorm);
    } else {
      const auto& last = memory.back();
      h0 = Scalar(1) / (last.inv_sy * last.y.squaredNorm());
    }
    dir *= h0;
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const Scalar beta = memory[k].inv_sy * memory[k].y.cwiseProduct(dir).sum();
      dir += (alpha[k] - beta) * memory[k].s;
    }
    dir = -dir;
    Scalar slope = cur.gradient.cwiseProduct(dir).sum();
    if (!(slope < 0)) {
      memory.clear();
      dir = -std::min(Scalar(1), Scalar(1) / gnorm) * cur.gradient;
      slope = cur.gradient.cwiseProduct(dir).sum();
    }

    Scalar step = 1;
    Factor<Scalar> trial;
    BmEvaluation<Scalar> next;
    bool accepted = false;
    while (step >= settings.min_step) {
      trial = out.R + step * dir;
      next = bm_evaluate(problem, trial, state.lambda, state.rho, false);
      if (std::isfinite(next.value) && next.value <= cur.value + settings.armijo_c1 * step * slope &&
          next.value < cur.value) {
        accepted = true;
        break;
      }
      step *= settings.shrink;
    }
    if (!accepted) {
      out.line_search_failed = true;
      break;
    }
    next = bm_evaluate(problem, trial, state.lambda, state.rho, true);

    Pair p{trial - out.R, next.gradient - cur.gradient, Scalar(0)};
    const Scalar sy = p.s.cwiseProduct(p.y).sum();
    if (sy > settings.curvature_eps * p.s.norm() * p.y.norm()) {
      p.inv_sy = Scalar(1) / sy;
      memory.push_back(std::move(p));
      if (static_cast<int>(memory.size()) > settings.memory) memory.pop_front();
    }
    out.R = std::move(trial);
    cur = std::move(next);
    ++out.iterations;
  }
  out.value = cur.value;
  out.grad_norm = cur.gradient.norm();
  out.residual = std::move(cur.residual);
  return out;
}

template <typename Scalar>
struct AlmSettings {
  Scalar switch_tol = Scalar(1e-3);
  Scalar rho_max = Scalar(5000);
  Scalar rho_increase = Scalar(2);
  Scalar required_reduction = Scalar(0.9);  // infeasibility must fall below this fraction
  Scalar inner_tol_init = Scalar(1e-3);
  Scalar inner_tol_decay = Scalar(0.9);
  Scalar inner_tol_min = Scalar(1e-4);
  long max_inner = 200;
  long max_outer = 500;
  LbfgsSettings<Scalar> lbfgs;
};

enum class AlmStatus { converged, escalation_requested, outer_cap, stopped };

template <typename Scalar>
struct AlmOutcome {
  AlmStatus status = AlmStatus::outer_cap;
  long outer_iters = 0;  // subproblems solved in this call
  long inner_total = 0;
  long last_inner = 0;
  Scalar infeas = 0;  // ||A(RR^T) - b||_2 / (1 + ||b||_inf) at return
};

/// Dual ascent on the warm-start multipliers: lambda += rho * r.
template <typename Scalar>
void bm_dual_update(BmState<Scalar>& s, const Vector<Scalar>& residual) {
  s.lambda = s.lambda + s.rho * residual;
}

/**
 * Augmented Lagrangian outer loop on the factored problem. Each pass solves
 * the subproblem with L-BFGS, updates lambda, then doubles rho (capped) when
 * the infeasibility did not drop below 0.9x its previous value; the inner
 * tolerance tightens by 0.9 per pass down to 1e-4. Returns once the relative
 * infeasibility is below switch_tol, when a subproblem needs at least
 * policy.difficulty_threshold inner steps and `may_escalate` is set (before
 * the dual update, so the caller can grow the rank and call again), at the
 * outer cap, or when `stop` returns true.
 */
template <typename Scalar>
AlmOutcome<Scalar> alm_outer_loop(const SdpProblem<Scalar>& problem, BmState<Scalar>& s,
                                  const AlmSettings<Scalar>& settings, const RankPolicy& policy,
                                  bool may_escalate, const std::function<bool()>& stop = {}) {
  AlmOutcome<Scalar> out;
  const Scalar bnorm = Scalar(1) + problem.rhs().template lpNorm<Eigen::Infinity>();
  Vector<Scalar> residual = constraint_residual(problem, s.R, s.R);
  out.infeas = residual.norm() / bnorm;
  if (!std::isfinite(static_cast<double>(s.prev_infeas))) {
    // Fresh state: start both schedules.
    s.prev_infeas = out.infeas;
    s.inner_tol = settings.inner_tol_init;
  }

  for (;;) {
    if (out.infeas < settings.switch_tol) {
      out.status = AlmStatus::converged;
      return out;
    }
    if (s.outer_iter >= settings.max_outer) {
      out.status = AlmStatus::outer_cap;
      return out;
    }
    if (stop && stop()) {
      out.status = AlmStatus::stopped;
      return out;
    }
    auto inner = lbfgs_minimize(problem, s, s.inner_tol, settings.max_inner, settings.lbfgs);
    s.R = std::move(inner.R);
    s.inner_iter_count = inner.iterations;
    out.inner_total += inner.iterations;
    out.last_inner = inner.iterations;
    residual = std::move(inner.residual);
    out.infeas = residual.norm() / bnorm;

    if (may_escalate && should_escalate(inner.iterations, policy) && s.R.cols() < policy.rank_cap) {
      out.status = AlmStatus::escalation_requested;
      return out;
    }

    bm_dual_update(s, residual);
    if (out.infeas > settings.required_reduction * s.prev_infeas)
      s.rho = std::min(settings.rho_increase * s.rho, settings.rho_max);
    s.prev_infeas = out.infeas;
    s.inner_tol = std::max(settings.inner_tol_decay * s.inner_tol, settings.inner_tol_min);
    ++s.outer_iter;
    ++out.outer_iters;
  }
}

}  // namespace lorank
