#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "lorank/cg.hpp"
#include "lorank/errors.hpp"
#include "lorank/problem.hpp"

namespace lorank {

/// Full Phase II iterate: split factors, multipliers, penalty and proximal weight.
template <typename Scalar>
struct SplitState {
  Factor<Scalar> U;
  Factor<Scalar> V;
  Vector<Scalar> lambda;
  Scalar rho = 1;
  Scalar gamma = 1;
  long iter = 0;
  Vector<Scalar> residual;  // A(U V^T) - b at (U, V)
};

template <typename Scalar>
SplitState<Scalar> make_split_state(const SdpProblem<Scalar>& problem, Factor<Scalar> U,
                                    Factor<Scalar> V, Vector<Scalar> lambda, Scalar rho,
                                    Scalar gamma) {
  detail::check_factor_pair(problem, U, V, "make_split_state");
  if (U.cols() < 1 || U.cols() > problem.n())
    throw InvalidInput("make_split_state: rank " + std::to_string(U.cols()) +
                       " outside [1, n = " + std::to_string(problem.n()) + "]");
  if (lambda.size() != problem.m())
    throw DimensionMismatch("make_split_state: multiplier length " + std::to_string(lambda.size()) +
                            ", expected " + std::to_string(problem.m()));
  if (!(rho > 0) || !(gamma > 0)) throw InvalidInput("make_split_state: rho and gamma must be positive");
  SplitState<Scalar> s;
  s.U = std::move(U);
  s.V = std::move(V);
  s.lambda = std::move(lambda);
  s.rho = rho;
  s.gamma = gamma;
  s.residual = constraint_residual(problem, s.U, s.V);
  return s;
}

/// Augmented Lagrangian of the penalized split problem:
/// <C, UV^T> + gamma/2 ||U - V||^2 + lambda'r + rho/2 ||r||^2 with r = A(UV^T) - b.
template <typename Scalar>
Scalar split_lagrangian(const SdpProblem<Scalar>& problem, const Factor<Scalar>& U,
                        const Factor<Scalar>& V, const Vector<Scalar>& lambda, Scalar rho,
                        Scalar gamma) {
  const Vector<Scalar> r = constraint_residual(problem, U, V);
  return objective_value(problem, U, V) + gamma / 2 * (U - V).squaredNorm() + lambda.dot(r) +
         rho / 2 * r.squaredNorm();
}

template <typename Scalar>
Scalar split_lagrangian(const SdpProblem<Scalar>& problem, const SplitState<Scalar>& s) {
  return split_lagrangian(problem, s.U, s.V, s.lambda, s.rho, s.gamma);
}

/**
 * The subproblem operator X -> gamma X + rho sum_i <A_i W, X> A_i W, i.e. the
 * nr x nr matrix rho sum_i vec(A_i W) vec(A_i W)^T + gamma I applied without
 * ever being formed. <A_i W, X> = <A_i, X W^T>, so the m inner products are one
 * constraint-map evaluation followed by one adjoint product.
 */
template <typename Scalar>
class NormalOperator {
 public:
  NormalOperator(const SdpProblem<Scalar>& problem, const Factor<Scalar>& W, Scalar rho, Scalar gamma)
      : problem_(problem), W_(W), rho_(rho), gamma_(gamma) {
    if (W.rows() != problem.n()) throw DimensionMismatch("NormalOperator: W row count");
  }

  void operator()(const Factor<Scalar>& X, Factor<Scalar>& out) const {
    if (X.rows() != W_.rows() || X.cols() != W_.cols())
      throw DimensionMismatch("NormalOperator: X shape differs from W");
    out = gamma_ * X;
    if (rho_ == Scalar(0)) return;
    const Vector<Scalar> t = apply_A(problem_, X, W_);
    for (Index i = 0; i < problem_.m(); ++i)
      problem_.constraint(i).accumulate_product(rho_ * t[i], W_, out);
  }

  Scalar rho() const noexcept { return rho_; }
  Scalar gamma() const noexcept { return gamma_; }

 private:
  const SdpProblem<Scalar>& problem_;
  const Factor<Scalar>& W_;
  Scalar rho_;
  Scalar gamma_;
};

template <typename Scalar>
Factor<Scalar> normal_operator_apply(const SdpProblem<Scalar>& problem, const Factor<Scalar>& W,
                                     Scalar rho, Scalar gamma, const Factor<Scalar>& X) {
  Factor<Scalar> out;
  NormalOperator<Scalar>(problem, W, rho, gamma)(X, out);
  return out;
}

/// Right-hand side of the subproblem system: -(C W - gamma W + A^*(lambda) W - rho A^*(b) W).
template <typename Scalar>
Factor<Scalar> subproblem_rhs(const SdpProblem<Scalar>& problem, const Factor<Scalar>& W,
                              const Vector<Scalar>& lambda, Scalar rho, Scalar gamma) {
  if (lambda.size() != problem.m()) throw DimensionMismatch("subproblem_rhs: multiplier length");
  const Vector<Scalar> coeff = lambda - rho * problem.rhs();
  Factor<Scalar> out = apply_combination(problem, Scalar(1), coeff, W);
  out = gamma * W - out;
  return out;
}

/// Which iterate seeds each CG solve.
enum class CgWarmStart {
  partner,   // U-solve from V^k, V-solve from U^{k+1}
  previous,  // U-solve from U^k, V-solve from V^k
};

template <typename Scalar>
struct AdmmSettings {
  Scalar cg_tol = Scalar(1e-8);
  long cg_max_iter = 0;  // 0: min(n r, 1000)
  CgWarmStart warm_start = CgWarmStart::partner;

  long cg_cap(Index n, Index r) const {
    return cg_max_iter > 0 ? cg_max_iter : static_cast<long>(std::min<Index>(n * r, 1000));
  }
};

template <typename Scalar>
struct SweepDiagnostics {
  Scalar du_norm = 0;
  Scalar dv_norm = 0;
  Scalar dlambda_norm = 0;
  long cg_iters_u = 0;
  long cg_iters_v = 0;
  bool cg_converged = true;
  Scalar lagrangian_before = 0;        // L(U^k, V^k, lambda^k)
  Scalar lagrangian_after_primal = 0;  // L(U^{k+1}, V^{k+1}, lambda^k)
  Scalar lagrangian_after_dual = 0;    // L(U^{k+1}, V^{k+1}, lambda^{k+1})
  Scalar primal_infeas = 0;            // ||r||_2 / (1 + ||b||_inf) after the sweep
  Scalar step_term = 0;                // gamma ||V^{k+1} - V^k||_F / (1 + ||V^k||_F)
};

/// U-step: minimizes L(., V, lambda). Returns the CG record; state.U is overwritten.
template <typename Scalar>
CgResult<Scalar> admm_u_step(const SdpProblem<Scalar>& problem, SplitState<Scalar>& s,
                             const AdmmSettings<Scalar>& settings, CgWorkspace<Scalar>& ws) {
  const NormalOperator<Scalar> op(problem, s.V, s.rho, s.gamma);
  const Factor<Scalar> rhs = subproblem_rhs(problem, s.V, s.lambda, s.rho, s.gamma);
  const Factor<Scalar>& warm = settings.warm_start == CgWarmStart::partner ? s.V : s.U;
  auto res = cg_solve(op, rhs, warm, settings.cg_tol, settings.cg_cap(problem.n(), s.U.cols()), ws);
  s.U = res.solution;
  return res;
}

/// V-step: minimizes L(U, ., lambda) with U already updated.
template <typename Scalar>
CgResult<Scalar> admm_v_step(const SdpProblem<Scalar>& problem, SplitState<Scalar>& s,
                             const AdmmSettings<Scalar>& settings, CgWorkspace<Scalar>& ws) {
  const NormalOperator<Scalar> op(problem, s.U, s.rho, s.gamma);
  const Factor<Scalar> rhs = subproblem_rhs(problem, s.U, s.lambda, s.rho, s.gamma);
  const Factor<Scalar>& warm = settings.warm_start == CgWarmStart::partner ? s.U : s.V;
  auto res = cg_solve(op, rhs, warm, settings.cg_tol, settings.cg_cap(problem.n(), s.V.cols()), ws);
  s.V = res.solution;
  return res;
}

/// lambda <- lambda + rho (A(U V^T) - b); refreshes the cached residual.
template <typename Scalar>
void admm_dual_step(const SdpProblem<Scalar>& problem, SplitState<Scalar>& s) {
  s.residual = constraint_residual(problem, s.U, s.V);
  s.lambda = s.lambda + s.rho * s.residual;
}

namespace detail {

template <typename Scalar>
Scalar lagrangian_from_residual(const SdpProblem<Scalar>& problem, const SplitState<Scalar>& s,
                                const Vector<Scalar>& lambda) {
  return objective_value(problem, s.U, s.V) + s.gamma / 2 * (s.U - s.V).squaredNorm() +
         lambda.dot(s.residual) + s.rho / 2 * s.residual.squaredNorm();
}

template <typename Scalar>
Scalar relative_infeasibility(const Vector<Scalar>& residual, const Vector<Scalar>& b) {
  return residual.norm() / (Scalar(1) + b.template lpNorm<Eigen::Infinity>());
}

}  // namespace detail

/// One pass of the splitting ADMM: U-step, V-step, dual ascent.
template <typename Scalar>
SweepDiagnostics<Scalar> admm_sweep(const SdpProblem<Scalar>& problem, SplitState<Scalar>& s,
                                    const AdmmSettings<Scalar>& settings, CgWorkspace<Scalar>& ws) {
  SweepDiagnostics<Scalar> d;
  d.lagrangian_before = detail::lagrangian_from_residual(problem, s, s.lambda);
  const Factor<Scalar> U_prev = s.U;
  const Factor<Scalar> V_prev = s.V;
  const Vector<Scalar> lambda_prev = s.lambda;

  const auto ru = admm_u_step(problem, s, settings, ws);
  const auto rv = admm_v_step(problem, s, settings, ws);
  d.cg_iters_u = ru.iterations;
  d.cg_iters_v = rv.iterations;
  d.cg_converged = ru.converged && rv.converged;

  s.residual = constraint_residual(problem, s.U, s.V);
  d.lagrangian_after_primal = detail::lagrangian_from_residual(problem, s, lambda_prev);
  s.lambda = s.lambda + s.rho * s.residual;
  d.lagrangian_after_dual = detail::lagrangian_from_residual(problem, s, s.lambda);

  d.du_norm = (s.U - U_prev).norm();
  d.dv_norm = (s.V - V_prev).norm();
  d.dlambda_norm = (s.lambda - lambda_prev).norm();
  d.primal_infeas = detail::relative_infeasibility(s.residual, problem.rhs());
  d.step_term = s.gamma * d.dv_norm / (Scalar(1) + V_prev.norm());
  ++s.iter;
  return d;
}

template <typename Scalar>
SweepDiagnostics<Scalar> admm_sweep(const SdpProblem<Scalar>& problem, SplitState<Scalar>& s,
                                    const AdmmSettings<Scalar>& settings = {}) {
  CgWorkspace<Scalar> ws;
  return admm_sweep(problem, s, settings, ws);
}

/// Penalty growth: every `period`-th iteration rho grows by `growth`, capped at
/// rho_max. A rho already above the cap is left alone rather than lowered.
template <typename Scalar>
Scalar penalty_schedule(Scalar rho, long iter, Scalar rho_max = Scalar(5000),
                        Scalar growth = Scalar(1.2), long period = 5) {
  if (iter < 1) throw InvalidInput("penalty_schedule: iteration index must be >= 1");
  if (iter % period != 0) return rho;
  return std::max(rho, std::min(growth * rho, rho_max));
}

/// primal: relative primal infeasibility alone. primal_and_step: the max rule,
/// which also needs the V step term below epsilon.
enum class StopRule { primal, primal_and_step };

template <typename Scalar>
struct TerminationCheck {
  bool satisfied = false;
  Scalar primal_infeas = 0;  // ||A(UV^T) - b||_2 / (1 + ||b||_inf)
  Scalar step_term = 0;      // gamma ||V - V_prev||_F / (1 + ||V_prev||_F)

  explicit operator bool() const noexcept { return satisfied; }
};

/// Both terms are always computed; `rule` picks which must be <= epsilon.
template <typename Scalar>
TerminationCheck<Scalar> check_termination(const SdpProblem<Scalar>& problem,
                                           const SplitState<Scalar>& s, const Factor<Scalar>& prev_V,
                                           Scalar epsilon, StopRule rule = StopRule::primal) {
  if (prev_V.rows() != s.V.rows() || prev_V.cols() != s.V.cols())
    throw DimensionMismatch("check_termination: previous V differs in shape");
  TerminationCheck<Scalar> t;
  t.primal_infeas =
      detail::relative_infeasibility(constraint_residual(problem, s.U, s.V), problem.rhs());
  t.step_term = s.gamma * (s.V - prev_V).norm() / (Scalar(1) + prev_V.norm());
  t.satisfied = t.primal_infeas <= epsilon &&
                (rule == StopRule::primal || t.step_term <= epsilon);
  return t;
}

}  // namespace lorank
