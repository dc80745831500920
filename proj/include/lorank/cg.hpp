#pragma once

#include <algorithm>
#include <cmath>

#include "lorank/errors.hpp"
#include "lorank/types.hpp"

namespace lorank {

/// Scratch for conjugate gradients in factor shape; reused across solves of the same size.
template <typename Scalar>
struct CgWorkspace {
  Factor<Scalar> direction;
  Factor<Scalar> residual;
  Factor<Scalar> product;

  void resize(Index rows, Index cols) {
    direction.resize(rows, cols);
    residual.resize(rows, cols);
    product.resize(rows, cols);
  }
};

template <typename Scalar>
struct CgResult {
  Factor<Scalar> solution;
  long iterations = 0;
  bool converged = false;
  Scalar residual_norm = 0;  // ||op(X) - rhs||_F at return
};

/**
 * Conjugate gradients on an SPD operator acting on n x r factors with the
 * Frobenius inner product. Starts at `warm_start` and stops once
 * ||op(X) - rhs||_F <= tol * max(1, ||rhs||_F). Exhausting `max_iter` returns
 * the last iterate with converged = false; p'Mp <= 0 throws NumericalFailure.
 *
 * `op(X, out)` must write the operator image of X into `out`.
 */
template <typename Scalar, typename Operator>
CgResult<Scalar> cg_solve(const Operator& op, const Factor<Scalar>& rhs,
                          const Factor<Scalar>& warm_start, Scalar tol, long max_iter,
                          CgWorkspace<Scalar>& ws) {
  if (rhs.rows() != warm_start.rows() || rhs.cols() != warm_start.cols())
    throw DimensionMismatch("cg_solve: warm start and rhs differ in shape");
  if (!(tol > 0)) throw InvalidInput("cg_solve: tolerance must be positive");

  ws.resize(rhs.rows(), rhs.cols());
  CgResult<Scalar> res;
  res.solution = warm_start;
  Factor<Scalar>& X = res.solution;
  Factor<Scalar>& R = ws.residual;
  Factor<Scalar>& P = ws.direction;
  Factor<Scalar>& MP = ws.product;

  const Scalar threshold = tol * std::max(Scalar(1), rhs.norm());
  op(X, MP);
  R = rhs - MP;
  Scalar rr = R.squaredNorm();
  if (std::sqrt(rr) <= threshold) {
    res.converged = true;
    res.residual_norm = std::sqrt(rr);
    return res;
  }
  P = R;
  for (long k = 0; k < max_iter; ++k) {
    op(P, MP);
    const Scalar pmp = P.cwiseProduct(MP).sum();
    if (!(pmp > 0)) throw NumericalFailure("cg_solve: non-positive curvature p'Mp", k);
    const Scalar alpha = rr / pmp;
    X.noalias() += alpha * P;
    R.noalias() -= alpha * MP;
    const Scalar rr_next = R.squaredNorm();
    res.iterations = k + 1;
    if (std::sqrt(rr_next) <= threshold) {
      res.converged = true;
      res.residual_norm = std::sqrt(rr_next);
      return res;
    }
    const Scalar beta = rr_next / rr;
    rr = rr_next;
    P = R + beta * P;
  }
  res.residual_norm = std::sqrt(rr);
  return res;
}

template <typename Scalar, typename Operator>
CgResult<Scalar> cg_solve(const Operator& op, const Factor<Scalar>& rhs,
                          const Factor<Scalar>& warm_start, Scalar tol, long max_iter) {
  CgWorkspace<Scalar> ws;
  return cg_solve(op, rhs, warm_start, tol, max_iter, ws);
}

}  // namespace lorank
