#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Eigenvalues>

#include "lorank/errors.hpp"
#include "lorank/types.hpp"

namespace lorank {

template <typename Scalar>
struct LanczosResult {
  Scalar value = 0;      // smallest Ritz value
  Scalar residual = 0;   // |beta_k * s_k|, the Ritz residual bound
  long iterations = 0;
  bool converged = false;
};

/**
 * Smallest eigenvalue of a symmetric operator by Lanczos with full
 * reorthogonalization. `op(x, y)` writes A x into y for length-n vectors.
 * Stops when the Ritz residual of the smallest Ritz pair is below
 * tol * max(1, |theta|), when the Krylov space becomes invariant, or after
 * max_iter steps (converged = false, best estimate returned).
 */
template <typename Scalar, typename Operator>
LanczosResult<Scalar> lanczos_smallest(const Operator& op, Index n, long max_iter, Scalar tol,
                                       std::uint64_t seed = 7) {
  if (n < 1) throw InvalidInput("lanczos_smallest: dimension must be positive");
  const Index kmax = std::clamp<Index>(static_cast<Index>(max_iter), 1, n);

  DenseMatrix<Scalar> Q(n, kmax + 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector<Scalar> q(n);
  for (Index i = 0; i < n; ++i) q[i] = static_cast<Scalar>(gauss(rng));
  Q.col(0) = q / q.norm();

  Vector<Scalar> alpha(kmax), beta(kmax);
  Vector<Scalar> w(n);
  LanczosResult<Scalar> res;
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> tri;

  for (Index k = 0; k < kmax; ++k) {
    op(Q.col(k), w);
    alpha[k] = Q.col(k).dot(w);
    // Two Gram-Schmidt passes against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const Vector<Scalar> coeff = Q.leftCols(k + 1).transpose() * w;
      w.noalias() -= Q.leftCols(k + 1) * coeff;
    }
    beta[k] = w.norm();
    res.iterations = k + 1;

    tri.computeFromTridiagonal(alpha.head(k + 1), beta.head(k), Eigen::ComputeEigenvectors);
    res.value = tri.eigenvalues()[0];
    res.residual = std::abs(beta[k] * tri.eigenvectors()(k, 0));
    const Scalar scale = std::max(Scalar(1), std::abs(res.value));
    if (res.residual <= tol * scale || beta[k] <= Scalar(1e-12) * scale || k + 1 == n) {
      res.converged = true;
      return res;
    }
    Q.col(k + 1) = w / beta[k];
  }
  return res;
}

}  // namespace lorank
