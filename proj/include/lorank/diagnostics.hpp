#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lorank/errors.hpp"
#include "lorank/lanczos.hpp"
#include "lorank/problem.hpp"

namespace lorank {

/// Which norm of b normalizes the primal residual.
enum class RhsNorm { inf_norm, one_norm, two_norm };

template <typename Scalar>
struct ErrorTriple {
  Scalar primal_infeas = 0;
  Scalar dual_infeas = 0;
  Scalar pd_gap = 0;
};

/// ||A(UV^T) - b||_2 / (1 + ||b||_*), * selected by `normalization`.
template <typename Scalar>
Scalar primal_infeasibility(const SdpProblem<Scalar>& problem, const Factor<Scalar>& U,
                            const Factor<Scalar>& V, RhsNorm normalization = RhsNorm::inf_norm) {
  const Scalar num = constraint_residual(problem, U, V).norm();
  const auto& b = problem.rhs();
  Scalar den = 1;
  switch (normalization) {
    case RhsNorm::inf_norm: den += b.template lpNorm<Eigen::Infinity>(); break;
    case RhsNorm::one_norm: den += b.template lpNorm<1>(); break;
    case RhsNorm::two_norm: den += b.norm(); break;
  }
  return num / den;
}

template <typename Scalar>
struct DualInfeasibility {
  Scalar value = 0;       // |min(0, lambda_min)| / (1 + ||vec(C)||_1)
  Scalar lambda_min = 0;  // estimate of the smallest eigenvalue of C - A^*(y)
  bool converged = true;  // false: Lanczos hit its cap; the estimate is less certain
};

template <typename Scalar>
struct LanczosSettings {
  long max_iter = 0;  // 0: min(n, max(ceil(5 sqrt n), 100))
  Scalar tol = Scalar(1e-9);
  std::uint64_t seed = 7;

  long cap(Index n) const {
    if (max_iter > 0) return max_iter;
    const auto root = static_cast<long>(std::ceil(5.0 * std::sqrt(static_cast<double>(n))));
    return std::min<long>(static_cast<long>(n), std::max<long>(root, 100));
  }
};

/**
 * Dual infeasibility for dual vector y in the convention where the slack is
 * S = C - sum_i y_i A_i. ||vec(C)||_1 counts off-diagonal entries twice.
 */
template <typename Scalar>
DualInfeasibility<Scalar> dual_infeasibility(const SdpProblem<Scalar>& problem,
                                             const Vector<Scalar>& y,
                                             const LanczosSettings<Scalar>& settings = {}) {
  if (y.size() != problem.m()) throw DimensionMismatch("dual_infeasibility: dual vector length");
  const Vector<Scalar> neg_y = -y;
  const Index n = problem.n();
  auto slack = [&](const auto& x, Vector<Scalar>& out) {
    const Factor<Scalar> xf = x;
    out = apply_combination(problem, Scalar(1), neg_y, xf).col(0);
  };
  const auto lz = lanczos_smallest<Scalar>(slack, n, settings.cap(n), settings.tol, settings.seed);
  DualInfeasibility<Scalar> d;
  d.lambda_min = lz.value;
  d.converged = lz.converged;
  d.value = std::abs(std::min(Scalar(0), lz.value)) /
            (Scalar(1) + problem.objective().flattened_abs_sum());
  return d;
}

/// Estimate of ||C - A^*(y)||_2 from a few Lanczos steps at each end of the spectrum.
template <typename Scalar>
Scalar slack_spectral_norm(const SdpProblem<Scalar>& problem, const Vector<Scalar>& y,
                           long max_iter = 30, Scalar tol = Scalar(1e-3), std::uint64_t seed = 7) {
  if (y.size() != problem.m()) throw DimensionMismatch("slack_spectral_norm: dual vector length");
  const Vector<Scalar> neg_y = -y;
  auto slack = [&](Scalar sign) {
    return [&, sign](const auto& x, Vector<Scalar>& out) {
      const Factor<Scalar> xf = x;
      out = sign * apply_combination(problem, Scalar(1), neg_y, xf).col(0);
    };
  };
  const Index n = problem.n();
  const Scalar lo = lanczos_smallest<Scalar>(slack(Scalar(1)), n, max_iter, tol, seed).value;
  const Scalar hi = -lanczos_smallest<Scalar>(slack(Scalar(-1)), n, max_iter, tol, seed).value;
  return std::max(std::abs(lo), std::abs(hi));
}

/// (<C, UV^T> - y'b) / (1 + |<C, UV^T>| + |y'b|).
template <typename Scalar>
Scalar pd_gap(const SdpProblem<Scalar>& problem, const Factor<Scalar>& U, const Factor<Scalar>& V,
              const Vector<Scalar>& y) {
  if (y.size() != problem.m()) throw DimensionMismatch("pd_gap: dual vector length");
  const Scalar primal = objective_value(problem, U, V);
  const Scalar dual = y.dot(problem.rhs());
  return (primal - dual) / (Scalar(1) + std::abs(primal) + std::abs(dual));
}

/// Shifted geometric mean exp(mean log max(1, t_i + s)) - s.
inline double sgm(std::span<const double> times, double shift = 10.0) {
  if (times.empty()) throw InvalidInput("sgm: empty input");
  std::vector<double> terms;
  terms.reserve(times.size());
  for (double t : times) {
    if (!(t >= 0)) throw InvalidInput("sgm: times must be nonnegative");
    terms.push_back(std::max(1.0, t + shift));
  }
  // The geometric mean of identical terms is that term; skip the exp/log round trip.
  if (std::all_of(terms.begin(), terms.end(), [&](double v) { return v == terms.front(); }))
    return terms.front() - shift;
  double acc = 0;
  for (double v : terms) acc += std::log(v);
  return std::exp(acc / static_cast<double>(terms.size())) - shift;
}

/// Each entry divided by the smallest one.
inline std::vector<double> scaled_sgm(std::span<const double> sgms) {
  if (sgms.empty()) throw InvalidInput("scaled_sgm: empty input");
  const double lo = *std::min_element(sgms.begin(), sgms.end());
  if (!(lo > 0)) throw InvalidInput("scaled_sgm: smallest mean must be positive");
  std::vector<double> out;
  out.reserve(sgms.size());
  for (double v : sgms) out.push_back(v / lo);
  return out;
}

}  // namespace lorank
