#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <string_view>

#include "lorank/errors.hpp"
#include "lorank/types.hpp"

namespace lorank {

enum class RankMode { log_small, log_large, sqrt2m, fixed };

/// Initial rank choice plus the escalation rule used during the warm start.
struct RankPolicy {
  RankMode mode = RankMode::log_small;
  Index fixed_rank = 0;           // used when mode == fixed
  double escalation_factor = 1.5;
  long difficulty_threshold = 200;  // inner iterations that mark a subproblem as difficult
  Index rank_cap = 0;             // min(n, round(sqrt(2m))); see for_problem()

  /// Copy with the cap filled in for an n x n variable and m constraints.
  RankPolicy for_problem(Index n, Index m) const {
    RankPolicy p = *this;
    const auto sqrt_rank = static_cast<Index>(std::lround(std::sqrt(2.0 * static_cast<double>(m))));
    p.rank_cap = std::max<Index>(1, std::min(n, sqrt_rank));
    return p;
  }
};

/// Rank from the (n, m) pair: round(2 ln m), round(ln m), round(sqrt(2m)) or a
/// fixed value, clamped to [1, n]. std::lround rounds half away from zero.
inline Index initial_rank(Index n, Index m, RankMode mode, Index fixed_rank = 0) {
  if (n < 1 || m < 1) throw InvalidInput("initial_rank: n and m must be positive");
  const double md = static_cast<double>(m);
  long r = 1;
  switch (mode) {
    case RankMode::log_small: r = std::lround(2.0 * std::log(md)); break;
    case RankMode::log_large: r = std::lround(std::log(md)); break;
    case RankMode::sqrt2m: r = std::lround(std::sqrt(2.0 * md)); break;
    case RankMode::fixed: r = static_cast<long>(fixed_rank); break;
  }
  return std::clamp<Index>(static_cast<Index>(r), 1, n);
}

inline Index initial_rank(Index n, Index m, const RankPolicy& policy) {
  return initial_rank(n, m, policy.mode, policy.fixed_rank);
}

inline bool should_escalate(long inner_iters, const RankPolicy& policy) {
  return inner_iters >= policy.difficulty_threshold;
}

/// Next rank: min(ceil(factor * r), cap), never below r.
inline Index escalated_rank(Index r, const RankPolicy& policy) {
  const auto grown = static_cast<Index>(std::ceil(policy.escalation_factor * static_cast<double>(r)));
  return std::max(r, std::min(grown, policy.rank_cap));
}

/**
 * Appends columns to R up to the escalated rank. Existing columns are kept;
 * new ones are Gaussian with scale 1e-3 * ||R||_F / sqrt(n r). Zero columns
 * would be stationary for the factored objective, hence the perturbation.
 * At the cap this is a no-op and `warn` (when set) receives a message.
 */
template <typename Scalar, typename Rng>
Factor<Scalar> escalate(const Factor<Scalar>& R, const RankPolicy& policy, Rng& rng,
                        const std::function<void(std::string_view)>& warn = {}) {
  if (policy.escalation_factor <= 1.0) throw InvalidInput("escalate: escalation factor must exceed 1");
  const Index r = R.cols();
  const Index target = escalated_rank(r, policy);
  if (target <= r) {
    if (warn) warn("rank " + std::to_string(r) + " already at cap " + std::to_string(policy.rank_cap));
    return R;
  }
  const Index n = R.rows();
  const Scalar scale = Scalar(1e-3) * R.norm() / std::sqrt(static_cast<Scalar>(n * r));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Factor<Scalar> out(n, target);
  out.leftCols(r) = R;
  for (Index i = 0; i < n; ++i)
    for (Index j = r; j < target; ++j) out(i, j) = scale * static_cast<Scalar>(gauss(rng));
  return out;
}

}  // namespace lorank
