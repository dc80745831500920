#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lorank/errors.hpp"
#include "lorank/sparse_sym_matrix.hpp"
#include "lorank/types.hpp"

namespace lorank {

/// Structural class of a problem; drives heuristic defaults only.
enum class ProblemClass { generic, maxcut, matrix_completion };

/// The stored objective is always minimized. `maximize` means the instance
/// was posed as a maximization and reported objectives are negated back.
enum class ObjectiveSense { minimize, maximize };

inline const char* to_string(ProblemClass c) {
  switch (c) {
    case ProblemClass::maxcut: return "maxcut";
    case ProblemClass::matrix_completion: return "matrix_completion";
    default: return "generic";
  }
}

/**
 * Linear SDP instance
 *
 *     minimize <C, X>  s.t.  <A_i, X> = b_i (i = 1..m),  X PSD,
 *
 * with C and every A_i symmetric of order n. Immutable after construction.
 * `block_sizes` records the SDPA block layout the matrix was assembled from
 * (negative = diagonal block); the solver treats X as a single block.
 */
template <typename Scalar>
class SdpProblem {
 public:
  using Matrix = SparseSymMatrix<Scalar>;

  SdpProblem(Matrix objective, std::vector<Matrix> constraints, Vector<Scalar> rhs,
             ProblemClass tag = ProblemClass::generic,
             ObjectiveSense sense = ObjectiveSense::minimize, std::vector<Index> block_sizes = {},
             std::string name = {})
      : objective_(std::move(objective)),
        constraints_(std::move(constraints)),
        rhs_(std::move(rhs)),
        tag_(tag),
        sense_(sense),
        block_sizes_(std::move(block_sizes)),
        name_(std::move(name)) {
    const Index n = objective_.dim();
    if (n < 1) throw InvalidInput("SdpProblem: matrix order must be positive");
    if (constraints_.empty()) throw InvalidInput("SdpProblem: at least one constraint required");
    if (static_cast<Index>(constraints_.size()) != rhs_.size())
      throw DimensionMismatch("SdpProblem: " + std::to_string(constraints_.size()) +
                              " constraints but rhs of length " + std::to_string(rhs_.size()));
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
      if (constraints_[i].dim() != n)
        throw DimensionMismatch("SdpProblem: constraint " + std::to_string(i) + " has order " +
                                std::to_string(constraints_[i].dim()) + ", expected " +
                                std::to_string(n));
    }
    if (!rhs_.allFinite()) throw InvalidInput("SdpProblem: non-finite rhs");
    if (block_sizes_.empty()) block_sizes_.push_back(n);
  }

  Index n() const noexcept { return objective_.dim(); }
  Index m() const noexcept { return static_cast<Index>(constraints_.size()); }
  const Matrix& objective() const noexcept { return objective_; }
  const std::vector<Matrix>& constraints() const noexcept { return constraints_; }
  const Matrix& constraint(Index i) const { return constraints_[static_cast<std::size_t>(i)]; }
  const Vector<Scalar>& rhs() const noexcept { return rhs_; }
  ProblemClass tag() const noexcept { return tag_; }
  ObjectiveSense sense() const noexcept { return sense_; }
  const std::vector<Index>& block_sizes() const noexcept { return block_sizes_; }
  const std::string& name() const noexcept { return name_; }

  SdpProblem with_tag(ProblemClass tag) const {
    SdpProblem copy = *this;
    copy.tag_ = tag;
    return copy;
  }
  SdpProblem with_name(std::string name) const {
    SdpProblem copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }

  /// s_A = sum_i ||A_i||_F^2; sqrt(s_A) bounds the operator 2-norm of the constraint map.
  Scalar constraint_norm_sq_sum() const {
    Scalar s(0);
    for (const auto& A : constraints_) s += A.frobenius_norm_sq();
    return s;
  }

  /// Objective as reported to users: sign-corrected for maximization problems.
  Scalar reported_objective(Scalar stored) const {
    return sense_ == ObjectiveSense::maximize ? -stored : stored;
  }

  friend bool operator==(const SdpProblem& a, const SdpProblem& b) {
    return a.objective_ == b.objective_ && a.constraints_ == b.constraints_ &&
           a.rhs_.size() == b.rhs_.size() && a.rhs_ == b.rhs_ && a.tag_ == b.tag_ &&
           a.sense_ == b.sense_ && a.block_sizes_ == b.block_sizes_ && a.name_ == b.name_;
  }

 private:
  Matrix objective_;
  std::vector<Matrix> constraints_;
  Vector<Scalar> rhs_;
  ProblemClass tag_;
  ObjectiveSense sense_;
  std::vector<Index> block_sizes_;
  std::string name_;
};

using SdpProblemd = SdpProblem<double>;

namespace detail {

template <typename Scalar, typename DerivedU, typename DerivedV>
void check_factor_pair(const SdpProblem<Scalar>& problem, const Eigen::MatrixBase<DerivedU>& U,
                       const Eigen::MatrixBase<DerivedV>& V, const char* who) {
  if (U.rows() != problem.n() || V.rows() != problem.n() || U.cols() != V.cols())
    throw DimensionMismatch(std::string(who) + ": factors " + std::to_string(U.rows()) + "x" +
                            std::to_string(U.cols()) + " and " + std::to_string(V.rows()) + "x" +
                            std::to_string(V.cols()) + " do not conform to order " +
                            std::to_string(problem.n()));
}

}  // namespace detail

/// Constraint map on a factored matrix: returns (<A_i, U V^T>)_i.
template <typename Scalar, typename DerivedU, typename DerivedV>
Vector<Scalar> apply_A(const SdpProblem<Scalar>& problem, const Eigen::MatrixBase<DerivedU>& U,
                       const Eigen::MatrixBase<DerivedV>& V) {
  detail::check_factor_pair(problem, U, V, "apply_A");
  Vector<Scalar> out(problem.m());
  for (Index i = 0; i < problem.m(); ++i) out[i] = problem.constraint(i).inner(U, V);
  return out;
}

/// A(U V^T) - b.
template <typename Scalar, typename DerivedU, typename DerivedV>
Vector<Scalar> constraint_residual(const SdpProblem<Scalar>& problem,
                                   const Eigen::MatrixBase<DerivedU>& U,
                                   const Eigen::MatrixBase<DerivedV>& V) {
  return apply_A(problem, U, V) - problem.rhs();
}

/// (c * C + sum_i y_i A_i) W, accumulated entry by entry.
template <typename Scalar, typename DerivedY, typename DerivedW>
Factor<Scalar> apply_combination(const SdpProblem<Scalar>& problem, Scalar c,
                                 const Eigen::MatrixBase<DerivedY>& y,
                                 const Eigen::MatrixBase<DerivedW>& W) {
  if (y.size() != problem.m())
    throw DimensionMismatch("apply_combination: coefficient vector has length " +
                            std::to_string(y.size()) + ", expected " + std::to_string(problem.m()));
  if (W.rows() != problem.n())
    throw DimensionMismatch("apply_combination: factor has " + std::to_string(W.rows()) +
                            " rows, expected " + std::to_string(problem.n()));
  Factor<Scalar> out = Factor<Scalar>::Zero(W.rows(), W.cols());
  problem.objective().accumulate_product(c, W, out);
  for (Index i = 0; i < problem.m(); ++i) problem.constraint(i).accumulate_product(y[i], W, out);
  return out;
}

/// Adjoint map applied to a factor: (sum_i y_i A_i) W.
template <typename Scalar, typename DerivedY, typename DerivedW>
Factor<Scalar> apply_A_adjoint_times(const SdpProblem<Scalar>& problem,
                                     const Eigen::MatrixBase<DerivedY>& y,
                                     const Eigen::MatrixBase<DerivedW>& W) {
  return apply_combination(problem, Scalar(0), y, W);
}

/// <C, U V^T>.
template <typename Scalar, typename DerivedU, typename DerivedV>
Scalar objective_value(const SdpProblem<Scalar>& problem, const Eigen::MatrixBase<DerivedU>& U,
                       const Eigen::MatrixBase<DerivedV>& V) {
  detail::check_factor_pair(problem, U, V, "objective_value");
  return problem.objective().inner(U, V);
}

template <typename Scalar>
struct Recombined {
  Factor<Scalar> factor;
  Vector<Scalar> multipliers;
};

/// Maps a split point (U, V, lambda) to the symmetric factor (U + V) / 2 and
/// the doubled multiplier 2 * lambda.
template <typename Scalar>
Recombined<Scalar> recombine(const Factor<Scalar>& U, const Factor<Scalar>& V,
                             const Vector<Scalar>& lambda) {
  if (U.rows() != V.rows() || U.cols() != V.cols())
    throw DimensionMismatch("recombine: U and V differ in shape");
  return {(U + V) / Scalar(2), Scalar(2) * lambda};
}

}  // namespace lorank
