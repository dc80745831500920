#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lorank/errors.hpp"
#include "lorank/types.hpp"

namespace lorank {

template <typename Scalar>
struct SymEntry {
  Index row;
  Index col;
  Scalar value;

  friend bool operator==(const SymEntry&, const SymEntry&) = default;
};

/**
 * Symmetric matrix in upper-triangle coordinate form.
 *
 * A stored entry (i, j, v) with i < j stands for both (i, j) and (j, i).
 * Entries are kept sorted by (row, col); construction rejects out-of-range
 * indices, duplicate positions and non-finite values. Entries given below the
 * diagonal are mirrored into the upper triangle.
 */
template <typename Scalar>
class SparseSymMatrix {
 public:
  using Entry = SymEntry<Scalar>;

  SparseSymMatrix() = default;

  explicit SparseSymMatrix(Index dim) : dim_(dim) {
    if (dim < 1) throw InvalidInput("SparseSymMatrix: dimension must be positive");
  }

  SparseSymMatrix(Index dim, std::vector<Entry> entries) : dim_(dim), entries_(std::move(entries)) {
    if (dim < 1) throw InvalidInput("SparseSymMatrix: dimension must be positive");
    for (auto& e : entries_) {
      if (e.row > e.col) std::swap(e.row, e.col);
      if (e.row < 0 || e.col >= dim_)
        throw InvalidInput("SparseSymMatrix: entry (" + std::to_string(e.row) + "," +
                           std::to_string(e.col) + ") outside dimension " + std::to_string(dim_));
      if (!std::isfinite(static_cast<double>(e.value)))
        throw InvalidInput("SparseSymMatrix: non-finite value");
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    for (std::size_t k = 1; k < entries_.size(); ++k) {
      if (entries_[k].row == entries_[k - 1].row && entries_[k].col == entries_[k - 1].col)
        throw InvalidInput("SparseSymMatrix: duplicate entry (" + std::to_string(entries_[k].row) +
                           "," + std::to_string(entries_[k].col) + ")");
    }
  }

  static SparseSymMatrix identity(Index dim) {
    std::vector<Entry> e;
    e.reserve(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) e.push_back({i, i, Scalar(1)});
    return SparseSymMatrix(dim, std::move(e));
  }

  Index dim() const noexcept { return dim_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// ||M||_F^2 with off-diagonal entries counted twice.
  Scalar frobenius_norm_sq() const {
    Scalar s(0);
    for (const auto& e : entries_) s += (e.row == e.col ? Scalar(1) : Scalar(2)) * e.value * e.value;
    return s;
  }

  /// ||vec(M)||_1 over the full (both triangles) flattening.
  Scalar flattened_abs_sum() const {
    Scalar s(0);
    for (const auto& e : entries_) s += (e.row == e.col ? Scalar(1) : Scalar(2)) * std::abs(e.value);
    return s;
  }

  /// <M, U V^T> without forming U V^T.
  template <typename DerivedU, typename DerivedV>
  Scalar inner(const Eigen::MatrixBase<DerivedU>& U, const Eigen::MatrixBase<DerivedV>& V) const {
    Scalar s(0);
    for (const auto& e : entries_) {
      if (e.row == e.col) {
        s += e.value * U.row(e.row).dot(V.row(e.row));
      } else {
        s += e.value * (U.row(e.row).dot(V.row(e.col)) + U.row(e.col).dot(V.row(e.row)));
      }
    }
    return s;
  }

  /// out += coeff * M * W.
  template <typename DerivedW, typename DerivedOut>
  void accumulate_product(Scalar coeff, const Eigen::MatrixBase<DerivedW>& W,
                          Eigen::MatrixBase<DerivedOut>& out) const {
    if (coeff == Scalar(0)) return;
    for (const auto& e : entries_) {
      const Scalar c = coeff * e.value;
      out.row(e.row) += c * W.row(e.col);
      if (e.row != e.col) out.row(e.col) += c * W.row(e.row);
    }
  }

  DenseMatrix<Scalar> to_dense() const {
    DenseMatrix<Scalar> M = DenseMatrix<Scalar>::Zero(dim_, dim_);
    for (const auto& e : entries_) {
      M(e.row, e.col) = e.value;
      M(e.col, e.row) = e.value;
    }
    return M;
  }

  friend bool operator==(const SparseSymMatrix&, const SparseSymMatrix&) = default;

 private:
  Index dim_ = 0;
  std::vector<Entry> entries_;
};

using SparseSymMatrixd = SparseSymMatrix<double>;

}  // namespace lorank
