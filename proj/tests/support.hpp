#pragma once

// Random instances for the test suites.

#include <random>
#include <set>
#include <utility>
#include <vector>

#include "lorank/problem.hpp"

namespace testing_support {

using namespace lorank;

inline SparseSymMatrixd random_sym(Index n, int nnz, std::mt19937_64& rng, bool diag_heavy = false) {
  std::uniform_int_distribution<Index> pick(0, n - 1);
  std::normal_distribution<double> g;
  std::set<std::pair<Index, Index>> used;
  std::vector<SymEntry<double>> e;
  for (int k = 0; k < nnz; ++k) {
    Index i = pick(rng), j = diag_heavy && k % 2 == 0 ? i : pick(rng);
    if (i > j) std::swap(i, j);
    if (!used.emplace(i, j).second) continue;
    e.push_back({i, j, g(rng)});
  }
  if (e.empty()) e.push_back({0, 0, 1.0});
  return SparseSymMatrixd(n, std::move(e));
}

// m random sparse constraints, random C, and b = A(R0 R0^T) so the problem is feasible.
inline SdpProblemd random_problem(Index n, Index m, std::uint64_t seed, int nnz_per = 4) {
  std::mt19937_64 rng(seed);
  std::vector<SparseSymMatrixd> A;
  for (Index i = 0; i < m; ++i) A.push_back(random_sym(n, nnz_per, rng, true));
  SparseSymMatrixd C = random_sym(n, 2 * static_cast<int>(n), rng);
  std::normal_distribution<double> g;
  Factord R0(n, 2);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < 2; ++k) R0(i, k) = g(rng);
  Vectord b(m);
  for (Index i = 0; i < m; ++i) {
    double v = 0;
    for (const auto& e : A[static_cast<std::size_t>(i)].entries())
      v += (e.row == e.col ? 1.0 : 2.0) * e.value * R0.row(e.row).dot(R0.row(e.col));
    b[i] = v;
  }
  return SdpProblemd(std::move(C), std::move(A), std::move(b), ProblemClass::generic,
                     ObjectiveSense::minimize);
}

inline Factord random_factor(Index n, Index r, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  Factord F(n, r);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < r; ++k) F(i, k) = scale * g(rng);
  return F;
}

inline Vectord random_vector(Index m, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  Vectord v(m);
  for (Index i = 0; i < m; ++i) v[i] = scale * g(rng);
  return v;
}

// Triangle graph MaxCut in minimization form: C = -L/4, X_ii = 1.
inline SdpProblemd triangle_maxcut() {
  std::vector<SymEntry<double>> c = {{0, 0, -0.5}, {1, 1, -0.5}, {2, 2, -0.5},
                                     {0, 1, 0.25}, {0, 2, 0.25}, {1, 2, 0.25}};
  std::vector<SparseSymMatrixd> A;
  for (Index i = 0; i < 3; ++i) A.emplace_back(3, std::vector<SymEntry<double>>{{i, i, 1.0}});
  return SdpProblemd(SparseSymMatrixd(3, std::move(c)), std::move(A), Vectord::Ones(3),
                     ProblemClass::maxcut, ObjectiveSense::maximize, {}, "triangle");
}

}  // namespace testing_support
