#include "lorank/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "lorank/errors.hpp"

namespace lorank {

SparseSymMatrixd laplacian(const GsetGraph& graph) {
  validate(graph);
  std::vector<double> degree(static_cast<std::size_t>(graph.n), 0.0);
  std::vector<SymEntry<double>> entries;
  entries.reserve(graph.edges.size() + static_cast<std::size_t>(graph.n));
  for (const auto& e : graph.edges) {
    degree[static_cast<std::size_t>(e.i - 1)] += e.w;
    degree[static_cast<std::size_t>(e.j - 1)] += e.w;
    if (e.w != 0.0) entries.push_back({e.i - 1, e.j - 1, -e.w});
  }
  for (Index v = 0; v < graph.n; ++v)
    if (degree[static_cast<std::size_t>(v)] != 0.0)
      entries.push_back({v, v, degree[static_cast<std::size_t>(v)]});
  return SparseSymMatrixd(graph.n, std::move(entries));
}

SdpProblemd gen_maxcut(const GsetGraph& graph) {
  const SparseSymMatrixd L = laplacian(graph);
  std::vector<SymEntry<double>> c;
  c.reserve(L.nnz());
  for (const auto& e : L.entries()) c.push_back({e.row, e.col, -e.value / 4.0});
  std::vector<SparseSymMatrixd> constraints;
  constraints.reserve(static_cast<std::size_t>(graph.n));
  for (Index i = 0; i < graph.n; ++i)
    constraints.emplace_back(graph.n, std::vector<SymEntry<double>>{{i, i, 1.0}});
  return SdpProblemd(SparseSymMatrixd(graph.n, std::move(c)), std::move(constraints),
                     Vectord::Ones(graph.n), ProblemClass::maxcut, ObjectiveSense::maximize, {},
                     "maxcut");
}

GsetGraph gen_random_graph(Index n, double density, std::uint64_t seed) {
  if (n < 2) throw InvalidInput("gen_random_graph: need at least two vertices");
  if (!(density > 0 && density <= 1)) throw InvalidInput("gen_random_graph: density must be in (0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  GsetGraph g;
  g.n = n;
  for (Index i = 1; i <= n; ++i)
    for (Index j = i + 1; j <= n; ++j)
      if (unif(rng) < density) g.edges.push_back({i, j, 1.0});
  return g;
}

void validate(const McInstance& inst) {
  if (inst.p < 1 || inst.q < 1) throw InvalidInput("McInstance: dimensions must be positive");
  if (inst.observed.empty()) throw InvalidInput("McInstance: no observations");
  std::set<std::pair<Index, Index>> seen;
  for (const auto& o : inst.observed) {
    if (o.i < 0 || o.j < 0 || o.i >= inst.p || o.j >= inst.q)
      throw InvalidInput("McInstance: observation (" + std::to_string(o.i) + "," +
                         std::to_string(o.j) + ") out of range");
    if (!std::isfinite(o.value)) throw InvalidInput("McInstance: non-finite observation");
    if (!seen.emplace(o.i, o.j).second)
      throw InvalidInput("McInstance: duplicate observation (" + std::to_string(o.i) + "," +
                         std::to_string(o.j) + ")");
  }
}

McInstance gen_mc_random(Index p, Index q, Index rank, double sample_fraction, std::uint64_t seed) {
  if (!(sample_fraction > 0 && sample_fraction <= 1))
    throw InvalidInput("gen_mc_random: sample fraction must be in (0, 1]");
  if (p < 1 || q < 1) throw InvalidInput("gen_mc_random: dimensions must be positive");
  if (rank < 1 || rank > std::min(p, q))
    throw InvalidInput("gen_mc_random: rank must be in [1, min(p, q)]");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  DenseMatrixd L(p, rank), R(q, rank);
  for (Index i = 0; i < p; ++i)
    for (Index k = 0; k < rank; ++k) L(i, k) = gauss(rng);
  for (Index j = 0; j < q; ++j)
    for (Index k = 0; k < rank; ++k) R(j, k) = gauss(rng);

  McInstance inst;
  inst.p = p;
  inst.q = q;
  inst.rank = rank;
  inst.hidden = L * R.transpose();

  // Selection sampling (Knuth, Algorithm S): uniform without replacement, output in order.
  const long total = static_cast<long>(p) * static_cast<long>(q);
  const long wanted =
      std::clamp<long>(std::lround(sample_fraction * static_cast<double>(total)), 1, total);
  inst.observed.reserve(static_cast<std::size_t>(wanted));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  long chosen = 0;
  for (long t = 0; t < total && chosen < wanted; ++t) {
    if (static_cast<double>(total - t) * unif(rng) < static_cast<double>(wanted - chosen)) {
      const Index i = static_cast<Index>(t / q);
      const Index j = static_cast<Index>(t % q);
      inst.observed.push_back({i, j, inst.hidden(i, j)});
      ++chosen;
    }
  }
  return inst;
}

SdpProblemd gen_matrix_completion(const McInstance& inst) {
  validate(inst);
  const Index n = inst.p + inst.q;
  std::vector<SparseSymMatrixd> constraints;
  constraints.reserve(inst.observed.size());
  Vectord b(static_cast<Index>(inst.observed.size()));
  for (std::size_t k = 0; k < inst.observed.size(); ++k) {
    const auto& o = inst.observed[k];
    constraints.emplace_back(n, std::vector<SymEntry<double>>{{o.i, inst.p + o.j, 1.0}});
    b[static_cast<Index>(k)] = 2.0 * o.value;
  }
  return SdpProblemd(SparseSymMatrixd::identity(n), std::move(constraints), std::move(b),
                     ProblemClass::matrix_completion, ObjectiveSense::minimize, {},
                     "mc_" + std::to_string(inst.p) + "x" + std::to_string(inst.q));
}

}  // namespace lorank
