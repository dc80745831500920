#pragma once

#include <cstdint>
#include <vector>

#include "lorank/problem.hpp"
#include "lorank/sdpa_io.hpp"

namespace lorank {

/// Graph Laplacian: L_ii = sum_k w_ik, L_ij = -w_ij on edges.
SparseSymMatrixd laplacian(const GsetGraph& graph);

/**
 * MaxCut relaxation  max <L/4, X>  s.t.  X_ii = 1, X PSD.
 * Stored as the minimization of <-L/4, X> with ObjectiveSense::maximize.
 */
SdpProblemd gen_maxcut(const GsetGraph& graph);

/// Erdos-Renyi style graph on n vertices with edge probability `density`
/// and unit weights (Gset G1-G10 style).
GsetGraph gen_random_graph(Index n, double density, std::uint64_t seed = 42);

struct McObservation {
  Index i;  // 0-based row of M
  Index j;  // 0-based column of M
  double value;
};

/// Partially observed p x q matrix.
struct McInstance {
  Index p = 0;
  Index q = 0;
  Index rank = 0;                        // rank of the hidden matrix (metadata)
  std::vector<McObservation> observed;   // sorted by (i, j)
  DenseMatrixd hidden;                   // the full matrix when known, else empty
};

void validate(const McInstance& instance);

/**
 * Hidden M = L R^T with standard Gaussian L (p x rank) and R (q x rank);
 * round(fraction * p * q) positions (at least one) drawn uniformly without
 * replacement by selection sampling. Deterministic for a fixed seed.
 */
McInstance gen_mc_random(Index p, Index q, Index rank, double sample_fraction,
                         std::uint64_t seed = 42);

/**
 * Nuclear-norm SDP  min <I, X>  s.t.  2 X_{i, p+j} = 2 M_ij  for (i, j) observed,
 * where X = [W1 Y; Y^T W2] has order p + q and Y occupies rows 0..p-1,
 * columns p..p+q-1. Each constraint matrix holds the single upper entry
 * (i, p + j) = 1, so <A, X> = 2 Y_ij.
 */
SdpProblemd gen_matrix_completion(const McInstance& instance);

}  // namespace lorank
