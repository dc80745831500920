#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lorank/problem.hpp"

namespace lorank {

/**
 * SDPA sparse format (.dat-s).
 *
 * Layout: optional comment lines starting with '"' or '*'; m; nblocks; the
 * block sizes (negative = diagonal block); m objective coefficients c; then
 * entry lines `matno blkno i j value` with 1-based block-local indices and
 * matno 0 for F0. Characters `{ } ( ) ,` are read as whitespace in the
 * numeric header sections and text after the leading number on the m and
 * nblocks lines is ignored.
 *
 * Sign convention: an SDPA file describes max <F0, X> s.t. <F_i, X> = c_i,
 * X PSD. It is loaded as the minimization of <-F0, X> with A_i = F_i and
 * b = c, tagged ObjectiveSense::maximize so reported objectives carry the
 * file's sign. Blocks are embedded block-diagonally into one matrix of order
 * sum |size|. Explicit zero values are dropped; duplicate positions are an error.
 */
SdpProblemd parse_sdpa(std::istream& in);
SdpProblemd parse_sdpa_file(const std::filesystem::path& path);

/// Inverse of parse_sdpa for problems whose entries respect block_sizes().
void write_sdpa(const SdpProblemd& problem, std::ostream& out);
void write_sdpa_file(const SdpProblemd& problem, const std::filesystem::path& path);

/// Undirected weighted graph in Gset layout (vertices 1-based).
struct GsetEdge {
  Index i;
  Index j;
  double w;
};

struct GsetGraph {
  Index n = 0;
  std::vector<GsetEdge> edges;
};

/// First line `n edge_count`, then `i j w` per edge. Self loops, out-of-range
/// vertices and repeated undirected edges are rejected.
GsetGraph parse_gset(std::istream& in);
GsetGraph parse_gset_file(const std::filesystem::path& path);
void write_gset(const GsetGraph& graph, std::ostream& out);

/// Throws InvalidInput when the graph breaks the Gset invariants.
void validate(const GsetGraph& graph);

}  // namespace lorank
