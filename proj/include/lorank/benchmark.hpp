#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lorank/config.hpp"

namespace lorank {

enum class InputKind { sdpa, gset };

struct BenchmarkEntry {
  InputKind kind = InputKind::sdpa;
  std::filesystem::path path;
};

/**
 * Manifest: one problem per line, either `sdpa <path>`, `gset <path>` or a
 * bare path (kind from the extension: .dat-s is SDPA, anything else Gset).
 * Blank lines and text after '#' are ignored. Relative paths resolve against
 * `base`.
 */
std::vector<BenchmarkEntry> parse_manifest(std::istream& in, const std::filesystem::path& base = {});
std::vector<BenchmarkEntry> parse_manifest_file(const std::filesystem::path& path);

struct BenchmarkResult {
  std::vector<SolveReport> reports;  // one per entry; load failures have an empty factor
  double sgm = 0;                    // shifted geometric mean of solve times
};

/// Solves every entry. A failing entry becomes a numerical_failure row whose
/// time counts as the time limit; the batch never aborts.
BenchmarkResult run_benchmark(const std::vector<BenchmarkEntry>& entries, const SolverConfig& config,
                              double shift = 10.0);

SdpProblemd load_problem(const BenchmarkEntry& entry);

}  // namespace lorank
