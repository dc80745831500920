#include "lorank/benchmark.hpp"

#include <fstream>
#include <sstream>

#include "lorank/driver.hpp"
#include "lorank/errors.hpp"
#include "lorank/generators.hpp"
#include "lorank/sdpa_io.hpp"

namespace lorank {

std::vector<BenchmarkEntry> parse_manifest(std::istream& in, const std::filesystem::path& base) {
  std::vector<BenchmarkEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first, second, extra;
    if (!(ls >> first)) continue;
    BenchmarkEntry e;
    if (first == "sdpa" || first == "gset") {
      if (!(ls >> second)) throw ParseError("manifest: missing path after '" + first + "'", lineno);
      e.kind = first == "sdpa" ? InputKind::sdpa : InputKind::gset;
      e.path = second;
    } else {
      e.path = first;
      e.kind = e.path.extension() == ".dat-s" ? InputKind::sdpa : InputKind::gset;
    }
    if (ls >> extra) throw ParseError("manifest: unexpected text '" + extra + "'", lineno);
    if (e.path.is_relative() && !base.empty()) e.path = base / e.path;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<BenchmarkEntry> parse_manifest_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  try {
    return parse_manifest(f, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.detail(), e.line());
  }
}

SdpProblemd load_problem(const BenchmarkEntry& entry) {
  if (entry.kind == InputKind::sdpa) return parse_sdpa_file(entry.path);
  return gen_maxcut(parse_gset_file(entry.path)).with_name(entry.path.stem().string());
}

BenchmarkResult run_benchmark(const std::vector<BenchmarkEntry>& entries, const SolverConfig& config,
                              double shift) {
  if (entries.empty()) throw InvalidInput("run_benchmark: empty problem list");
  BenchmarkResult res;
  std::vector<double> times;
  for (const auto& e : entries) {
    SolveReport rep;
    try {
      rep = solve(load_problem(e), config);
    } catch (const std::exception& ex) {
      rep = SolveReport{};
      rep.name = e.path.stem().string();
      rep.status = SolveStatus::numerical_failure;
      rep.message = ex.what();
      rep.time_total = config.time_limit_s;
    }
    if (config.log) config.log(rep.name + ": " + to_string(rep.status));
    times.push_back(rep.status == SolveStatus::converged ? rep.time_total : config.time_limit_s);
    res.reports.push_back(std::move(rep));
  }
  res.sgm = sgm(times, shift);
  return res;
}

}  // namespace lorank
