#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lorank/config.hpp"

namespace lorank {

/**
 * Solution dump, text, version tag `LRSDP1`:
 *
 *     LRSDP1
 *     <n> <r>
 *     objective <value>
 *     p_infeas <value>
 *     d_infeas <value>
 *     pd_gap <value>
 *     <n lines of r values: the factor Uhat, row-major>
 *
 * Values are written with 17 significant digits, so a read returns the exact doubles.
 */
void write_solution(const SolveReport& report, std::ostream& out);
void write_solution(const SolveReport& report, const std::filesystem::path& path);

struct SolutionFile {
  double objective = 0;
  double p_infeas = 0;
  double d_infeas = 0;
  double pd_gap = 0;
  Factord factor;
};

SolutionFile read_solution(std::istream& in);
SolutionFile read_solution(const std::filesystem::path& path);

/// CSV columns: name,n,m,phase1_iters,phase2_iters,cg_total,time_s,p_infeas,d_infeas,pd_gap.
/// phase1_iters counts inner (L-BFGS) iterations; time_s is the solve time.
inline constexpr const char* kCsvHeader =
    "name,n,m,phase1_iters,phase2_iters,cg_total,time_s,p_infeas,d_infeas,pd_gap";

void write_csv_header(std::ostream& out);
void write_csv_row(const SolveReport& report, std::ostream& out);

/// Appends a row, writing the header first when the file is new or empty.
void write_csv_row(const SolveReport& report, const std::filesystem::path& path);

}  // namespace lorank
