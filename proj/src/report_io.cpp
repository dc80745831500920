#include "lorank/report_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include "lorank/errors.hpp"

namespace lorank {

namespace {

constexpr const char* kMagic = "LRSDP1";

double read_labeled(std::istream& in, const char* label) {
  std::string key;
  double v = 0;
  if (!(in >> key >> v) || key != label)
    throw IoError(std::string("solution file: expected '") + label + "'");
  return v;
}

// Quote a CSV field only when it needs it.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

void write_solution(const SolveReport& report, std::ostream& out) {
  const Factord& U = report.factor;
  out << kMagic << '\n' << U.rows() << ' ' << U.cols() << '\n';
  out << std::setprecision(17);
  out << "objective " << report.objective << '\n';
  out << "p_infeas " << report.p_infeas << '\n';
  out << "d_infeas " << report.d_infeas << '\n';
  out << "pd_gap " << report.pd_gap << '\n';
  for (Index i = 0; i < U.rows(); ++i) {
    for (Index k = 0; k < U.cols(); ++k) out << (k ? " " : "") << U(i, k);
    out << '\n';
  }
  if (!out) throw IoError("solution file: write failed");
}

void write_solution(const SolveReport& report, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  write_solution(report, f);
}

SolutionFile read_solution(std::istream& in) {
  std::string magic;
  if (!(in >> magic) || magic != kMagic) throw IoError("solution file: bad header");
  Index n = 0, r = 0;
  if (!(in >> n >> r) || n < 0 || r < 0) throw IoError("solution file: bad dimensions");
  SolutionFile s;
  s.objective = read_labeled(in, "objective");
  s.p_infeas = read_labeled(in, "p_infeas");
  s.d_infeas = read_labeled(in, "d_infeas");
  s.pd_gap = read_labeled(in, "pd_gap");
  s.factor.resize(n, r);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < r; ++k)
      if (!(in >> s.factor(i, k))) throw IoError("solution file: truncated factor");
  return s;
}

SolutionFile read_solution(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  try {
    return read_solution(f);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(const SolveReport& r, std::ostream& out) {
  out << csv_field(r.name) << ',' << r.n << ',' << r.m << ',' << r.phase1_inner_total << ','
      << r.phase2_iters << ',' << r.cg_total << ',' << std::setprecision(6) << r.time_total << ','
      << std::setprecision(6) << std::scientific << r.p_infeas << ',' << r.d_infeas << ','
      << r.pd_gap << std::defaultfloat << '\n';
}

void write_csv_row(const SolveReport& report, const std::filesystem::path& path) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f) throw IoError("cannot open " + path.string() + " for appending");
  if (fresh) write_csv_header(f);
  write_csv_row(report, f);
  if (!f) throw IoError(path.string() + ": write failed");
}

}  // namespace lorank
