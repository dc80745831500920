// lorank command line: solve, gen, bench.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "lorank/lorank.hpp"

namespace {

using namespace lorank;

RankPolicy parse_rank(const std::string& s) {
  RankPolicy p;
  if (s == "log") p.mode = RankMode::log_small;
  else if (s == "log-large") p.mode = RankMode::log_large;
  else if (s == "sqrt2m") p.mode = RankMode::sqrt2m;
  else {
    std::size_t pos = 0;
    long r = 0;
    try {
      r = std::stol(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || r < 1) throw CLI::ValidationError("--rank", "expected log, log-large, sqrt2m or a positive integer");
    p.mode = RankMode::fixed;
    p.fixed_rank = r;
  }
  return p;
}

void print_report(const SolveReport& r) {
  std::cout << std::setprecision(10)
            << "problem        " << r.name << " (n = " << r.n << ", m = " << r.m << ", "
            << to_string(r.problem_class) << ")\n"
            << "status         " << to_string(r.status) << '\n'
            << "objective      " << r.objective << '\n'
            << std::setprecision(3) << std::scientific
            << "p_infeas       " << r.p_infeas << "  (1-norm " << r.p_infeas_one << ", 2-norm "
            << r.p_infeas_two << ")\n"
            << "d_infeas       " << r.d_infeas << (r.dual_estimate_converged ? "" : "  (estimate)") << '\n'
            << "pd_gap         " << r.pd_gap << '\n'
            << std::defaultfloat << std::setprecision(6)
            << "phase I        " << r.phase1_outer << " outer, " << r.phase1_inner_total
            << " inner, rank " << r.initial_rank << " -> " << r.final_rank << '\n'
            << "phase II       " << r.phase2_iters << " iterations, " << r.cg_total << " CG ("
            << r.cg_avg << " avg), rho " << r.rho_switch << " -> " << r.rho_final << '\n'
            << "time           " << r.time_phase1 << " + " << r.time_phase2 << " = "
            << r.time_total << " s\n";
  if (!r.message.empty()) std::cout << "note           " << r.message << '\n';
}

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return 0;
    case SolveStatus::iter_cap:
    case SolveStatus::time_cap: return 2;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank SDP solver"};
  app.require_subcommand(1);

  SolverConfig cfg;
  std::string rank_arg = "log";
  std::optional<double> switch_tol, h, gamma;
  std::string csv_out, factor_out;
  bool verbose = false, gamma_equal_rho = false, stop_primal = false;

  auto add_solver_flags = [&](CLI::App* sub) {
    sub->set_help_flag("--help", "print this help and exit");
    sub->add_option("--eps", cfg.epsilon, "Phase II tolerance")->capture_default_str();
    sub->add_option("--switch-tol", switch_tol, "phase switch tolerance");
    sub->add_option("--rank", rank_arg, "log | log-large | sqrt2m | <int>")->capture_default_str();
    sub->add_option("--rank-escalation-factor", cfg.rank.escalation_factor)->capture_default_str();
    sub->add_option("--rank-difficulty-threshold", cfg.rank.difficulty_threshold)->capture_default_str();
    sub->add_option("--h", h, "penalty multiplier at the phase switch");
    sub->add_option("--rho0", cfg.rho_init)->capture_default_str();
    sub->add_option("--gamma", gamma, "fixed proximal weight (default: scaled slack norm)");
    sub->add_option("--gamma-scale", cfg.gamma_scale, "multiplier on the slack norm")->capture_default_str();
    sub->add_flag("--gamma-equal-rho", gamma_equal_rho, "gamma = rho at the phase switch");
    sub->add_flag("--stop-primal", stop_primal, "stop Phase II on primal infeasibility alone");
    sub->add_option("--admm-cap", cfg.admm_cap)->capture_default_str();
    sub->add_option("--seed", cfg.seed)->capture_default_str();
    sub->add_option("--time-limit", cfg.time_limit_s, "seconds")->capture_default_str();
    sub->add_flag("-v,--verbose", verbose);
  };

  auto* solve_cmd = app.add_subcommand("solve", "solve an SDPA (.dat-s) or Gset problem");
  std::string solve_file;
  bool as_gset = false;
  solve_cmd->add_option("file", solve_file)->required()->check(CLI::ExistingFile);
  solve_cmd->add_flag("--gset", as_gset, "read the file as a Gset graph (MaxCut)");
  solve_cmd->add_option("--out", csv_out, "append a CSV row");
  solve_cmd->add_option("--factor-out", factor_out, "write the recombined factor");
  add_solver_flags(solve_cmd);

  auto* gen_cmd = app.add_subcommand("gen", "write a generated problem in SDPA format");
  gen_cmd->require_subcommand(1);
  std::string gen_out;

  auto* gen_maxcut_cmd = gen_cmd->add_subcommand("maxcut", "MaxCut relaxation of a graph");
  std::string gset_in;
  long rand_n = 0;
  double density = 0.1;
  std::uint64_t gen_seed = 42;
  auto* gset_opt = gen_maxcut_cmd->add_option("--gset", gset_in)->check(CLI::ExistingFile);
  auto* rand_opt = gen_maxcut_cmd->add_option("--random", rand_n, "random graph order");
  gset_opt->excludes(rand_opt);
  gen_maxcut_cmd->add_option("--density", density)->capture_default_str();
  gen_maxcut_cmd->add_option("--seed", gen_seed)->capture_default_str();
  gen_maxcut_cmd->add_option("--out", gen_out)->required();

  auto* gen_mc_cmd = gen_cmd->add_subcommand("mc", "nuclear-norm matrix completion");
  long p = 100, q = 100, hidden_rank = 3;
  double fraction = 0.2;
  gen_mc_cmd->add_option("--p", p)->capture_default_str();
  gen_mc_cmd->add_option("--q", q)->capture_default_str();
  gen_mc_cmd->add_option("--rank", hidden_rank)->capture_default_str();
  gen_mc_cmd->add_option("--fraction", fraction)->capture_default_str();
  gen_mc_cmd->add_option("--seed", gen_seed)->capture_default_str();
  gen_mc_cmd->add_option("--out", gen_out)->required();

  auto* bench_cmd = app.add_subcommand("bench", "solve every problem in a manifest");
  std::string manifest;
  bench_cmd->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", csv_out, "CSV file (default: stdout)");
  add_solver_flags(bench_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.rank = [&] {
      RankPolicy r = parse_rank(rank_arg);
      r.escalation_factor = cfg.rank.escalation_factor;
      r.difficulty_threshold = cfg.rank.difficulty_threshold;
      return r;
    }();
    cfg.switch_tol = switch_tol;
    cfg.heuristic_factor = h;
    if (gamma) {
      cfg.gamma_rule = GammaRule::fixed;
      cfg.gamma = *gamma;
    } else if (gamma_equal_rho) {
      cfg.gamma_rule = GammaRule::equal_rho;
    }
    if (stop_primal) cfg.stop_rule = StopRule::primal;
    if (verbose) cfg.log = [](std::string_view s) { std::cerr << s << '\n'; };

    if (*solve_cmd) {
      const BenchmarkEntry entry{as_gset ? InputKind::gset : InputKind::sdpa, solve_file};
      const SolveReport rep = solve(load_problem(entry), cfg);
      print_report(rep);
      if (!csv_out.empty()) write_csv_row(rep, std::filesystem::path(csv_out));
      if (!factor_out.empty()) write_solution(rep, std::filesystem::path(factor_out));
      return exit_code(rep.status);
    }

    if (*gen_maxcut_cmd) {
      GsetGraph g;
      if (!gset_in.empty()) g = parse_gset_file(gset_in);
      else if (rand_n > 0) g = gen_random_graph(rand_n, density, gen_seed);
      else throw InvalidInput("gen maxcut: give --gset <file> or --random <n>");
      write_sdpa_file(gen_maxcut(g), gen_out);
      return 0;
    }

    if (*gen_mc_cmd) {
      write_sdpa_file(gen_matrix_completion(gen_mc_random(p, q, hidden_rank, fraction, gen_seed)),
                      gen_out);
      return 0;
    }

    if (*bench_cmd) {
      const auto res = run_benchmark(parse_manifest_file(manifest), cfg);
      std::ofstream file;
      if (!csv_out.empty()) {
        file.open(csv_out);
        if (!file) throw IoError("cannot open " + csv_out);
      }
      std::ostream& out = csv_out.empty() ? std::cout : file;
      write_csv_header(out);
      int worst = 0;
      for (const auto& r : res.reports) {
        write_csv_row(r, out);
        if (!r.message.empty()) std::cerr << r.name << ": " << r.message << '\n';
        worst = std::max(worst, exit_code(r.status) == 0 ? 0 : 2);
      }
      std::cerr << "sgm(time, shift 10) = " << res.sgm << " s\n";
      return worst;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
