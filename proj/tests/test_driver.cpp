#include <doctest.h>

#include <random>

#include "lorank/driver.hpp"
#include "lorank/generators.hpp"
#include "lorank/sdpa_io.hpp"
#include "oracles/dense_sdp.hpp"
#include "support.hpp"

using namespace lorank;
using namespace testing_support;

TEST_CASE("triangle maxcut") {
  const auto rep = solve(triangle_maxcut());
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.problem_class == ProblemClass::maxcut);
  CHECK(std::abs(rep.objective - 2.25) <= 1e-3);
  CHECK(rep.p_infeas < 1e-5);
  CHECK(rep.factor.rows() == 3);
}

TEST_CASE("trace-one problem") {
  // min <I, X> s.t. tr X = 1 stored from max <-I, X>.
  const auto p = parse_sdpa_file(std::string(LORANK_TEST_DATA) + "/minimal.dat-s");
  const auto rep = solve(p);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(std::abs(rep.stored_objective - 1.0) < 1e-4);
  CHECK(rep.objective == -rep.stored_objective);
  CHECK(rep.p_infeas < 1e-5);
}

TEST_CASE("fully observed rank-one completion equals twice the nuclear norm") {
  Eigen::Vector2d u(1.0, -2.0), v(0.5, 3.0);
  const Eigen::Matrix2d M = u * v.transpose();
  McInstance inst;
  inst.p = inst.q = 2;
  inst.rank = 1;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) inst.observed.push_back({i, j, M(i, j)});
  const double nuclear = Eigen::JacobiSVD<Eigen::Matrix2d>(M).singularValues().sum();
  const auto rep = solve(gen_matrix_completion(inst));
  CHECK(rep.status == SolveStatus::converged);
  CHECK(std::abs(rep.objective - 2 * nuclear) <= 1e-3 * 2 * nuclear);
}

TEST_CASE("phase switch") {
  const auto p = random_problem(8, 2, 3);
  std::mt19937_64 rng(5);
  BmState<double> bm;
  bm.R = random_factor(8, 3, rng);
  bm.lambda = Vectord(2);
  bm.lambda << 4.0, -2.0;
  bm.rho = 3.5;

  const auto s = switch_to_split(p, bm, 10.0, GammaRule::equal_rho, 0.0);
  CHECK(s.lambda[0] == 2.0);
  CHECK(s.lambda[1] == -1.0);
  CHECK(s.rho == 35.0);
  CHECK(s.gamma == 35.0);
  CHECK(s.U == bm.R);
  CHECK(s.V == bm.R);
  // Same point, so the objective and residual carry over.
  CHECK(objective_value(p, s.U, s.V) == objective_value(p, bm.R, bm.R));
  CHECK(s.residual == constraint_residual(p, bm.R, bm.R));

  CHECK(switch_to_split(p, bm, 2.0, GammaRule::fixed, 0.75).gamma == 0.75);

  // slack_norm: scale * max(1, ||C + A^*(lambda)||_2), dense oracle for the norm.
  const auto d = oracle::dense(p);
  const Eigen::MatrixXd S = d.C + oracle::adjoint(d, bm.lambda);
  const double norm = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S).eigenvalues().cwiseAbs().maxCoeff();
  const double g = switch_to_split(p, bm, 1.0, GammaRule::slack_norm, 2.0).gamma;
  CHECK(std::abs(g - 2.0 * std::max(1.0, norm)) <= 1e-3 * g);
}

TEST_CASE("class detection and heuristic factor") {
  const auto mc = gen_maxcut(gen_random_graph(20, 0.3, 1));
  CHECK(detect_class(mc.with_tag(ProblemClass::generic)) == ProblemClass::maxcut);
  CHECK(detect_class(random_problem(6, 6, 1)) == ProblemClass::generic);
  CHECK(detect_class(random_problem(6, 3, 1)) == ProblemClass::generic);

  const auto g = random_problem(6, 3, 1);
  CHECK(default_heuristic_factor(ProblemClass::maxcut, g) == 10.0);
  CHECK(default_heuristic_factor(ProblemClass::matrix_completion, g) == 5.0);
  CHECK(default_heuristic_factor(ProblemClass::generic, g) == 1.0);
  CHECK(default_heuristic_factor(ProblemClass::generic, g.with_name("gpp124-1")) == 10.0);
  CHECK(default_heuristic_factor(ProblemClass::generic, g.with_name("qap5")) == 10.0);
  CHECK(default_heuristic_factor(ProblemClass::generic, g.with_name("g1_mb")) == 10.0);
  CHECK(default_heuristic_factor(ProblemClass::generic, g.with_name("theta1")) == 1.0);
}

TEST_CASE("report fields") {
  const auto p = gen_maxcut(gen_random_graph(30, 0.2, 4));
  SolverConfig cfg;
  std::vector<std::string> lines;
  cfg.log = [&](std::string_view s) { lines.emplace_back(s); };
  const auto rep = solve(p, cfg);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.n == 30);
  CHECK(rep.m == 30);
  CHECK(rep.heuristic_factor == 10.0);
  CHECK(rep.switch_tol == 1e-2);
  CHECK(rep.rho_switch > 0);
  CHECK(rep.dual == -0.5 * rep.multipliers);
  CHECK(rep.factor == 0.5 * (rep.U + rep.V));
  CHECK(rep.rank_history.front() == rep.initial_rank);
  CHECK(rep.time_total >= rep.time_phase1);
  CHECK_FALSE(lines.empty());
}

TEST_CASE("determinism") {
  const auto p = gen_maxcut(gen_random_graph(40, 0.15, 9));
  const auto a = solve(p);
  const auto b = solve(p);
  CHECK(same_outcome(a, b));
  SolverConfig other;
  other.seed = 7;
  CHECK_FALSE(same_outcome(a, solve(p, other)));
}

TEST_CASE("caps are reported") {
  const auto p = gen_maxcut(gen_random_graph(40, 0.15, 9));
  SolverConfig cfg;
  cfg.admm_cap = 1;
  cfg.epsilon = 1e-12;
  CHECK(solve(p, cfg).status == SolveStatus::iter_cap);

  SolverConfig no_time;
  no_time.time_limit_s = 0;
  const auto rep = solve(p, no_time);
  CHECK(rep.status == SolveStatus::time_cap);
  CHECK(rep.factor.rows() == 40);
}
