#include <doctest.h>

#include <cmath>
#include <random>

#include "lorank/admm.hpp"
#include "oracles/dense_sdp.hpp"
#include "support.hpp"

using namespace lorank;
using testing_support::random_factor;
using testing_support::random_problem;
using testing_support::random_vector;

namespace {

SplitState<double> random_state(const SdpProblemd& P, Index r, std::mt19937_64& rng, double rho,
                                 double gamma) {
  return make_split_state(P, random_factor(P.n(), r, rng), random_factor(P.n(), r, rng),
                          random_vector(P.m(), rng, 0.5), rho, gamma);
}

}  // namespace

TEST_CASE("split Lagrangian matches dense evaluation") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    const auto P = random_problem(8, 5, seed);
    const auto s = random_state(P, 2, rng, 3.0, 1.5);
    const double want = oracle::split_lagrangian(oracle::dense(P), s.U, s.V, s.lambda, s.rho, s.gamma);
    CHECK(split_lagrangian(P, s) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("normal operator matches the explicit nr x nr matrix") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    std::mt19937_64 rng(seed);
    const Index n = 2 + static_cast<Index>(seed % 5), r = 1 + static_cast<Index>(seed % 2);
    const auto P = random_problem(n, 4, seed);
    const Factord W = random_factor(n, r, rng), X = random_factor(n, r, rng);
    const Factord got = normal_operator_apply(P, W, 2.5, 0.7, X);
    const Eigen::VectorXd want = oracle::normal_matrix(oracle::dense(P), W, 2.5, 0.7) * oracle::vec(X);
    CHECK((oracle::vec(got) - want).norm() <= 1e-12 * (1 + want.norm()));
  }
}

TEST_CASE("normal operator closed forms") {
  std::mt19937_64 rng(2);
  const auto P = random_problem(5, 3, 2);
  const Factord W = random_factor(5, 2, rng), X = random_factor(5, 2, rng);
  CHECK(normal_operator_apply(P, W, 0.0, 3.0, X) == Factord(3.0 * X));

  const SdpProblemd I(SparseSymMatrixd(4), {SparseSymMatrixd::identity(4)}, Vectord::Ones(1));
  Factord w = random_factor(4, 1, rng);
  w /= w.norm();
  CHECK(normal_operator_apply(I, w, 2.0, 0.5, w).isApprox(2.5 * w, 1e-14));
}

TEST_CASE("operator is bounded below by gamma") {
  std::mt19937_64 rng(7);
  const auto P = random_problem(9, 6, 7);
  const Factord W = random_factor(9, 2, rng);
  for (int k = 0; k < 100; ++k) {
    const Factord X = random_factor(9, 2, rng);
    const double q = X.cwiseProduct(normal_operator_apply(P, W, 4.0, 0.8, X)).sum();
    CHECK(q >= 0.8 * X.squaredNorm() - 1e-10);
  }
}

TEST_CASE("subproblem rhs matches the dense formula and its closed forms") {
  std::mt19937_64 rng(3);
  const auto P = random_problem(7, 4, 3);
  const auto D = oracle::dense(P);
  const Factord W = random_factor(7, 2, rng);
  const Vectord lam = random_vector(4, rng);
  const Factord got = subproblem_rhs(P, W, lam, 2.0, 0.9);
  const Eigen::MatrixXd want = oracle::subproblem_rhs(D, W, lam, 2.0, 0.9);
  CHECK((got - want).norm() <= 1e-12 * (1 + want.norm()));

  // lambda = rho b cancels the multiplier terms.
  const Factord cancel = subproblem_rhs(P, W, Vectord(2.0 * P.rhs()), 2.0, 0.9);
  const Eigen::MatrixXd expect = -(D.C - 0.9 * Eigen::MatrixXd::Identity(7, 7)) * W;
  CHECK((cancel - expect).norm() <= 1e-12 * (1 + expect.norm()));

  const SdpProblemd Z(SparseSymMatrixd(7), {SparseSymMatrixd::identity(7)}, Vectord(Vectord::Zero(1)));
  CHECK(subproblem_rhs(Z, W, Vectord(Vectord::Zero(1)), 1.0, 0.9).isApprox(0.9 * W));
}

TEST_CASE("U step solves its stationarity system") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    const auto P = random_problem(10, 6, seed);
    auto s = random_state(P, 2, rng, 2.0, 1.0);
    AdmmSettings<double> cfg;
    CgWorkspace<double> ws;
    admm_u_step(P, s, cfg, ws);
    const Factord rhs = subproblem_rhs(P, s.V, s.lambda, s.rho, s.gamma);
    const Factord res = normal_operator_apply(P, s.V, s.rho, s.gamma, s.U) - rhs;
    CHECK(res.norm() <= 10 * cfg.cg_tol * (1 + rhs.norm()));
  }
}

TEST_CASE("sweep: dual step identity and both descent relations") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    const auto P = random_problem(12, 7, seed);
    auto s = random_state(P, 3, rng, 1.0, 2.0);
    for (int k = 0; k < 5; ++k) {
      const Vectord lam0 = s.lambda;
      const auto d = admm_sweep(P, s);
      CHECK(s.lambda == Vectord(lam0 + s.rho * s.residual));
      const double lhs1 = d.lagrangian_after_dual - d.lagrangian_after_primal;
      const double rhs1 = d.dlambda_norm * d.dlambda_norm / s.rho;
      CHECK(std::abs(lhs1 - rhs1) <= 1e-8 * std::abs(rhs1) + 1e-12 * (1 + std::abs(d.lagrangian_after_dual)));
      const double decrease = d.lagrangian_before - d.lagrangian_after_primal;
      const double slack = 10 * 1e-8 * (1 + std::abs(d.lagrangian_before));
      CHECK(decrease >= s.gamma / 2 * (d.du_norm * d.du_norm + d.dv_norm * d.dv_norm) - slack);
    }
  }
}

TEST_CASE("fixed point is preserved") {
  // Feasible U = V with C + A^*(lambda) annihilating V gives a stationary triple.
  const SdpProblemd P(SparseSymMatrixd::identity(3), {SparseSymMatrixd::identity(3)}, Vectord::Ones(1));
  Factord U = Factord::Zero(3, 1);
  U(0, 0) = 1;
  auto s = make_split_state(P, U, U, Vectord(Vectord::Constant(1, -1.0)), 5.0, 1.0);
  const auto d = admm_sweep(P, s);
  CHECK(d.du_norm <= 1e-7);
  CHECK(d.dv_norm <= 1e-7);
  CHECK(d.dlambda_norm <= 1e-7);
}

TEST_CASE("warm start choice does not change the solution") {
  std::mt19937_64 rng(11);
  const auto P = random_problem(10, 6, 11);
  auto a = random_state(P, 2, rng, 2.0, 1.0);
  auto b = a;
  AdmmSettings<double> pa, pb;
  pb.warm_start = CgWarmStart::previous;
  admm_sweep(P, a, pa);
  admm_sweep(P, b, pb);
  CHECK((a.U - b.U).norm() <= 1e-6 * (1 + a.U.norm()));
  CHECK((a.V - b.V).norm() <= 1e-6 * (1 + a.V.norm()));
}

TEST_CASE("penalty schedule") {
  CHECK(penalty_schedule(100.0, 5) == doctest::Approx(120.0));
  CHECK(penalty_schedule(4900.0, 10) == 5000.0);
  CHECK(penalty_schedule(100.0, 3) == 100.0);
  CHECK(penalty_schedule(6000.0, 5) == 6000.0);
  CHECK_THROWS_AS(penalty_schedule(1.0, 0), InvalidInput);
}

TEST_CASE("termination rules") {
  const SdpProblemd P(SparseSymMatrixd::identity(2), {SparseSymMatrixd::identity(2)}, Vectord(Vectord::Zero(1)));
  Factord U = Factord::Zero(2, 1);
  U(0, 0) = std::sqrt(2e-5);
  auto s = make_split_state(P, U, U, Vectord(Vectord::Zero(1)), 1.0, 1.0);
  const auto t = check_termination(P, s, s.V, 1e-5);
  CHECK(t.primal_infeas == doctest::Approx(2e-5));
  CHECK_FALSE(t);

  auto feas = make_split_state(P, Factord(Factord::Zero(2, 1)), Factord(Factord::Zero(2, 1)),
                               Vectord(Vectord::Zero(1)), 1.0, 1.0);
  CHECK(check_termination(P, feas, feas.V, 1e-12));
  Factord moved = Factord::Ones(2, 1);
  CHECK(check_termination(P, feas, moved, 1e-12, StopRule::primal));
  const auto both = check_termination(P, feas, moved, 1e-12, StopRule::primal_and_step);
  CHECK_FALSE(both);
  CHECK(both.step_term == doctest::Approx(std::sqrt(2.0) / (1 + std::sqrt(2.0))));
}

TEST_CASE("state validation") {
  const auto P = random_problem(4, 2, 1);
  const Factord U = Factord::Ones(4, 2);
  CHECK_THROWS_AS(make_split_state(P, U, U, Vectord(Vectord::Zero(2)), 0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(make_split_state(P, U, U, Vectord(Vectord::Zero(2)), 1.0, -1.0), InvalidInput);
  CHECK_THROWS_AS(make_split_state(P, Factord(Factord::Ones(4, 5)), Factord(Factord::Ones(4, 5)),
                                   Vectord(Vectord::Zero(2)), 1.0, 1.0),
                  InvalidInput);
  CHECK_THROWS_AS(make_split_state(P, U, U, Vectord(Vectord::Zero(3)), 1.0, 1.0), DimensionMismatch);
}
