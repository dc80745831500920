#include <doctest.h>

#include <cmath>
#include <random>

#include "lorank/alm.hpp"
#include "oracles/dense_sdp.hpp"
#include "support.hpp"

using namespace lorank;
using testing_support::random_factor;
using testing_support::random_problem;
using testing_support::random_vector;

namespace {

// Central differences of the dense Lagrangian, one entry at a time.
Factord fd_gradient(const oracle::DenseSdp& D, const Factord& R, const Vectord& lam, double rho,
                    double h) {
  Factord G(R.rows(), R.cols());
  for (Index i = 0; i < R.rows(); ++i)
    for (Index k = 0; k < R.cols(); ++k) {
      Eigen::MatrixXd Rp = R, Rm = R;
      Rp(i, k) += h;
      Rm(i, k) -= h;
      G(i, k) = (oracle::bm_lagrangian(D, Rp, lam, rho) - oracle::bm_lagrangian(D, Rm, lam, rho)) / (2 * h);
    }
  return G;
}

}  // namespace

TEST_CASE("Lagrangian closed forms and dense agreement") {
  const SdpProblemd Z(SparseSymMatrixd(3), {SparseSymMatrixd::identity(3)}, Vectord(Vectord::Zero(1)));
  BmState<double> s;
  s.R = Factord::Zero(3, 2);
  s.lambda = Vectord::Zero(1);
  CHECK(bm_aug_lagrangian(Z, s) == 0.0);

  std::mt19937_64 rng(1);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto P = random_problem(9, 5, seed);
    BmState<double> t;
    t.R = random_factor(9, 3, rng);
    t.lambda = random_vector(5, rng);
    t.rho = 2.5;
    CHECK(bm_aug_lagrangian(P, t) ==
          doctest::Approx(oracle::bm_lagrangian(oracle::dense(P), t.R, t.lambda, t.rho)).epsilon(1e-12));
  }
}

TEST_CASE("feasible point with zero multipliers gives the objective") {
  const auto P = testing_support::triangle_maxcut();
  BmState<double> s;
  s.R = Factord::Identity(3, 2);
  s.R(2, 0) = 1;
  s.lambda = Vectord::Zero(3);
  s.rho = 7;
  CHECK(bm_aug_lagrangian(P, s) == objective_value(P, s.R, s.R));
}

TEST_CASE("gradient closed form for one constraint") {
  const SdpProblemd P(SparseSymMatrixd::identity(3), {SparseSymMatrixd::identity(3)}, Vectord::Ones(1));
  BmState<double> s;
  s.R = Factord(3, 1);
  s.R << 0.3, -1.2, 0.5;
  s.lambda = Vectord::Zero(1);
  s.rho = 1;
  const double nrm2 = s.R.squaredNorm();
  CHECK(bm_gradient(P, s).isApprox(2 * (1 + (nrm2 - 1)) * s.R, 1e-14));
}

TEST_CASE("gradient against central finite differences") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto P = random_problem(8, 5, seed);
    const auto D = oracle::dense(P);
    std::mt19937_64 rng(seed + 100);
    for (int pt = 0; pt < 20; ++pt) {
      BmState<double> s;
      s.R = random_factor(8, 2, rng);
      s.lambda = random_vector(5, rng);
      s.rho = 1.5;
      const Factord g = bm_gradient(P, s);
      const Factord fd = fd_gradient(D, s.R, s.lambda, s.rho, 1e-6);
      CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, g.norm()));
    }
  }
}

TEST_CASE("L-BFGS on a convex quadratic reaches the origin") {
  std::vector<SymEntry<double>> c{{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 3.0}, {3, 3, 0.5}};
  const SdpProblemd P(SparseSymMatrixd(4, c), {SparseSymMatrixd::identity(4)}, Vectord(Vectord::Zero(1)));
  std::mt19937_64 rng(4);
  BmState<double> s;
  s.R = random_factor(4, 2, rng);
  s.lambda = Vectord::Zero(1);
  s.rho = 1e-300;
  const auto res = lbfgs_minimize(P, s, 1e-10, 200);
  CHECK(res.converged);
  CHECK(res.R.norm() <= 1e-4);
}

TEST_CASE("L-BFGS on a one-dimensional quartic matches the analytic minimizer") {
  // L(x) = c x^2 + rho/2 (x^2 - 1)^2 has minimizers x^2 = 1 - c/rho; c = 0.5, rho = 4 gives 7/8.
  const SdpProblemd P(SparseSymMatrixd(1, {{0, 0, 0.5}}), {SparseSymMatrixd::identity(1)}, Vectord::Ones(1));
  BmState<double> s;
  s.R = Factord::Constant(1, 1, 0.2);
  s.lambda = Vectord::Zero(1);
  s.rho = 4;
  const auto res = lbfgs_minimize(P, s, 1e-13, 200);
  CHECK(std::abs(std::abs(res.R(0, 0)) - std::sqrt(0.875)) <= 1e-8);
}

TEST_CASE("accepted steps decrease the Lagrangian") {
  const auto P = random_problem(10, 6, 3);
  std::mt19937_64 rng(3);
  BmState<double> s;
  s.R = random_factor(10, 3, rng);
  s.lambda = random_vector(6, rng);
  s.rho = 2;
  double prev = bm_aug_lagrangian(P, s);
  for (int k = 0; k < 15; ++k) {
    const auto res = lbfgs_minimize(P, s, 1e-14, 1);
    if (res.iterations == 0) break;
    CHECK(res.value < prev);
    prev = res.value;
    s.R = res.R;
  }
}

TEST_CASE("triangle inner solve reaches its tolerance") {
  const auto P = testing_support::triangle_maxcut();
  std::mt19937_64 rng(6);
  auto s = random_bm_state(P, 2, 1.0, rng);
  const auto res = lbfgs_minimize(P, s, 1e-6, 500);
  CHECK(res.converged);
  CHECK(res.grad_norm / (1 + std::abs(res.value)) <= 1e-6);
}

TEST_CASE("dual update identity") {
  const auto P = random_problem(6, 4, 1);
  std::mt19937_64 rng(1);
  BmState<double> s = random_bm_state(P, 2, 1.0, rng);
  s.lambda = random_vector(4, rng);
  const Vectord lam0 = s.lambda;
  const Vectord r = constraint_residual(P, s.R, s.R);
  bm_dual_update(s, r);
  CHECK(s.lambda == Vectord(lam0 + r));
  s.rho = 3.5;
  const Vectord lam1 = s.lambda;
  bm_dual_update(s, r);
  CHECK(s.lambda == Vectord(lam1 + 3.5 * r));
}

TEST_CASE("outer loop: feasible start stops at once, triangle reaches the switch tolerance") {
  const SdpProblemd F(SparseSymMatrixd(2), {SparseSymMatrixd::identity(2)}, Vectord::Ones(1));
  BmState<double> s;
  s.R = Factord::Zero(2, 1);
  s.R(0, 0) = 1;
  s.lambda = Vectord::Zero(1);
  AlmSettings<double> cfg;
  const RankPolicy pol = RankPolicy{}.for_problem(2, 1);
  const auto out = alm_outer_loop(F, s, cfg, pol, false);
  CHECK(out.status == AlmStatus::converged);
  CHECK(out.outer_iters == 0);

  const auto T = testing_support::triangle_maxcut();
  std::mt19937_64 rng(2);
  auto t = random_bm_state(T, 2, 1.0, rng);
  cfg.switch_tol = 1e-2;
  const auto o2 = alm_outer_loop(T, t, cfg, RankPolicy{}.for_problem(3, 3), false);
  CHECK(o2.status == AlmStatus::converged);
  CHECK(o2.infeas < 1e-2);
  CHECK(constraint_residual(T, t.R, t.R).norm() / 2 < 1e-2);
}

TEST_CASE("outer loop requests escalation when the inner solve hits the threshold") {
  const auto P = random_problem(20, 15, 9);
  std::mt19937_64 rng(9);
  auto s = random_bm_state(P, 2, 1.0, rng);
  AlmSettings<double> cfg;
  cfg.max_inner = 3;
  RankPolicy pol = RankPolicy{}.for_problem(20, 15);
  pol.difficulty_threshold = 3;
  const auto out = alm_outer_loop(P, s, cfg, pol, true);
  CHECK(out.status == AlmStatus::escalation_requested);
  CHECK(out.last_inner == 3);
}

TEST_CASE("random initial state") {
  const auto P = random_problem(50, 4, 2);
  std::mt19937_64 rng(2);
  const auto s = random_bm_state(P, 5, 1.0, rng);
  CHECK(s.R.rows() == 50);
  CHECK(s.lambda.isZero());
  // Entries ~ N(0, 1/r): squared norm ~ n.
  CHECK(s.R.squaredNorm() == doctest::Approx(50.0).epsilon(0.3));
  CHECK_THROWS_AS(random_bm_state(P, 51, 1.0, rng), InvalidInput);
}
