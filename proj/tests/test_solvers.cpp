#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "proxrec/certificates.hpp"
#include "proxrec/solvers.hpp"

using namespace proxrec;

namespace {

SensingProblem scalar_problem(double a, double b) {
  SensingProblem p;
  p.A = Mat(1, 2);
  p.A << a, 0.0;
  p.b = Vec(1);
  p.b << b;
  return p;
}

// 1-D problem embedded as 1x1 is not m < n; use a genuine 1x1 wrapper where
// solver math still applies by padding an inert zero column.
SensingProblem one_dim(double a, double b) { return scalar_problem(a, b); }

SensingProblem random_instance(std::mt19937_64& rng, int m, int n) {
  std::uniform_int_distribution<std::uint64_t> s(0, 1u << 30);
  SensingProblem p;
  p.A = gaussian_matrix(m, n, s(rng));
  p.b = gaussian_vector(m, s(rng));
  return p;
}

}  // namespace

TEST_CASE("objective examples") {
  auto p = one_dim(0.5, 0.25);
  Vec zero = Vec::Zero(2);
  CHECK(objective_Fp(p, PenaltySpec::soft(1.0), 1.0, zero) ==
        doctest::Approx(0.5 * 0.25 * 0.25));

  SensingProblem q;
  q.A = Mat(2, 3);
  q.A << 0.9, 0, 0, 0, 0.9, 0;
  q.b = Vec::Zero(2);
  Vec x(3);
  x << 1, 1, 0;
  CHECK(objective_Fp(q, PenaltySpec::soft(1.0), 1.0, x) ==
        doctest::Approx(2.0 + 0.5 * 0.81 * 2.0));
  CHECK_THROWS_AS(objective_Fp(q, PenaltySpec::soft(1.0), 1.0, Vec::Zero(2)),
                  std::invalid_argument);
}

TEST_CASE("objective matches independent term-by-term recomputation") {
  std::mt19937_64 rng(3);
  auto p = random_instance(rng, 4, 9);
  Vec x = gaussian_vector(9, 77);
  auto spec = PenaltySpec::pshrink(0.4, 0.5);
  double expect = 0.0;
  for (int i = 0; i < 9; ++i) expect += 0.4 * g_eval(spec, x[i]);
  Vec r = p.A * x - p.b;
  for (int i = 0; i < 4; ++i) expect += 0.5 * r[i] * r[i];
  CHECK(objective_Fp(p, spec, 0.4, x) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("ips fixed point at zero when b = 0") {
  auto p = one_dim(0.5, 0.0);
  SolverConfig cfg;
  auto res = ips_solve(p, PenaltySpec::soft(0.1), cfg);
  CHECK(res.iterations == 0);
  CHECK(res.termination == Termination::FixedPoint);
  CHECK(res.x_final.norm() == 0.0);
}

TEST_CASE("ips scalar l1 closed form") {
  auto p = one_dim(0.5, 0.25);
  SolverConfig cfg;
  cfg.step_tol = 1e-14;
  auto res = ips_solve(p, PenaltySpec::soft(0.05), cfg);
  // lambda g'(x) + a(ax - b) = 0 with a = 0.5: x = (0.125 - 0.05) / 0.25
  CHECK(res.x_final[0] == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(res.termination == Termination::Converged);
  CHECK(res.stationarity_residual <= 1e-8);
}

TEST_CASE("ips p-shrinkage limit satisfies first-order condition") {
  auto p = one_dim(0.5, 0.25);
  SolverConfig cfg;
  cfg.step_tol = 1e-14;
  auto spec = PenaltySpec::pshrink(0.05, 0.5);
  auto res = ips_solve(p, spec, cfg);
  double x = res.x_final[0];
  REQUIRE(x > 0.0);
  CHECK(std::abs(spec.lambda * g_p_deriv(x, spec.lambda, spec.p) + 0.25 * x - 0.125) <= 1e-8);
}

TEST_CASE("ips rejects ||A|| >= 1 without rescale") {
  SensingProblem p;
  p.A = Mat(1, 2);
  p.A << 2.0, 0.0;
  p.b = Vec(1);
  p.b << 1.0;
  SolverConfig cfg;
  CHECK_THROWS_AS(ips_solve(p, PenaltySpec::soft(0.1), cfg), std::invalid_argument);
  cfg.rescale = true;
  CHECK_NOTHROW(ips_solve(p, PenaltySpec::soft(0.1), cfg));
}

TEST_CASE("ips lambda bound for negative p") {
  auto p = one_dim(0.5, 0.25);
  SolverConfig cfg;
  CHECK_THROWS_WITH_AS(ips_solve(p, PenaltySpec::pshrink(0.01, -1.0), cfg),
                       doctest::Contains("lambda must exceed"), std::invalid_argument);
  double lmin = lambda_min_for_negative_p(-1.0, p.b);
  CHECK_NOTHROW(ips_solve(p, PenaltySpec::pshrink(lmin * 1.01, -1.0), cfg));
}

TEST_CASE("lambda_min_for_negative_p arithmetic") {
  Vec b1(1);
  b1 << 1.0;
  CHECK(lambda_min_for_negative_p(-1.0, b1) == doctest::Approx(std::sqrt(1.0 / 3.0)));
  Vec b2(1);
  b2 << 2.0;
  CHECK(lambda_min_for_negative_p(-2.0, b2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(lambda_min_for_negative_p(-1.0, Vec::Zero(3)) == 0.0);
  CHECK_THROWS_AS(lambda_min_for_negative_p(0.5, b1), std::invalid_argument);
}

TEST_CASE("stationarity residual examples") {
  auto p = one_dim(0.5, 0.0);
  CHECK(stationarity_residual(p, PenaltySpec::soft(0.1), 0.1, Vec::Zero(2)) == 0.0);
  auto q = one_dim(0.5, 0.25);
  Vec x(2);
  x << 0.3, 0.0;
  CHECK(stationarity_residual(q, PenaltySpec::soft(0.05), 0.05, x) <= 1e-10);
  Vec y(2);
  y << 1.7, 0.0;
  CHECK(stationarity_residual(q, PenaltySpec::soft(0.05), 0.05, y) > 1e-3);
}

TEST_CASE("initializing at a stationary point is a fixed point") {
  auto p = one_dim(0.5, 0.25);
  SolverConfig cfg;
  cfg.step_tol = 1e-15;
  auto spec = PenaltySpec::soft(0.05);
  auto first = ips_solve(p, spec, cfg);
  SolverConfig cfg2;
  cfg2.init = first.x_final;
  auto second = ips_solve(p, spec, cfg2);
  CHECK(second.iterations <= 1);
  CHECK((second.x_final - first.x_final).norm() <= 1e-12);
}

TEST_CASE("ips monotone decrease, convergence and stationarity over seeded instances") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> md(2, 10);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int m = md(rng);
    int n = m + 1 + static_cast<int>(rng() % (30 - m));
    auto p = random_instance(rng, m, n);
    double scale = 1.0 / (operator_norm(p.A) * 1.001);
    p.A *= scale;
    p.b *= scale;

    PenaltySpec spec;
    switch (trial % 5) {
      case 0: spec = PenaltySpec::pshrink(0.1, 1.0); break;
      case 1: spec = PenaltySpec::pshrink(0.1, 0.5); break;
      case 2: spec = PenaltySpec::pshrink(0.1, 0.0); break;
      case 3:
        spec = PenaltySpec::pshrink(
            std::max(0.1, 1.001 * lambda_min_for_negative_p(-1.0, p.b)), -1.0);
        break;
      case 4: spec = PenaltySpec::firm(0.1, 0.5); break;
    }
    SolverConfig cfg;
    cfg.step_tol = 1e-13;
    cfg.max_iters = 200000;
    auto res = ips_solve(p, spec, cfg);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
      CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-12);
    }
    if (res.termination == Termination::Converged) {
      CHECK(res.step_diffs.back() <= cfg.step_tol);
      CHECK(res.stationarity_residual <= 1e-8);
      ++checked;
    }
    // boundedness along the trace for p < 0
    if (spec.family == PenaltyFamily::PShrink && spec.p < 0.0) {
      double cap_rhs = p.b.squaredNorm() / (2.0 * spec.lambda);
      // t solving g(t) = ||b||^2/(2 lambda); the iterates stay below it
      double t_lo = 0.0, t_hi = 1e6;
      for (int it = 0; it < 200; ++it) {
        double t = 0.5 * (t_lo + t_hi);
        (g_p_eval(t, spec.lambda, spec.p).value < cap_rhs ? t_lo : t_hi) = t;
      }
      CHECK(res.x_final.lpNorm<Eigen::Infinity>() < t_hi + 1e-9);
    }
  }
  CHECK(checked > 50);  // most instances should fully converge
}

TEST_CASE("ips with p = 1 matches soft thresholding exactly") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = random_instance(rng, 4, 12);
    double scale = 1.0 / (operator_norm(p.A) * 1.01);
    p.A *= scale;
    p.b *= scale;
    SolverConfig cfg;
    cfg.max_iters = 500;
    auto a = ips_solve(p, PenaltySpec::pshrink(0.05, 1.0), cfg);
    auto b = ips_solve(p, PenaltySpec::soft(0.05), cfg);
    CHECK((a.x_final - b.x_final).lpNorm<Eigen::Infinity>() <= 1e-14);
  }
}

TEST_CASE("admm equality: l1 picks the smaller-norm basic solution") {
  SensingProblem p;
  p.A = Mat(1, 2);
  p.A << 0.6, 0.8;
  p.b = Vec(1);
  p.b << 1.0;
  p.rows_orthonormal = true;
  SolverConfig cfg;
  cfg.step_tol = 1e-12;
  auto res = admm_equality_solve(p, PenaltySpec::soft(0.1), cfg);
  CHECK(res.x_final[0] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(res.x_final[1] == doctest::Approx(1.25));
  CHECK((p.A * res.x_final - p.b).norm() <= 1e-8);
}

TEST_CASE("admm equality with firm penalty") {
  SensingProblem p;
  p.A = Mat(1, 2);
  p.A << 0.6, 0.8;
  p.b = Vec(1);
  p.b << 1.0;
  p.rows_orthonormal = true;
  SolverConfig cfg;
  cfg.step_tol = 1e-12;
  auto res = admm_equality_solve(p, PenaltySpec::firm(0.2, 2.0), cfg);
  CHECK(res.x_final[0] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(res.x_final[1] == doctest::Approx(1.25));
}

TEST_CASE("admm equality with b = 0 returns zero") {
  SensingProblem p;
  p.A = Mat(1, 2);
  p.A << 0.6, 0.8;
  p.b = Vec::Zero(1);
  p.rows_orthonormal = true;
  SolverConfig cfg;
  auto res = admm_equality_solve(p, PenaltySpec::soft(0.1), cfg);
  CHECK(res.x_final.norm() <= 1e-12);
}

TEST_CASE("admm requires orthonormal rows") {
  SensingProblem p;
  p.A = Mat(1, 2);
  p.A << 2.0, 0.0;
  p.b = Vec(1);
  p.b << 1.0;
  SolverConfig cfg;
  CHECK_THROWS_WITH_AS(admm_equality_solve(p, PenaltySpec::soft(0.1), cfg),
                       doctest::Contains("orthonormalize_rows"), std::invalid_argument);
}

TEST_CASE("admm feasibility on random instances") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    SensingProblem p;
    p.A = gaussian_matrix(3, 8, 1000 + trial);
    p.b = gaussian_vector(3, 2000 + trial);
    p = orthonormalize_rows(p);
    SolverConfig cfg;
    cfg.step_tol = 1e-10;
    cfg.max_iters = 20000;
    auto spec = trial % 2 ? PenaltySpec::soft(0.05) : PenaltySpec::firm(0.05, 0.4);
    auto res = admm_equality_solve(p, spec, cfg);
    CHECK((p.A * res.x_final - p.b).norm() <= 1e-8);
  }
}
