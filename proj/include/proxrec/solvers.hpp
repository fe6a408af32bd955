#pragma once

#include <vector>

#include "proxrec/penalty_eval.hpp"
#include "proxrec/sensing.hpp"

namespace proxrec {

enum class Termination { Converged, MaxIters, FixedPoint };

struct SolverConfig {
  int max_iters = 100000;
  double step_tol = 1e-12;       // stop on ||x^{n+1} - x^n||
  double stationarity_tol = 1e-8;
  bool objective_trace = true;
  double admm_rho = 1.0;
  bool rescale = false;          // divide A, b by sigma_max(1 + 1e-3) before IPS
  Vec init;                      // empty = zero start
};

struct SolverResult {
  Vec x_final;
  std::vector<double> objective_trace;
  std::vector<double> step_diffs;
  double stationarity_residual = 0.0;
  int iterations = 0;
  Termination termination = Termination::MaxIters;
};

/// F_p(x) = lambda_reg G(x) + 1/2 ||Ax - b||^2.
double objective_Fp(const SensingProblem& problem, const PenaltySpec& spec,
                    double lambda_reg, const Vec& x);

/// First-order optimality of F with lambda_reg = spec.lambda: for nonzero
/// components |lambda g'(x_j) + [A^T(Ax-b)]_j|, at zeros the subdifferential
/// slack max(0, |[A^T(Ax-b)]_j| - lambda). Zero exactly at stationary points.
double stationarity_residual(const SensingProblem& problem, const PenaltySpec& spec,
                             double lambda_reg, const Vec& x);

/// Forward-backward splitting x <- S(x - A^T(Ax - b)). Requires ||A|| < 1;
/// for p < 0 additionally x^0 = 0 and lambda above lambda_min_for_negative_p.
SolverResult ips_solve(const SensingProblem& problem, const PenaltySpec& spec,
                       const SolverConfig& config);

/// ADMM for min G(w) subject to Aw = b, assuming AA^T = I.
SolverResult admm_equality_solve(const SensingProblem& problem, const PenaltySpec& spec,
                                 const SolverConfig& config);

/// sqrt(p ||b||^2 / (p - 2)); admissible lambdas are strictly larger.
double lambda_min_for_negative_p(double p, const Vec& b);

}  // namespace proxrec
