#pragma once

#include <optional>
#include <utility>

#include "proxrec/solvers.hpp"

namespace proxrec {

struct RecoveryCertificate {
  double alpha = 0.0;
  double beta = 0.0;
  int k = 0;
  int m = 0;
  double lhs = 0.0;  // k g(2 beta)
  double rhs = 0.0;  // (m + 1 - k) g(alpha)
  bool passes = false;
  std::optional<double> mu_max;
  std::optional<std::pair<double, double>> found_params;  // (p, lambda)
};

struct StabilityCertificate {
  double alpha = 0.0;        // min_S (alpha_S - ||A_S^{-1}|| eps)
  double beta = 0.0;         // max_S (beta_S + ||A_S^{-1}|| eps)
  double alpha_S_min = 0.0;
  double beta_S_max = 0.0;
  double eps_max = 0.0;      // min_S alpha_S / ||A_S^{-1}||
  double eps_max_projected = 0.0;  // min_S (alpha_S - tail_inf) / (2 + ||A_S^{-1}||)
  double alpha_prime = 0.0;
  double beta_prime = 0.0;
  double tau = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double bound = 0.0;
  double epsilon = 0.0;
  // per-support data, in support enumeration order
  std::vector<double> alpha_S;
  std::vector<double> norm_inv_S;
};

/// (alpha, beta): min/max magnitude over nonzero entries of all basic solutions.
std::pair<double, double> alpha_beta(const SensingProblem& problem,
                                     std::int64_t budget = 1'000'000);

/// k g(2 beta) < (m + 1 - k) g(alpha) with 2k <= m certifies that the global
/// minimizer of the equality-constrained problem is the sparsest feasible vector.
RecoveryCertificate exact_recovery_check(const PenaltySpec& spec, double alpha,
                                         double beta, int m, int k);

/// Largest admissible mu for firm-penalty exact recovery.
double firm_mu_bound(double alpha, double beta, int m, int k);

/// Searches p in {2^-1..2^-20} with lambda = p, then p = -1 with
/// lambda in {2^-1..2^-40}; returns the first certified pair.
std::pair<double, double> find_p_lambda(double alpha, double beta, int m, int k);

/// Per-support noisy bounds; requires epsilon < eps_max.
StabilityCertificate noisy_alpha_beta(const SensingProblem& problem,
                                      std::int64_t budget = 1'000'000);

/// alpha' = alpha - ||x_{T^c}||_inf - 2 eps, beta' = beta + eps, under the
/// lemma's stronger epsilon bound.
std::pair<double, double> projected_error_bounds(const StabilityCertificate& cert,
                                                 double tail_inf, double epsilon);

/// Stability bound with C = 1; fills tau, C1, C2 into cert.
double stability_bound(const PenaltySpec& spec, StabilityCertificate& cert,
                       double alpha_prime, double beta_prime, int n, int k,
                       double epsilon, double tail);

/// Checks G(h_T) < G(h_{T^c}) for h = x - w over every basic solution w != x.
bool rnsp_check(const PenaltySpec& spec, const SensingProblem& problem,
                const Vec& x_sparse, std::int64_t budget = 1'000'000);

/// Global minimizer of the equality-constrained problem by exhaustive
/// enumeration of basic solutions.
Vec global_min_exhaustive(const PenaltySpec& spec, const SensingProblem& problem,
                          std::int64_t budget = 1'000'000);

/// Heuristic global search for the noise-ball-constrained problem: per-support
/// projected descent from the equality solution plus seeded multistart.
Vec noisy_min_heuristic(const PenaltySpec& spec, const SensingProblem& problem,
                        std::uint64_t seed = 0, int starts = 8,
                        std::int64_t budget = 1'000'000);

}  // namespace proxrec
