#include "proxrec/certificates.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace proxrec {

namespace {
constexpr double kMargin = 1e-12;  // relative strictness margin on < comparisons
}

std::pair<double, double> alpha_beta(const SensingProblem& problem, std::int64_t budget) {
  if (problem.b.lpNorm<Eigen::Infinity>() == 0.0) {
    throw std::invalid_argument("alpha_beta: b = 0 has no nonzero entries to bound");
  }
  auto sols = enumerate_basic_solutions(problem, budget);
  double alpha = std::numeric_limits<double>::infinity();
  double beta = 0.0;
  for (const auto& s : sols) {
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
      double a = std::abs(s.values[i]);
      alpha = std::min(alpha, a);
      beta = std::max(beta, a);
    }
  }
  if (!std::isfinite(alpha)) {
    throw std::runtime_error("alpha_beta: no basic solutions with nonzero entries");
  }
  return {alpha, beta};
}

RecoveryCertificate exact_recovery_check(const PenaltySpec& spec, double alpha,
                                         double beta, int m, int k) {
  spec.validate();
  if (!(k > 0) || !(alpha > 0.0) || !(alpha <= beta)) {
    throw std::invalid_argument("exact_recovery_check: requires k > 0, 0 < alpha <= beta");
  }
  RecoveryCertificate cert;
  cert.alpha = alpha;
  cert.beta = beta;
  cert.k = k;
  cert.m = m;
  cert.lhs = k * g_eval(spec, 2.0 * beta);
  cert.rhs = (m + 1 - k) * g_eval(spec, alpha);
  cert.passes = (2 * k <= m) && (cert.lhs < cert.rhs * (1.0 - kMargin));
  return cert;
}

double firm_mu_bound(double alpha, double beta, int m, int k) {
  if (2 * k > m) {
    throw std::invalid_argument("firm_mu_bound: requires 2k <= m");
  }
  double ratio = static_cast<double>(m + 1 - k) / k;
  double left = alpha * ratio * (1.0 + std::sqrt(1.0 - 1.0 / ratio));
  return std::min(left, 2.0 * beta);
}

std::pair<double, double> find_p_lambda(double alpha, double beta, int m, int k) {
  if (2 * k > m) {
    throw std::invalid_argument("find_p_lambda: requires 2k <= m");
  }
  double best_ratio = std::numeric_limits<double>::infinity();
  // 0 < p < 1 branch with the lambda = p coupling
  for (int i = 1; i <= 20; ++i) {
    double p = std::ldexp(1.0, -i);
    double lambda = p;
    auto cert = exact_recovery_check(PenaltySpec::pshrink(lambda, p), alpha, beta, m, k);
    if (cert.passes) return {p, lambda};
    best_ratio = std::min(best_ratio, cert.lhs / cert.rhs);
  }
  // p < 0 branch: fixed p = -1, shrink lambda
  for (int i = 1; i <= 40; ++i) {
    double lambda = std::ldexp(1.0, -i);
    auto cert = exact_recovery_check(PenaltySpec::pshrink(lambda, -1.0), alpha, beta, m, k);
    if (cert.passes) return {-1.0, lambda};
    best_ratio = std::min(best_ratio, cert.lhs / cert.rhs);
  }
  std::ostringstream msg;
  msg << "find_p_lambda: grid exhausted; closest lhs/rhs ratio " << best_ratio;
  throw std::runtime_error(msg.str());
}

StabilityCertificate noisy_alpha_beta(const SensingProblem& problem, std::int64_t budget) {
  problem.validate();
  const int m = problem.m();
  const int n = problem.n();
  if (binomial(n, m) > budget) {
    throw std::runtime_error("noisy_alpha_beta: enumeration budget exceeded");
  }
  StabilityCertificate cert;
  cert.epsilon = problem.epsilon;
  cert.alpha_S_min = std::numeric_limits<double>::infinity();
  cert.eps_max = std::numeric_limits<double>::infinity();
  double alpha = std::numeric_limits<double>::infinity();
  double beta = 0.0;
  for_each_support(n, m, [&](const std::vector<int>& cols) {
    Mat sub(m, m);
    for (int j = 0; j < m; ++j) sub.col(j) = problem.A.col(cols[j]);
    Eigen::JacobiSVD<Mat> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv[m - 1] <= 1e-12 * sv[0]) {
      throw std::runtime_error("noisy_alpha_beta: singular m-column submatrix (URP fails)");
    }
    Vec sol = svd.solve(problem.b);
    double alpha_S = sol.cwiseAbs().minCoeff();
    double beta_S = sol.cwiseAbs().maxCoeff();
    double norm_inv = 1.0 / sv[m - 1];
    if (alpha_S <= 1e-12) {
      throw std::runtime_error("noisy_alpha_beta: some alpha_S = 0 (degenerate data)");
    }
    cert.alpha_S.push_back(alpha_S);
    cert.norm_inv_S.push_back(norm_inv);
    cert.alpha_S_min = std::min(cert.alpha_S_min, alpha_S);
    cert.beta_S_max = std::max(cert.beta_S_max, beta_S);
    cert.eps_max = std::min(cert.eps_max, alpha_S / norm_inv);
    alpha = std::min(alpha, alpha_S - norm_inv * problem.epsilon);
    beta = std::max(beta, beta_S + norm_inv * problem.epsilon);
  });
  if (problem.epsilon >= cert.eps_max) {
    std::ostringstream msg;
    msg << "noisy_alpha_beta: epsilon " << problem.epsilon
        << " must be below eps_max " << cert.eps_max;
    throw std::invalid_argument(msg.str());
  }
  cert.alpha = alpha;
  cert.beta = beta;
  return cert;
}

std::pair<double, double> projected_error_bounds(const StabilityCertificate& cert,
                                                 double tail_inf, double epsilon) {
  if (!(cert.alpha_S_min > tail_inf)) {
    throw std::invalid_argument(
        "projected_error_bounds: requires min_S alpha_S > ||x_{T^c}||_inf");
  }
  double eps_admissible = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cert.alpha_S.size(); ++i) {
    eps_admissible = std::min(
        eps_admissible, (cert.alpha_S[i] - tail_inf) / (2.0 + cert.norm_inv_S[i]));
  }
  if (!(epsilon < eps_admissible)) {
    std::ostringstream msg;
    msg << "projected_error_bounds: epsilon must be below " << eps_admissible;
    throw std::invalid_argument(msg.str());
  }
  // alpha, beta at this epsilon from the stored per-support bounds
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cert.alpha_S.size(); ++i) {
    alpha = std::min(alpha, cert.alpha_S[i] - cert.norm_inv_S[i] * epsilon);
  }
  double alpha_prime = alpha - tail_inf - 2.0 * epsilon;
  double beta_prime = cert.beta + epsilon;
  return {alpha_prime, beta_prime};
}

double stability_bound(const PenaltySpec& spec, StabilityCertificate& cert,
                       double alpha_prime, double beta_prime, int n, int k,
                       double epsilon, double tail) {
  spec.validate();
  if (!(2 * k < n)) throw std::invalid_argument("stability_bound: requires 2k < n");
  if (!(alpha_prime > 0.0) || tail < 0.0 || epsilon < 0.0) {
    throw std::invalid_argument("stability_bound: requires alpha' > 0, eps, tail >= 0");
  }
  double tau = k * g_eval(spec, 2.0 * beta_prime) /
               ((n - k) * g_eval(spec, alpha_prime));
  if (!(tau < 1.0 - kMargin)) {
    throw std::runtime_error("stability_bound: tau >= 1, certificate fails");
  }
  double sqn = std::sqrt(static_cast<double>(n));
  double D = sqn;  // D = C sqrt(n) with C = 1, justified by g(t) <= |t|
  cert.alpha_prime = alpha_prime;
  cert.beta_prime = beta_prime;
  cert.tau = tau;
  cert.C1 = 4.0 * D / (1.0 - tau);
  cert.C2 = 2.0 * (1.0 + tau) / (1.0 - tau);
  cert.bound = 2.0 / (1.0 - tau) * (2.0 * sqn * epsilon + (1.0 + tau) * tail);
  return cert.bound;
}

bool rnsp_check(const PenaltySpec& spec, const SensingProblem& problem,
                const Vec& x_sparse, std::int64_t budget) {
  spec.validate();
  const int n = problem.n();
  if ((problem.A * x_sparse - problem.b).norm() > 1e-8) {
    throw std::invalid_argument("rnsp_check: x_sparse is not feasible");
  }
  std::vector<int> T;
  for (int i = 0; i < n; ++i) {
    if (std::abs(x_sparse[i]) > 1e-12) T.push_back(i);
  }
  if (2 * static_cast<int>(T.size()) > problem.m()) {
    throw std::invalid_argument("rnsp_check: requires 2k <= m");
  }
  std::vector<bool> in_T(n, false);
  for (int i : T) in_T[i] = true;

  auto sols = enumerate_basic_solutions(problem, budget);
  for (const auto& s : sols) {
    Vec h = x_sparse - s.dense(n);
    if (h.lpNorm<Eigen::Infinity>() <= 1e-10) continue;
    double gT = 0.0, gTc = 0.0;
    for (int i = 0; i < n; ++i) {
      (in_T[i] ? gT : gTc) += g_eval(spec, h[i]);
    }
    if (!(gT < gTc * (1.0 - kMargin))) return false;
  }
  return true;
}

Vec global_min_exhaustive(const PenaltySpec& spec, const SensingProblem& problem,
                          std::int64_t budget) {
  if (problem.epsilon != 0.0) {
    throw std::invalid_argument("global_min_exhaustive: equality-constrained only");
  }
  auto sols = enumerate_basic_solutions(problem, budget);
  if (sols.empty()) {
    throw std::runtime_error("global_min_exhaustive: no basic solutions found");
  }
  const int n = problem.n();
  double best = std::numeric_limits<double>::infinity();
  Vec best_x;
  for (const auto& s : sols) {
    Vec x = s.dense(n);
    double val = penalty_total(spec, x);
    if (val < best) {
      best = val;
      best_x = x;
    }
  }
  return best_x;
}

namespace {

// Minimize G(A_S^{-1}(b + eta)) over ||eta|| <= eps by projected gradient
// with a decaying step, tracking the best visited point.
double minimize_over_support(const PenaltySpec& spec, const Mat& inv, const Vec& b,
                             double eps, const std::vector<Vec>& starts, Vec* best_w) {
  double best = std::numeric_limits<double>::infinity();
  auto value = [&](const Vec& eta) { return penalty_total(spec, inv * (b + eta)); };
  for (const Vec& eta0 : starts) {
    Vec eta = eta0;
    double cur = value(eta);
    if (cur < best) { best = cur; *best_w = inv * (b + eta); }
    double step = 0.3 * eps;
    for (int it = 0; it < 300; ++it) {
      Vec w = inv * (b + eta);
      Vec grad_w(w.size());
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        grad_w[i] = std::abs(w[i]) > 1e-300 ? g_deriv(spec, w[i]) : 0.0;
      }
      Vec grad = inv.transpose() * grad_w;
      double gn = grad.norm();
      if (gn < 1e-15) break;
      Vec trial = eta - (step / gn) * grad;
      if (trial.norm() > eps) trial *= eps / trial.norm();
      double tv = value(trial);
      if (tv < cur) {
        eta = trial;
        cur = tv;
        if (cur < best) { best = cur; *best_w = inv * (b + eta); }
      } else {
        step *= 0.5;
        if (step < 1e-12 * eps) break;
      }
    }
  }
  return best;
}

}  // namespace

Vec noisy_min_heuristic(const PenaltySpec& spec, const SensingProblem& problem,
                        std::uint64_t seed, int starts, std::int64_t budget) {
  spec.validate();
  problem.validate();
  const int m = problem.m();
  const int n = problem.n();
  const double eps = problem.epsilon;
  if (binomial(n, m) > budget) {
    throw std::runtime_error("noisy_min_heuristic: enumeration budget exceeded");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  double best = std::numeric_limits<double>::infinity();
  Vec best_x = Vec::Zero(n);
  for_each_support(n, m, [&](const std::vector<int>& cols) {
    Mat sub(m, m);
    for (int j = 0; j < m; ++j) sub.col(j) = problem.A.col(cols[j]);
    Eigen::FullPivLU<Mat> lu(sub);
    if (!lu.isInvertible()) return;
    Mat inv = lu.inverse();
    std::vector<Vec> eta_starts;
    eta_starts.push_back(Vec::Zero(m));
    for (int s = 0; s < starts; ++s) {
      Vec eta(m);
      for (int i = 0; i < m; ++i) eta[i] = gauss(rng);
      double norm = eta.norm();
      if (norm > 0.0) eta *= eps * std::pow(unif(rng), 1.0 / m) / norm;
      eta_starts.push_back(eta);
    }
    Vec w_s;
    double val = minimize_over_support(spec, inv, problem.b, eps, eta_starts, &w_s);
    if (val < best) {
      best = val;
      best_x = Vec::Zero(n);
      for (int j = 0; j < m; ++j) best_x[cols[j]] = w_s[j];
    }
  });
  return best_x;
}

}  // namespace proxrec
