#include "proxrec/solvers.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace proxrec {

double objective_Fp(const SensingProblem& problem, const PenaltySpec& spec,
                    double lambda_reg, const Vec& x) {
  if (x.size() != problem.A.cols()) {
    throw std::invalid_argument("objective_Fp: dimension mismatch");
  }
  return lambda_reg * penalty_total(spec, x) + 0.5 * (problem.A * x - problem.b).squaredNorm();
}

double stationarity_residual(const SensingProblem& problem, const PenaltySpec& spec,
                             double lambda_reg, const Vec& x) {
  if (x.size() != problem.A.cols()) {
    throw std::invalid_argument("stationarity_residual: dimension mismatch");
  }
  Vec r = problem.A.transpose() * (problem.A * x - problem.b);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    double v;
    if (x[j] != 0.0) {
      v = std::abs(lambda_reg * g_deriv(spec, x[j]) + r[j]);
    } else {
      v = std::max(0.0, std::abs(r[j]) - lambda_reg);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

double lambda_min_for_negative_p(double p, const Vec& b) {
  if (!(p < 0.0)) {
    throw std::invalid_argument("lambda_min_for_negative_p: requires p < 0");
  }
  return std::sqrt(p * b.squaredNorm() / (p - 2.0));
}

SolverResult ips_solve(const SensingProblem& problem, const PenaltySpec& spec,
                       const SolverConfig& config) {
  spec.validate();
  problem.validate();
  if (config.max_iters < 1) throw std::invalid_argument("ips_solve: max_iters >= 1");

  Mat A = problem.A;
  Vec b = problem.b;
  double norm = operator_norm(A);
  if (norm >= 1.0) {
    if (!config.rescale) {
      throw std::invalid_argument(
          "ips_solve: ||A|| >= 1; pass rescale=true or scale the problem");
    }
    double s = 1.0 / (norm * (1.0 + 1e-3));
    A *= s;
    b *= s;
  }

  const bool negative_p = spec.family == PenaltyFamily::PShrink && spec.p < 0.0;
  Vec x;
  if (config.init.size() == 0) {
    x = Vec::Zero(A.cols());
  } else {
    if (config.init.size() != A.cols()) {
      throw std::invalid_argument("ips_solve: init has wrong dimension");
    }
    x = config.init;
    if (negative_p && x.lpNorm<Eigen::Infinity>() != 0.0) {
      throw std::invalid_argument("ips_solve: p < 0 requires zero initialization");
    }
  }
  if (negative_p) {
    double lmin = lambda_min_for_negative_p(spec.p, b);
    if (!(spec.lambda * spec.lambda > spec.p * b.squaredNorm() / (spec.p - 2.0))) {
      std::ostringstream msg;
      msg << "ips_solve: for p < 0 lambda must exceed " << lmin
          << " (got " << spec.lambda << ")";
      throw std::invalid_argument(msg.str());
    }
  }

  SensingProblem scaled{A, b, 0.0, false};
  SolverResult res;
  if (config.objective_trace) {
    res.objective_trace.push_back(objective_Fp(scaled, spec, spec.lambda, x));
  }

  for (int it = 0; it < config.max_iters; ++it) {
    Vec xn = apply_shrinkage(spec, x - A.transpose() * (A * x - b));
    double diff = (xn - x).norm();
    res.step_diffs.push_back(diff);
    x = xn;
    if (config.objective_trace) {
      res.objective_trace.push_back(objective_Fp(scaled, spec, spec.lambda, x));
    }
    res.iterations = it + 1;
    if (it == 0 && diff == 0.0) {
      res.iterations = 0;
      res.termination = Termination::FixedPoint;
      break;
    }
    if (diff <= config.step_tol) {
      double stat = stationarity_residual(scaled, spec, spec.lambda, x);
      if (stat <= config.stationarity_tol) {
        res.termination = Termination::Converged;
        break;
      }
      if (diff == 0.0) {
        res.termination = Termination::FixedPoint;
        break;
      }
    }
  }
  res.x_final = x;
  res.stationarity_residual = stationarity_residual(scaled, spec, spec.lambda, x);
  return res;
}

SolverResult admm_equality_solve(const SensingProblem& problem, const PenaltySpec& spec,
                                 const SolverConfig& config) {
  spec.validate();
  problem.validate();
  if (!problem.rows_orthonormal) {
    throw std::invalid_argument(
        "admm_equality_solve: requires orthonormal rows; call orthonormalize_rows first");
  }
  if (!(config.admm_rho > 0.0)) {
    throw std::invalid_argument("admm_equality_solve: rho must be positive");
  }

  const Mat& A = problem.A;
  const Vec& b = problem.b;
  const double rho = config.admm_rho;

  // The proximal scale 1/rho is absorbed into the shrinkage threshold.
  PenaltySpec zspec = spec;
  zspec.lambda = spec.lambda / rho;
  if (zspec.family == PenaltyFamily::Firm && zspec.mu < zspec.lambda) {
    zspec.mu = zspec.lambda;
  }

  auto project = [&](const Vec& v) -> Vec { return v - A.transpose() * (A * v - b); };

  Vec w = project(Vec::Zero(A.cols()));  // least-norm feasible start
  Vec z = w;
  Vec u = Vec::Zero(A.cols());

  SolverResult res;
  for (int it = 0; it < config.max_iters; ++it) {
    Vec z_old = z;
    Vec w_old = w;
    z = apply_shrinkage(zspec, w + u);
    w = project(z - u);
    u += w - z;

    double primal = (w - z).norm();
    double dual = rho * (z - z_old).norm();
    res.step_diffs.push_back((w - w_old).norm());
    if (config.objective_trace) res.objective_trace.push_back(penalty_total(spec, w));
    res.iterations = it + 1;
    if (std::max(primal, dual) <= config.step_tol) {
      res.termination = Termination::Converged;
      res.stationarity_residual = primal;
      break;
    }
    res.stationarity_residual = primal;
  }
  res.x_final = w;
  return res;
}

}  // namespace proxrec
