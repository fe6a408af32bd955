#pragma once

#include <optional>

#include "proxrec/shrinkage.hpp"

namespace proxrec {

/// Penalty value at a query point, with optional derivative and, for
/// p-shrinkage, the scalar conjugate-gradient root x(w).
struct PenaltyValue {
  double value = 0.0;
  std::optional<double> derivative;  // g' at |w|, when w != 0
  std::optional<double> root_x;      // p-shrinkage only
};

/// Solves x - lambda^{2-p} x^{p-1} = w for the unique root x > max(lambda, w).
/// Safeguarded Newton on a monotone bracket, 1e-12 relative tolerance.
double solve_x_of_w(double w, double lambda, double p);

/// Penalty induced by p-shrinkage, evaluated through the root x(|w|).
/// p = 1 short-circuits to |w|; p = 0 uses the log form.
PenaltyValue g_p_eval(double w, double lambda, double p);

/// g_p'(w) = (lambda / x(|w|))^{1-p} for w != 0.
double g_p_deriv(double w, double lambda, double p);

/// Closed-form penalty induced by firm thresholding; independent of lambda.
PenaltyValue g_firm_eval(double w, double lambda, double mu);

/// Elementwise penalty g for the spec's family. Hard uses the firm penalty
/// at mu = lambda.
double g_eval(const PenaltySpec& spec, double w);

/// Signed derivative d/dw g(w) for w != 0.
double g_deriv(const PenaltySpec& spec, double w);

/// G(w) = sum_i g(w_i).
double penalty_total(const PenaltySpec& spec, const Vec& w);

}  // namespace proxrec
