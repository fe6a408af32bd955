#include "proxrec/penalty_eval.hpp"

#include <cmath>
#include <stdexcept>

namespace proxrec {

namespace {

void check_params(double lambda, double p) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("penalty-eval: lambda must be positive");
  }
  if (!(p <= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("penalty-eval: requires p <= 1");
  }
}

}  // namespace

double solve_x_of_w(double w, double lambda, double p) {
  check_params(lambda, p);
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw std::invalid_argument("solve_x_of_w: requires w > 0");
  }
  if (p == 1.0) return w + lambda;

  auto gap = [&](double x) {
    // lambda^{2-p} x^{p-1} = lambda (x/lambda)^{p-1}
    return lambda * std::exp((p - 1.0) * std::log(x / lambda));
  };
  auto F = [&](double x) { return x - gap(x) - w; };

  double lo = std::max(lambda, w);
  double hi = w + gap(lo);
  // F is strictly increasing on [lambda, inf); F(lo) <= 0 <= F(hi).
  double x = 0.5 * (lo + hi);
  const double tol = 1e-12;
  for (int it = 0; it < 200; ++it) {
    double f = F(x);
    if (std::abs(f) <= tol * std::max({1.0, w, x})) return x;
    if (f > 0.0) hi = x; else lo = x;
    double fprime = 1.0 - (p - 1.0) * std::exp((p - 2.0) * std::log(x / lambda));
    double xn = x - f / fprime;
    if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);  // bisection safeguard
    if (xn == x) return x;
    x = xn;
  }
  if (std::abs(F(x)) <= 1e-9 * std::max({1.0, w, x})) return x;
  throw std::runtime_error("solve_x_of_w: root solver did not converge");
}

PenaltyValue g_p_eval(double w, double lambda, double p) {
  check_params(lambda, p);
  if (!std::isfinite(w)) throw std::invalid_argument("g_p_eval: non-finite w");
  double t = std::abs(w);
  if (t == 0.0) return {0.0, std::nullopt, lambda};
  if (p == 1.0) return {t, 1.0, t + lambda};

  double x = solve_x_of_w(t, lambda, p);
  double L = std::log(x / lambda);
  // (lambda/p)(x/lambda)^p - (lambda/2)(x/lambda)^{2p-2} - lambda(1/p - 1/2),
  // regrouped through expm1 so the p -> 0 limit and tiny-p grids stay accurate.
  double value;
  if (p == 0.0) {
    value = lambda * L + 0.5 * lambda * (1.0 - std::exp(-2.0 * L));
  } else {
    value = (lambda / p) * std::expm1(p * L) +
            0.5 * lambda * (1.0 - std::exp((2.0 * p - 2.0) * L));
  }
  double deriv = std::exp(-(1.0 - p) * L);  // (lambda/x)^{1-p}
  return {value, deriv, x};
}

double g_p_deriv(double w, double lambda, double p) {
  if (w == 0.0) {
    throw std::invalid_argument("g_p_deriv: undefined at w = 0 (subdifferential [-1,1])");
  }
  return *g_p_eval(w, lambda, p).derivative;
}

PenaltyValue g_firm_eval(double w, double lambda, double mu) {
  if (!(mu >= lambda) || !(lambda > 0.0)) {
    throw std::invalid_argument("g_firm_eval: requires mu >= lambda > 0");
  }
  if (!std::isfinite(w)) throw std::invalid_argument("g_firm_eval: non-finite w");
  double t = std::abs(w);
  if (t >= mu) return {0.5 * mu, 0.0, std::nullopt};
  PenaltyValue out{t - t * t / (2.0 * mu), std::nullopt, std::nullopt};
  if (t > 0.0) out.derivative = 1.0 - t / mu;
  return out;
}

double g_eval(const PenaltySpec& spec, double w) {
  spec.validate();
  if (!std::isfinite(w)) throw std::invalid_argument("g_eval: non-finite w");
  switch (spec.family) {
    case PenaltyFamily::Soft: return std::abs(w);
    case PenaltyFamily::PShrink: return g_p_eval(w, spec.lambda, spec.p).value;
    case PenaltyFamily::Firm: return g_firm_eval(w, spec.lambda, spec.mu).value;
    case PenaltyFamily::Hard: return g_firm_eval(w, spec.lambda, spec.lambda).value;
  }
  throw std::logic_error("g_eval: unreachable");
}

double g_deriv(const PenaltySpec& spec, double w) {
  spec.validate();
  if (w == 0.0) {
    throw std::invalid_argument("g_deriv: undefined at w = 0");
  }
  double sgn = w < 0.0 ? -1.0 : 1.0;
  double t = std::abs(w);
  switch (spec.family) {
    case PenaltyFamily::Soft: return sgn;
    case PenaltyFamily::PShrink: return sgn * g_p_deriv(t, spec.lambda, spec.p);
    case PenaltyFamily::Firm:
      return sgn * (t >= spec.mu ? 0.0 : 1.0 - t / spec.mu);
    case PenaltyFamily::Hard:
      return sgn * (t >= spec.lambda ? 0.0 : 1.0 - t / spec.lambda);
  }
  throw std::logic_error("g_deriv: unreachable");
}

double penalty_total(const PenaltySpec& spec, const Vec& w) {
  spec.validate();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) sum += g_eval(spec, w[i]);
  return sum;
}

}  // namespace proxrec
