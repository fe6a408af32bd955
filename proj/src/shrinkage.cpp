#include "proxrec/shrinkage.hpp"

#include <cmath>
#include <stdexcept>

namespace proxrec {

namespace {

void check_finite(const Vec& x) {
  if (!x.allFinite()) {
    throw std::invalid_argument("shrinkage: input contains NaN or Inf");
  }
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("shrinkage: lambda must be positive and finite");
  }
}

}  // namespace

void PenaltySpec::validate() const {
  check_lambda(lambda);
  switch (family) {
    case PenaltyFamily::PShrink:
      if (!(p <= 1.0) || !std::isfinite(p)) {
        throw std::invalid_argument("PenaltySpec: PShrink requires p <= 1");
      }
      break;
    case PenaltyFamily::Firm:
      if (!(mu >= lambda) || !std::isfinite(mu)) {
        throw std::invalid_argument("PenaltySpec: Firm requires mu >= lambda");
      }
      break;
    default:
      break;
  }
}

PenaltySpec PenaltySpec::soft(double lambda) {
  return {PenaltyFamily::Soft, lambda, 1.0, 0.0};
}

PenaltySpec PenaltySpec::pshrink(double lambda, double p) {
  return {PenaltyFamily::PShrink, lambda, p, 0.0};
}

PenaltySpec PenaltySpec::firm(double lambda, double mu) {
  return {PenaltyFamily::Firm, lambda, 1.0, mu};
}

PenaltySpec PenaltySpec::hard(double lambda) {
  return {PenaltyFamily::Hard, lambda, 1.0, 0.0};
}

std::string family_name(PenaltyFamily f) {
  switch (f) {
    case PenaltyFamily::Soft: return "soft";
    case PenaltyFamily::PShrink: return "pshrink";
    case PenaltyFamily::Firm: return "firm";
    case PenaltyFamily::Hard: return "hard";
  }
  return "unknown";
}

PenaltyFamily family_from_name(const std::string& name) {
  if (name == "soft" || name == "l1") return PenaltyFamily::Soft;
  if (name == "pshrink") return PenaltyFamily::PShrink;
  if (name == "firm") return PenaltyFamily::Firm;
  if (name == "hard") return PenaltyFamily::Hard;
  throw std::invalid_argument("unknown penalty family: " + name);
}

double soft_threshold_scalar(double t, double lambda) {
  return t > lambda ? t - lambda : 0.0;
}

double p_shrink_scalar(double t, double lambda, double p) {
  if (t <= lambda) return 0.0;
  // lambda^{2-p} t^{p-1} written as lambda (t/lambda)^{p-1}; the direct power
  // of lambda overflows for very negative p.
  double gap = lambda * std::exp((p - 1.0) * std::log(t / lambda));
  double s = t - gap;
  return s > 0.0 ? s : 0.0;
}

double hard_threshold_scalar(double t, double lambda) {
  return t > lambda ? t : 0.0;
}

double firm_threshold_scalar(double t, double lambda, double mu) {
  if (t <= lambda) return 0.0;
  if (t >= mu) return t;
  return mu / (mu - lambda) * (t - lambda);
}

namespace {

template <typename F>
Vec odd_map(const Vec& x, F scalar) {
  check_finite(x);
  Vec out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double t = std::abs(x[i]);
    out[i] = scalar(t) * (x[i] < 0.0 ? -1.0 : 1.0);
  }
  return out;
}

}  // namespace

Vec soft_threshold(const Vec& x, double lambda) {
  check_lambda(lambda);
  return odd_map(x, [&](double t) { return soft_threshold_scalar(t, lambda); });
}

Vec p_shrink(const Vec& x, double lambda, double p) {
  check_lambda(lambda);
  if (!(p < 2.0) || !std::isfinite(p)) {
    throw std::invalid_argument("p_shrink: requires p < 2 (formula degenerates)");
  }
  return odd_map(x, [&](double t) { return p_shrink_scalar(t, lambda, p); });
}

Vec hard_threshold(const Vec& x, double lambda) {
  check_lambda(lambda);
  return odd_map(x, [&](double t) { return hard_threshold_scalar(t, lambda); });
}

Vec firm_threshold(const Vec& x, double lambda, double mu) {
  check_lambda(lambda);
  if (!(mu > lambda)) {
    throw std::invalid_argument(
        "firm_threshold: requires mu > lambda (use hard_threshold for mu == lambda)");
  }
  return odd_map(x, [&](double t) { return firm_threshold_scalar(t, lambda, mu); });
}

Vec apply_shrinkage(const PenaltySpec& spec, const Vec& x) {
  spec.validate();
  switch (spec.family) {
    case PenaltyFamily::Soft: return soft_threshold(x, spec.lambda);
    case PenaltyFamily::PShrink: return p_shrink(x, spec.lambda, spec.p);
    case PenaltyFamily::Firm:
      if (spec.mu == spec.lambda) return hard_threshold(x, spec.lambda);
      return firm_threshold(x, spec.lambda, spec.mu);
    case PenaltyFamily::Hard: return hard_threshold(x, spec.lambda);
  }
  throw std::logic_error("apply_shrinkage: unreachable");
}

double apply_shrinkage_scalar(const PenaltySpec& spec, double x) {
  Vec v(1);
  v[0] = x;
  return apply_shrinkage(spec, v)[0];
}

}  // namespace proxrec
