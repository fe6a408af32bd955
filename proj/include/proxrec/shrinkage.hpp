#pragma once

#include <Eigen/Dense>
#include <string>

namespace proxrec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class PenaltyFamily { Soft, PShrink, Firm, Hard };

/// Penalty family plus parameters. Single source of truth for both the
/// shrinkage S and the induced penalty g.
struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::Soft;
  double lambda = 1.0;  // threshold scale, > 0
  double p = 1.0;       // PShrink only, p <= 1
  double mu = 0.0;      // Firm only, mu >= lambda

  void validate() const;
  static PenaltySpec soft(double lambda);
  static PenaltySpec pshrink(double lambda, double p);
  static PenaltySpec firm(double lambda, double mu);
  static PenaltySpec hard(double lambda);
};

std::string family_name(PenaltyFamily f);
PenaltyFamily family_from_name(const std::string& name);

// Scalar shrinkage functions, defined on t >= 0 and extended oddly by the
// vector versions below. Tie at t == lambda maps to 0 in every family.
double soft_threshold_scalar(double t, double lambda);
double p_shrink_scalar(double t, double lambda, double p);
double hard_threshold_scalar(double t, double lambda);
double firm_threshold_scalar(double t, double lambda, double mu);

Vec soft_threshold(const Vec& x, double lambda);
Vec p_shrink(const Vec& x, double lambda, double p);
Vec hard_threshold(const Vec& x, double lambda);
Vec firm_threshold(const Vec& x, double lambda, double mu);

/// Dispatch over the spec's family.
Vec apply_shrinkage(const PenaltySpec& spec, const Vec& x);
double apply_shrinkage_scalar(const PenaltySpec& spec, double x);

}  // namespace proxrec
