#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "proxrec/shrinkage.hpp"

namespace proxrec {

/// Underdetermined measurement setup Aw = b (m < n), optionally with a
/// noise radius epsilon on the data constraint.
struct SensingProblem {
  Mat A;
  Vec b;
  double epsilon = 0.0;
  bool rows_orthonormal = false;

  int m() const { return static_cast<int>(A.rows()); }
  int n() const { return static_cast<int>(A.cols()); }
  void validate() const;
};

/// A feasible vector of Aw = b supported on at most m indices.
struct BasicSolution {
  std::vector<int> support;  // sorted
  Vec values;                // values on the support
  double residual = 0.0;

  Vec dense(int n) const;
};

/// Returns an equivalent problem (EA, Eb) with EA EA^T = I; the feasible
/// set of Aw = b is preserved exactly.
SensingProblem orthonormalize_rows(const SensingProblem& problem);

struct UrpResult {
  bool holds = false;
  bool exhaustive = false;
  std::int64_t checked = 0;
};

/// Unique Representation Property: every m columns linearly independent.
/// Exhaustive when C(n, m) <= budget, otherwise randomized sampling.
UrpResult check_urp(const Mat& A, std::int64_t budget = 1'000'000,
                    bool allow_randomized = false, int samples = 2000,
                    std::uint64_t seed = 0);

/// i.i.d. standard normal entries; deterministic for fixed seed
/// (mt19937_64 + Box-Muller, platform independent).
Mat gaussian_matrix(int m, int n, std::uint64_t seed);

/// Seeded standard normal vector from the same generator.
Vec gaussian_vector(int n, std::uint64_t seed);

/// Largest singular value by power iteration on A^T A, 1e-8 relative.
double operator_norm(const Mat& A);

std::int64_t binomial(int n, int k);

/// All solutions of A_S w_S = b over supports |S| = m, canonicalized by
/// dropping entries below 1e-10 and deduplicated.
std::vector<BasicSolution> enumerate_basic_solutions(
    const SensingProblem& problem, std::int64_t budget = 1'000'000);

/// Visits every size-k subset of {0..n-1}.
void for_each_support(int n, int k,
                      const std::function<void(const std::vector<int>&)>& fn);

}  // namespace proxrec
