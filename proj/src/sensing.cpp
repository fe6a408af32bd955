#include "proxrec/sensing.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace proxrec {

namespace {
constexpr double kRankTol = 1e-10;     // singular-value threshold, relative
constexpr double kEntryTol = 1e-10;    // magnitude below which entries drop
}  // namespace

void SensingProblem::validate() const {
  if (A.rows() >= A.cols()) {
    throw std::invalid_argument("SensingProblem: requires m < n");
  }
  if (b.size() != A.rows()) {
    throw std::invalid_argument("SensingProblem: b length must equal m");
  }
  if (epsilon < 0.0) {
    throw std::invalid_argument("SensingProblem: epsilon must be nonnegative");
  }
  if (rows_orthonormal) {
    Mat gram = A * A.transpose() - Mat::Identity(A.rows(), A.rows());
    if (gram.cwiseAbs().maxCoeff() > 1e-10) {
      throw std::invalid_argument("SensingProblem: rows_orthonormal flag set but AA^T != I");
    }
  }
}

Vec BasicSolution::dense(int n) const {
  Vec x = Vec::Zero(n);
  for (std::size_t i = 0; i < support.size(); ++i) x[support[i]] = values[i];
  return x;
}

SensingProblem orthonormalize_rows(const SensingProblem& problem) {
  const Mat& A = problem.A;
  const int m = problem.m();
  // QR of A^T: A^T = Q R, so A = R^T Q^T. New rows Q^T are orthonormal and
  // b transforms by R^{-T}, keeping the feasible set identical.
  Eigen::HouseholderQR<Mat> qr(A.transpose());
  Mat Q = qr.householderQ() * Mat::Identity(problem.n(), m);
  Mat R = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  double dmax = R.diagonal().cwiseAbs().maxCoeff();
  if (R.diagonal().cwiseAbs().minCoeff() <= kRankTol * dmax) {
    throw std::runtime_error("orthonormalize_rows: rows are rank deficient");
  }
  SensingProblem out;
  out.A = Q.transpose();
  out.b = R.transpose().triangularView<Eigen::Lower>().solve(problem.b);
  out.epsilon = problem.epsilon;
  out.rows_orthonormal = true;
  return out;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r < 0) return std::numeric_limits<std::int64_t>::max();
  }
  return r;
}

void for_each_support(int n, int k,
                      const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

namespace {

bool submatrix_full_rank(const Mat& A, const std::vector<int>& cols) {
  Mat sub(A.rows(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) sub.col(j) = A.col(cols[j]);
  Eigen::JacobiSVD<Mat> svd(sub);
  const auto& sv = svd.singularValues();
  return sv[sv.size() - 1] > kRankTol * sv[0];
}

}  // namespace

UrpResult check_urp(const Mat& A, std::int64_t budget, bool allow_randomized,
                    int samples, std::uint64_t seed) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  UrpResult res;
  if (m <= 20 && binomial(n, m) <= budget) {
    res.exhaustive = true;
    res.holds = true;
    for_each_support(n, m, [&](const std::vector<int>& cols) {
      ++res.checked;
      if (res.holds && !submatrix_full_rank(A, cols)) res.holds = false;
    });
    return res;
  }
  if (!allow_randomized) {
    throw std::runtime_error("check_urp: combinatorial budget exceeded; enable randomized mode");
  }
  std::mt19937_64 rng(seed);
  res.holds = true;
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  for (int s = 0; s < samples && res.holds; ++s) {
    std::vector<int> cols(all);
    for (int i = 0; i < m; ++i) {
      std::uniform_int_distribution<int> pick(i, n - 1);
      std::swap(cols[i], cols[pick(rng)]);
    }
    cols.resize(m);
    ++res.checked;
    if (!submatrix_full_rank(A, cols)) res.holds = false;
  }
  return res;
}

namespace {

// Box-Muller over mt19937_64; std::normal_distribution is not bit-identical
// across standard libraries.
class SeededGauss {
 public:
  explicit SeededGauss(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  double uniform() {
    return (rng_() >> 11) * 0x1.0p-53;
  }
  std::mt19937_64 rng_;
  bool have_ = false;
  double spare_ = 0.0;
};

}  // namespace

Mat gaussian_matrix(int m, int n, std::uint64_t seed) {
  if (!(0 < m && m < n)) {
    throw std::invalid_argument("gaussian_matrix: requires 0 < m < n");
  }
  SeededGauss g(seed);
  Mat A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = g.next();
  return A;
}

Vec gaussian_vector(int n, std::uint64_t seed) {
  SeededGauss g(seed);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = g.next();
  return v;
}

double operator_norm(const Mat& A) {
  if (!A.allFinite()) throw std::invalid_argument("operator_norm: non-finite entries");
  if (A.size() == 0) return 0.0;
  Mat AtA = A.transpose() * A;
  const int n = static_cast<int>(AtA.rows());
  Vec v = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
  double prev = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Vec w = AtA * v;
    double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (std::abs(norm - prev) <= 1e-10 * std::max(norm, 1e-300)) {
      return std::sqrt(norm);
    }
    prev = norm;
  }
  return std::sqrt(prev);
}

std::vector<BasicSolution> enumerate_basic_solutions(const SensingProblem& problem,
                                                     std::int64_t budget) {
  problem.validate();
  const int m = problem.m();
  const int n = problem.n();
  if (binomial(n, m) > budget) {
    throw std::runtime_error("enumerate_basic_solutions: enumeration budget exceeded");
  }
  std::vector<BasicSolution> out;
  std::vector<std::size_t> sparse_idx;  // entries with support smaller than m
  for_each_support(n, m, [&](const std::vector<int>& cols) {
    Mat sub(m, m);
    for (int j = 0; j < m; ++j) sub.col(j) = problem.A.col(cols[j]);
    Eigen::FullPivLU<Mat> lu(sub);
    lu.setThreshold(kRankTol);
    if (!lu.isInvertible()) return;  // URP assumed; skip degenerate supports
    Vec ws = lu.solve(problem.b);
    BasicSolution sol;
    for (int j = 0; j < m; ++j) {
      if (std::abs(ws[j]) > kEntryTol) sol.support.push_back(cols[j]);
    }
    sol.values.resize(sol.support.size());
    int k = 0;
    for (int j = 0; j < m; ++j) {
      if (std::abs(ws[j]) > kEntryTol) sol.values[k++] = ws[j];
    }
    sol.residual = (sub * ws - problem.b).norm();
    // Only solutions sparser than m can recur (once per containing support);
    // full-size supports are unique under URP.
    if (static_cast<int>(sol.support.size()) < m) {
      for (std::size_t idx : sparse_idx) {
        const auto& prev = out[idx];
        if (prev.support == sol.support &&
            (prev.values - sol.values).lpNorm<Eigen::Infinity>() <= 1e-9) {
          return;
        }
      }
      sparse_idx.push_back(out.size());
    }
    out.push_back(std::move(sol));
  });
  return out;
}

}  // namespace proxrec
