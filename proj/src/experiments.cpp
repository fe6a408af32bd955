#include "proxrec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "proxrec/solvers.hpp"

namespace proxrec {

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t cell, std::uint64_t trial) {
  // splitmix64 finalizer over the packed triple
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (cell + 1) +
                    0xbf58476d1ce4e5b9ull * (trial + 1);
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

std::vector<PhaseCell> phase_diagram(const PhaseDiagramConfig& config) {
  if (config.trials < 1 || config.m_values.empty() || config.k_values.empty()) {
    throw std::invalid_argument("phase_diagram: trials >= 1 and nonempty ranges");
  }
  config.spec.validate();
  std::vector<PhaseCell> cells;
  std::uint64_t cell_index = 0;
  for (int m : config.m_values) {
    for (int k : config.k_values) {
      if (m < 1 || m >= config.n || k < 0 || k > config.n) {
        throw std::invalid_argument("phase_diagram: requires 1 <= m < n, 0 <= k <= n");
      }
      int successes = 0;
      for (int trial = 0; trial < config.trials; ++trial) {
        std::uint64_t s = trial_seed(config.seed, cell_index, trial);
        SensingProblem p;
        p.A = gaussian_matrix(m, config.n, s);
        p.b = Vec::Zero(m);
        p = orthonormalize_rows(p);

        std::mt19937_64 rng(s ^ 0x5851f42d4c957f2dull);
        std::vector<int> perm(config.n);
        std::iota(perm.begin(), perm.end(), 0);
        Vec x = Vec::Zero(config.n);
        for (int i = 0; i < k; ++i) {
          std::uniform_int_distribution<int> pick(i, config.n - 1);
          std::swap(perm[i], perm[pick(rng)]);
          double u = (rng() >> 11) * 0x1.0p-53;
          double sign = (rng() & 1) ? 1.0 : -1.0;
          x[perm[i]] = sign * (1.0 + u);
        }
        p.b = p.A * x;

        SolverConfig cfg;
        cfg.max_iters = config.max_iters;
        cfg.step_tol = 1e-12;
        Vec got = admm_equality_solve(p, config.spec, cfg).x_final;
        double xn = x.norm();
        double err = xn > 0.0 ? (got - x).norm() / xn : got.norm();
        if (err <= config.success_tol) ++successes;
      }
      cells.push_back({m, k, static_cast<double>(successes) / config.trials});
      ++cell_index;
    }
  }
  return cells;
}

PhantomSweepResult phantom_sweep(const PhantomSweepConfig& config) {
  if (config.line_counts.empty() || config.specs.empty()) {
    throw std::invalid_argument("phantom_sweep: nonempty line counts and penalties");
  }
  Mat phantom = shepp_logan(config.size);
  double pnorm = phantom.norm();
  std::vector<int> line_counts = config.line_counts;
  std::sort(line_counts.begin(), line_counts.end());

  PhantomSweepResult result;
  for (std::size_t si = 0; si < config.specs.size(); ++si) {
    const auto& spec = config.specs[si];
    spec.validate();
    int min_lines = -1;
    for (int lines : line_counts) {
      if (min_lines >= 0 && config.stop_at_first_success) break;
      auto mask = radial_mask(config.size, lines, config.angle_offset);
      MatC data = sample_dft(phantom, mask);
      SolverConfig cfg;
      cfg.max_iters = config.max_iters;
      cfg.step_tol = config.step_tol;
      cfg.admm_rho = config.rho_over_lambda * spec.lambda;
      auto rec = tv_admm_reconstruct(data, mask, spec, cfg);
      double err = (rec.image - phantom).norm() / pnorm;
      result.runs.push_back({static_cast<int>(si), lines, err, rec.iterations});
      if (min_lines < 0 && err <= config.success_tol) min_lines = lines;
    }
    result.min_lines.push_back(min_lines);
  }
  return result;
}

}  // namespace proxrec
