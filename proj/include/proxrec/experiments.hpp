#pragma once

#include <string>
#include <vector>

#include "proxrec/imaging.hpp"

namespace proxrec {

struct PhaseDiagramConfig {
  int n = 32;
  std::vector<int> m_values;
  std::vector<int> k_values;
  int trials = 50;
  std::uint64_t seed = 0;
  double success_tol = 1e-4;
  PenaltySpec spec = PenaltySpec::soft(1e-3);
  int max_iters = 5000;
};

struct PhaseCell {
  int m = 0;
  int k = 0;
  double success_rate = 0.0;
};

/// Seeded Gaussian A (rows orthonormalized), planted k-sparse x with entries
/// sign * (1 + U[0,1]), b = Ax; solved by equality ADMM. Success on relative
/// l2 error <= success_tol. Deterministic per (config, seed): trial seeds are
/// derived by hashing (seed, cell, trial).
std::vector<PhaseCell> phase_diagram(const PhaseDiagramConfig& config);

struct PhantomSweepConfig {
  int size = 64;
  std::vector<int> line_counts;
  std::vector<PenaltySpec> specs;
  double success_tol = 1e-3;
  int max_iters = 4000;
  double step_tol = 1e-12;
  double rho_over_lambda = 10.0;
  double angle_offset = 0.0;  // radians added to every mask line angle
  bool stop_at_first_success = false;  // skip larger line counts once successful
};

struct PhantomRun {
  int spec_index = 0;  // into config.specs
  int lines = 0;
  double rel_error = 0.0;
  int iterations = 0;
};

struct PhantomSweepResult {
  std::vector<PhantomRun> runs;
  // minimal successful line count per spec, -1 when none succeeded;
  // indexed like config.specs
  std::vector<int> min_lines;
};

PhantomSweepResult phantom_sweep(const PhantomSweepConfig& config);

/// Derived seed for one trial so parallel execution order cannot matter.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t cell, std::uint64_t trial);

}  // namespace proxrec
