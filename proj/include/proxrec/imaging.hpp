#pragma once

#include <complex>

#include "proxrec/solvers.hpp"

namespace proxrec {

using MatC = Eigen::MatrixXcd;
using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Radial set of retained DFT frequencies. DC is always sampled and the set
/// is centrally symmetric so real images stay real.
struct FourierMask {
  int size = 0;
  int lines = 0;
  BoolGrid sampled;  // FFT index order

  int count() const { return static_cast<int>(sampled.count()); }
};

/// Ten-ellipse Shepp-Logan phantom (modified contrast values, range [0, 1]),
/// rasterized by midpoint sampling on [-1, 1]^2.
Mat shepp_logan(int size);

/// n_lines equally-angled lines through DC, Bresenham-rasterized on the
/// centered grid and then symmetrized.
FourierMask radial_mask(int size, int n_lines, double angle_offset = 0.0);

/// Unnormalized forward 2-D DFT and its inverse (inverse carries the 1/N^2).
MatC dft2(const Mat& img);
MatC dft2(const MatC& img);
MatC idft2(const MatC& freq);

/// Forward differences with periodic wraparound; div is the exact negative
/// adjoint of grad.
void grad(const Mat& img, Mat& gx, Mat& gy);
Mat div(const Mat& gx, const Mat& gy);

/// DFT samples of an image on the mask (zeros elsewhere).
MatC sample_dft(const Mat& img, const FourierMask& mask);

struct TvResult {
  Mat image;
  int iterations = 0;
  Termination termination = Termination::MaxIters;
  double primal_residual = 0.0;
  double max_imag = 0.0;  // largest imaginary magnitude seen in x-updates
};

/// ADMM for min G(grad x) subject to the DFT matching `data` on the mask.
/// Gradient shrinkage is anisotropic (per component) unless isotropic is set.
TvResult tv_admm_reconstruct(const MatC& data, const FourierMask& mask,
                             const PenaltySpec& spec, const SolverConfig& config,
                             bool isotropic = false);

}  // namespace proxrec
