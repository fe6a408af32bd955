#include "proxrec/imaging.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace proxrec {

namespace {

MatC fft2_impl(const MatC& in, int sign) {
  const int rows = static_cast<int>(in.rows());
  const int cols = static_cast<int>(in.cols());
  MatC out(rows, cols);
  // FFTW is row-major; map (row, col) directly.
  std::vector<std::complex<double>> buf_in(rows * cols), buf_out(rows * cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) buf_in[i * cols + j] = in(i, j);
  fftw_plan plan = fftw_plan_dft_2d(
      rows, cols, reinterpret_cast<fftw_complex*>(buf_in.data()),
      reinterpret_cast<fftw_complex*>(buf_out.data()), sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = buf_out[i * cols + j];
  if (sign == FFTW_BACKWARD) out /= static_cast<double>(rows) * cols;
  return out;
}

}  // namespace

MatC dft2(const MatC& img) { return fft2_impl(img, FFTW_FORWARD); }

MatC dft2(const Mat& img) {
  return dft2(MatC(img.cast<std::complex<double>>()));
}

MatC idft2(const MatC& freq) { return fft2_impl(freq, FFTW_BACKWARD); }

Mat shepp_logan(int size) {
  if (size < 16) throw std::invalid_argument("shepp_logan: size >= 16");
  struct Ellipse {
    double value, a, b, x0, y0, theta_deg;
  };
  static const Ellipse table[] = {
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
      {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
      {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
      {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
      {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
      {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
      {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
      {0.1, 0.0230, 0.0230, 0.0, -0.605, 0.0},
      {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
  };
  Mat img = Mat::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    double y = 1.0 - (i + 0.5) * 2.0 / size;
    for (int j = 0; j < size; ++j) {
      double x = (j + 0.5) * 2.0 / size - 1.0;
      double v = 0.0;
      for (const auto& e : table) {
        double th = e.theta_deg * M_PI / 180.0;
        double dx = x - e.x0, dy = y - e.y0;
        double xr = dx * std::cos(th) + dy * std::sin(th);
        double yr = -dx * std::sin(th) + dy * std::cos(th);
        if ((xr / e.a) * (xr / e.a) + (yr / e.b) * (yr / e.b) <= 1.0) v += e.value;
      }
      // exact cancellations like 1 - 0.8 - 0.2 leave roundoff dust
      img(i, j) = std::abs(v) < 1e-12 ? 0.0 : v;
    }
  }
  return img;
}

FourierMask radial_mask(int size, int n_lines, double angle_offset) {
  if (n_lines < 1 || n_lines > size) {
    throw std::invalid_argument("radial_mask: requires 1 <= n_lines <= size");
  }
  FourierMask mask;
  mask.size = size;
  mask.lines = n_lines;
  mask.sampled = BoolGrid::Constant(size, size, false);
  const int half = size / 2;
  auto mark = [&](int fx, int fy) {
    // centered frequency -> FFT index
    if (fx < -half || fx >= half || fy < -half || fy >= half) return;
    int u = (fy % size + size) % size;
    int v = (fx % size + size) % size;
    mask.sampled(u, v) = true;
  };
  for (int t = 0; t < n_lines; ++t) {
    double theta = angle_offset + t * M_PI / n_lines;
    double c = std::cos(theta), s = std::sin(theta);
    if (std::abs(c) >= std::abs(s)) {
      for (int fx = -half; fx < half; ++fx) {
        mark(fx, static_cast<int>(std::lround(fx * s / c)));
      }
    } else {
      for (int fy = -half; fy < half; ++fy) {
        mark(static_cast<int>(std::lround(fy * c / s)), fy);
      }
    }
  }
  mask.sampled(0, 0) = true;
  // central symmetry so real images produce conjugate-symmetric data
  BoolGrid sym = mask.sampled;
  for (int u = 0; u < size; ++u) {
    for (int v = 0; v < size; ++v) {
      if (mask.sampled(u, v)) sym((size - u) % size, (size - v) % size) = true;
    }
  }
  mask.sampled = sym;
  return mask;
}

void grad(const Mat& img, Mat& gx, Mat& gy) {
  const int h = static_cast<int>(img.rows());
  const int w = static_cast<int>(img.cols());
  gx.resize(h, w);
  gy.resize(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      gx(i, j) = img(i, (j + 1) % w) - img(i, j);
      gy(i, j) = img((i + 1) % h, j) - img(i, j);
    }
  }
}

Mat div(const Mat& gx, const Mat& gy) {
  const int h = static_cast<int>(gx.rows());
  const int w = static_cast<int>(gx.cols());
  Mat out(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      out(i, j) = gx(i, j) - gx(i, (j - 1 + w) % w) + gy(i, j) - gy((i - 1 + h) % h, j);
    }
  }
  return out;
}

MatC sample_dft(const Mat& img, const FourierMask& mask) {
  MatC freq = dft2(img);
  for (int u = 0; u < mask.size; ++u)
    for (int v = 0; v < mask.size; ++v)
      if (!mask.sampled(u, v)) freq(u, v) = 0.0;
  return freq;
}

TvResult tv_admm_reconstruct(const MatC& data, const FourierMask& mask,
                             const PenaltySpec& spec, const SolverConfig& config,
                             bool isotropic) {
  spec.validate();
  const int N = mask.size;
  if (data.rows() != N || data.cols() != N) {
    throw std::invalid_argument("tv_admm_reconstruct: data/mask size mismatch");
  }
  const double rho = config.admm_rho;
  if (!(rho > 0.0)) throw std::invalid_argument("tv_admm_reconstruct: rho must be positive");

  PenaltySpec zspec = spec;
  zspec.lambda = spec.lambda / rho;
  if (zspec.family == PenaltyFamily::Firm && zspec.mu < zspec.lambda) zspec.mu = zspec.lambda;

  // Fourier symbols of the periodic forward-difference operators
  MatC dx_hat(N, N), dy_hat(N, N);
  Mat denom(N, N);
  for (int u = 0; u < N; ++u) {
    for (int v = 0; v < N; ++v) {
      std::complex<double> ex = std::polar(1.0, 2.0 * M_PI * v / N) - 1.0;
      std::complex<double> ey = std::polar(1.0, 2.0 * M_PI * u / N) - 1.0;
      dx_hat(u, v) = ex;
      dy_hat(u, v) = ey;
      denom(u, v) = std::norm(ex) + std::norm(ey);
    }
  }

  auto shrink_fields = [&](const Mat& vx, const Mat& vy, Mat& dx, Mat& dy) {
    if (!isotropic) {
      dx.resize(N, N);
      dy.resize(N, N);
      for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
          dx(i, j) = apply_shrinkage_scalar(zspec, vx(i, j));
          dy(i, j) = apply_shrinkage_scalar(zspec, vy(i, j));
        }
      }
    } else {
      dx.resize(N, N);
      dy.resize(N, N);
      for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
          double mag = std::hypot(vx(i, j), vy(i, j));
          double s = mag > 0.0 ? apply_shrinkage_scalar(zspec, mag) / mag : 0.0;
          dx(i, j) = s * vx(i, j);
          dy(i, j) = s * vy(i, j);
        }
      }
    }
  };

  TvResult res;
  // zero-filled start: masked frequencies from data, rest 0
  MatC x_hat = data;
  MatC x_c = idft2(x_hat);
  res.max_imag = x_c.imag().cwiseAbs().maxCoeff();
  Mat x = x_c.real();

  Mat gx, gy, dx, dy, ux = Mat::Zero(N, N), uy = Mat::Zero(N, N);
  grad(x, gx, gy);

  for (int it = 0; it < config.max_iters; ++it) {
    shrink_fields(gx + ux, gy + uy, dx, dy);

    // exact x-update: quadratic is diagonal in the Fourier domain, sampled
    // frequencies are pinned to the data
    MatC vx_hat = dft2(Mat(dx - ux));
    MatC vy_hat = dft2(Mat(dy - uy));
    for (int u = 0; u < N; ++u) {
      for (int v = 0; v < N; ++v) {
        if (mask.sampled(u, v)) {
          x_hat(u, v) = data(u, v);
        } else {
          x_hat(u, v) = (std::conj(dx_hat(u, v)) * vx_hat(u, v) +
                         std::conj(dy_hat(u, v)) * vy_hat(u, v)) /
                        denom(u, v);
        }
      }
    }
    x_c = idft2(x_hat);
    res.max_imag = std::max(res.max_imag, x_c.imag().cwiseAbs().maxCoeff());
    x = x_c.real();

    grad(x, gx, gy);
    ux += gx - dx;
    uy += gy - dy;

    double primal = std::sqrt((gx - dx).squaredNorm() + (gy - dy).squaredNorm());
    res.primal_residual = primal;
    res.iterations = it + 1;
    if (primal <= config.step_tol) {
      res.termination = Termination::Converged;
      break;
    }
  }
  res.image = x;
  return res;
}

}  // namespace proxrec
