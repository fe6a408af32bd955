#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "proxrec/imaging.hpp"

using namespace proxrec;

namespace {

FourierMask full_mask(int size) {
  FourierMask m;
  m.size = size;
  m.lines = 0;
  m.sampled = BoolGrid::Constant(size, size, true);
  return m;
}

Mat seeded_image(int size, std::uint64_t seed) {
  Mat img(size, size);
  Vec v = gaussian_vector(size * size, seed);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) img(i, j) = v[i * size + j];
  return img;
}

}  // namespace

TEST_CASE("phantom range and landmark values") {
  Mat ph = shepp_logan(64);
  CHECK(ph.rows() == 64);
  CHECK(ph.minCoeff() >= 0.0);
  CHECK(ph.maxCoeff() <= 1.0);
  CHECK(ph(0, 0) == 0.0);                        // corners outside every ellipse
  CHECK(ph(32, 32) == doctest::Approx(0.2));     // stacked values at the center
  CHECK(ph(1, 32) == 0.0);                       // above the head
  CHECK(ph.maxCoeff() > 0.9);                    // skull shell present
}

TEST_CASE("phantom is resolution consistent") {
  Mat a = shepp_logan(32);
  Mat b = shepp_logan(64);
  // downsample b by point sampling at cell centers of the coarse grid
  double diff = 0.0;
  int cnt = 0;
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 32; ++j) {
      diff += std::abs(a(i, j) - b(2 * i, 2 * j));
      ++cnt;
    }
  }
  CHECK(diff / cnt < 0.05);  // only boundary cells disagree
}

TEST_CASE("radial mask basics") {
  auto m1 = radial_mask(64, 1);
  CHECK(m1.sampled(0, 0));  // DC always kept
  CHECK(m1.count() >= 64);
  CHECK(m1.count() <= 2 * 64);
  auto m6 = radial_mask(64, 6);
  auto m18 = radial_mask(64, 18);
  CHECK(m6.count() > m1.count());
  CHECK(m18.count() > m6.count());
  CHECK(m18.count() < 2 * 18 * 64);
  // central symmetry in FFT index order
  for (int u = 0; u < 64; ++u) {
    for (int v = 0; v < 64; ++v) {
      CHECK(m18.sampled(u, v) == m18.sampled((64 - u) % 64, (64 - v) % 64));
    }
  }
}

TEST_CASE("dft round trip") {
  Mat img = seeded_image(32, 9);
  MatC back = idft2(dft2(img));
  double err = 0.0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      err = std::max(err, std::abs(back(i, j) - std::complex<double>(img(i, j))));
  CHECK(err <= 1e-10);
  // forward transform is unnormalized: DC bin holds the plain sum
  CHECK(dft2(img)(0, 0).real() == doctest::Approx(img.sum()).epsilon(1e-12));
}

TEST_CASE("gradient of a constant image is zero") {
  Mat c = Mat::Constant(16, 16, 3.7);
  Mat gx, gy;
  grad(c, gx, gy);
  CHECK(gx.cwiseAbs().maxCoeff() == 0.0);
  CHECK(gy.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("div is the negative adjoint of grad") {
  Mat u = seeded_image(16, 1);
  Mat vx = seeded_image(16, 2);
  Mat vy = seeded_image(16, 3);
  Mat gx, gy;
  grad(u, gx, gy);
  double lhs = (gx.cwiseProduct(vx) + gy.cwiseProduct(vy)).sum();
  double rhs = -(u.cwiseProduct(div(vx, vy))).sum();
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("gradient of an impulse") {
  Mat img = Mat::Zero(8, 8);
  img(3, 4) = 1.0;
  Mat gx, gy;
  grad(img, gx, gy);
  CHECK((gx.array() != 0.0).count() == 2);
  CHECK((gy.array() != 0.0).count() == 2);
  CHECK(gx.sum() == doctest::Approx(0.0));
  CHECK(gy.sum() == doctest::Approx(0.0));
}

TEST_CASE("sample_dft zeroes the complement of the mask") {
  Mat img = seeded_image(16, 4);
  auto mask = radial_mask(16, 2);
  MatC s = sample_dft(img, mask);
  MatC f = dft2(img);
  for (int u = 0; u < 16; ++u) {
    for (int v = 0; v < 16; ++v) {
      if (mask.sampled(u, v)) {
        CHECK(std::abs(s(u, v) - f(u, v)) <= 1e-10);
      } else {
        CHECK(std::abs(s(u, v)) == 0.0);
      }
    }
  }
}

TEST_CASE("full sampling reconstructs exactly") {
  Mat ph = shepp_logan(32);
  auto mask = full_mask(32);
  MatC data = sample_dft(ph, mask);
  SolverConfig cfg;
  cfg.max_iters = 5;
  auto res = tv_admm_reconstruct(data, mask, PenaltySpec::soft(0.1), cfg);
  CHECK((res.image - ph).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(res.max_imag <= 1e-8);
}

TEST_CASE("reconstruction satisfies the sampling constraint") {
  Mat ph = shepp_logan(32);
  auto mask = radial_mask(32, 8);
  MatC data = sample_dft(ph, mask);
  SolverConfig cfg;
  cfg.max_iters = 300;
  cfg.step_tol = 1e-10;
  auto res = tv_admm_reconstruct(data, mask, PenaltySpec::pshrink(0.1, 0.5), cfg);
  MatC f = dft2(res.image);
  double err = 0.0;
  for (int u = 0; u < 32; ++u)
    for (int v = 0; v < 32; ++v)
      if (mask.sampled(u, v)) err = std::max(err, std::abs(f(u, v) - data(u, v)));
  CHECK(err <= 1e-6);
  CHECK(res.max_imag <= 1e-8);
  CHECK(res.image.allFinite());
}

TEST_CASE("primal residual trends down") {
  Mat ph = shepp_logan(32);
  auto mask = radial_mask(32, 10);
  MatC data = sample_dft(ph, mask);
  SolverConfig few, many;
  few.max_iters = 20;
  many.max_iters = 400;
  few.step_tol = many.step_tol = 0.0;  // force fixed iteration counts
  auto a = tv_admm_reconstruct(data, mask, PenaltySpec::soft(0.1), few);
  auto b = tv_admm_reconstruct(data, mask, PenaltySpec::soft(0.1), many);
  CHECK(b.primal_residual < a.primal_residual);
}

TEST_CASE("isotropic and anisotropic modes both run") {
  Mat ph = shepp_logan(16);
  auto mask = radial_mask(16, 6);
  MatC data = sample_dft(ph, mask);
  SolverConfig cfg;
  cfg.max_iters = 100;
  auto aniso = tv_admm_reconstruct(data, mask, PenaltySpec::soft(0.1), cfg, false);
  auto iso = tv_admm_reconstruct(data, mask, PenaltySpec::soft(0.1), cfg, true);
  CHECK(aniso.image.allFinite());
  CHECK(iso.image.allFinite());
  CHECK((aniso.image - iso.image).cwiseAbs().maxCoeff() > 0.0);
}
