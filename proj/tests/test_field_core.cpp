// Copyright 2026 The qrns Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qrns/spectral.hpp"
#include "qrns/transform.hpp"
#include "test_util.hpp"

namespace qrns {
namespace {

using testing::grid_l2_sq;
using testing::max_abs;
using testing::max_abs_coeff;
using testing::max_abs_diff;
using testing::white_noise;

TEST(Lattice, SizesAndCutoff) {
  const Lattice l8 = make_lattice(8);
  EXPECT_EQ(l8.dealias_cutoff(), 2);
  EXPECT_EQ(l8.size(), 512u);
  EXPECT_EQ(make_lattice(32).dealias_cutoff(), 10);
  EXPECT_LT(make_lattice(512).dealias_cutoff(), 256);
}

TEST(Lattice, RejectsBadSizes) {
  EXPECT_THROW(make_lattice(12), InvalidArgument);
  EXPECT_THROW(make_lattice(4), InvalidArgument);
  EXPECT_THROW(make_lattice(1024), InvalidArgument);
  EXPECT_THROW(make_lattice(0), InvalidArgument);
  EXPECT_THROW(make_lattice(-8), InvalidArgument);
}

TEST(Lattice, FftOrderAndNegation) {
  const Lattice lat = make_lattice(8);
  EXPECT_EQ(lat.wavenumber(0), 0);
  EXPECT_EQ(lat.wavenumber(3), 3);
  EXPECT_EQ(lat.wavenumber(4), -4);
  EXPECT_EQ(lat.wavenumber(7), -1);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Wavevector k = lat.wavevector(i);
    const Wavevector m = lat.wavevector(lat.negated(i));
    for (int j = 0; j < 3; ++j) EXPECT_EQ((k[j] + m[j]) % lat.n(), 0);
    EXPECT_EQ(lat.negated(lat.negated(i)), i);
  }
}

TEST(Transform, SingleSineMode) {
  for (int n : {8, 16, 32}) {
    const Lattice lat = make_lattice(n);
    const auto f = PhysicalField::sample(lat, 1, [](double x, double, double) { return std::array{std::sin(x)}; });
    const SpectralField g = to_spectral(f);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const Wavevector k = lat.wavevector(i);
      Complex expected{};
      if (k == Wavevector{1, 0, 0}) expected = {0.0, -0.5};
      if (k == Wavevector{-1, 0, 0}) expected = {0.0, 0.5};
      EXPECT_NEAR(std::abs(g[0][i] - expected), 0.0, 1e-15) << "n=" << n << " mode " << i;
    }
  }
}

TEST(Transform, Constant) {
  const Lattice lat = make_lattice(8);
  const auto f = PhysicalField::sample(lat, 1, [](double, double, double) { return std::array{1.0}; });
  const SpectralField g = to_spectral(f);
  EXPECT_NEAR(std::abs(g[0][0] - 1.0), 0.0, 1e-15);
  for (std::size_t i = 1; i < lat.size(); ++i) EXPECT_LT(std::abs(g[0][i]), 1e-15);
}

TEST(Transform, WhiteNoiseRoundTrip) {
  for (int n : {8, 32}) {
    const Lattice lat = make_lattice(n);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    PhysicalField f = PhysicalField::zeros(lat, 3);
    for (auto& comp : f.components)
      for (double& v : comp) v = gauss(rng);
    const PhysicalField back = to_physical(to_spectral(f));
    double err = 0.0;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < lat.size(); ++i) err = std::max(err, std::abs(back[c][i] - f[c][i]));
    EXPECT_LE(err, 1e-12 * max_abs(f));
    EXPECT_LT(hermitian_defect(to_spectral(f)), 1e-15);
  }
}

TEST(Transform, RejectsNonFinite) {
  const Lattice lat = make_lattice(8);
  PhysicalField f = PhysicalField::zeros(lat, 1);
  f[0][17] = std::nan("");
  EXPECT_THROW(to_spectral(f), InvalidArgument);
  f[0][17] = INFINITY;
  EXPECT_THROW(to_spectral(f), InvalidArgument);
}

// Property: grid quadrature of f^2 equals the coefficient l2 norm.
TEST(Transform, ParsevalOnRandomFields) {
  const Lattice lat = make_lattice(8);
  std::mt19937_64 rng(2024);
  std::lognormal_distribution<double> scale(0.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::normal_distribution<double> gauss(0.0, scale(rng));
    PhysicalField f = PhysicalField::zeros(lat, 3);
    for (auto& comp : f.components)
      for (double& v : comp) v = gauss(rng);
    const double grid = grid_l2_sq(f);
    const double coeff = compute_squared_norms(to_spectral(f)).l2;
    ASSERT_NEAR(coeff / grid, 1.0, 1e-10) << "trial " << trial;
  }
}

TEST(Leray, KillsPureGradientMode) {
  const Lattice lat = make_lattice(8);
  SpectralField u = SpectralField::zeros(lat);
  const Wavevector k{1, 2, -1};
  for (int c = 0; c < 3; ++c) u.set_real_mode(c, k, Complex(k[c], 0.0));
  const SpectralField p = leray_project(u);
  EXPECT_LT(max_abs_coeff(p), 1e-15);
}

TEST(Leray, KeepsSolenoidalMode) {
  const Lattice lat = make_lattice(8);
  SpectralField u = SpectralField::zeros(lat);
  const Wavevector k{1, 2, -1};
  // (1, 0, 1) is orthogonal to k
  u.set_real_mode(0, k, {0.3, -0.2});
  u.set_real_mode(2, k, {0.3, -0.2});
  EXPECT_EQ(max_abs_diff(leray_project(u), u), 0.0);
}

TEST(Leray, MeanModePassesThrough) {
  const Lattice lat = make_lattice(8);
  SpectralField u = white_noise(lat, 3);
  const SpectralField p = leray_project(u);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(p[c][0], u[c][0]);
}

TEST(Leray, TaylorGreenUnchanged) {
  const Lattice lat = make_lattice(16);
  const auto f = PhysicalField::sample(lat, 3, [](double x, double y, double z) {
    return std::array{std::sin(x) * std::cos(y) * std::cos(z), -std::cos(x) * std::sin(y) * std::cos(z), 0.0};
  });
  const SpectralField u = to_spectral(f);
  EXPECT_LE(max_abs_diff(leray_project(u), u), 1e-12);
}

TEST(Leray, IdempotentAndDivergenceFree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Lattice lat = make_lattice(seed % 2 ? 8 : 16);
    const SpectralField once = leray_project(white_noise(lat, seed));
    const SpectralField twice = leray_project(once);
    EXPECT_LE(max_abs_diff(once, twice), 1e-14 * std::max(1.0, max_abs_coeff(once)));
    EXPECT_LE(max_relative_divergence(once), 1e-12);
    EXPECT_LT(hermitian_defect(once), 1e-14);
  }
}

TEST(Gradient, SineAndConstant) {
  const Lattice lat = make_lattice(16);
  const auto f = PhysicalField::sample(lat, 3, [](double x, double, double) { return std::array{std::sin(x), 0.0, 0.0}; });
  const GradientTensor g = gradient(to_spectral(f));
  SpectralField d00 = SpectralField::zeros(lat, 1);
  d00[0] = g[0][0];
  const PhysicalField dx = to_physical(d00);
  const auto expected = PhysicalField::sample(lat, 1, [](double x, double, double) { return std::array{std::cos(x)}; });
  for (std::size_t i = 0; i < lat.size(); ++i) EXPECT_NEAR(dx[0][i], expected[0][i], 1e-14);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == 0 && j == 0) continue;
      for (const Complex& z : g[i][j]) EXPECT_LT(std::abs(z), 1e-15);
    }

  const auto constant = PhysicalField::sample(lat, 3, [](double, double, double) { return std::array{1.0, -2.0, 0.5}; });
  const GradientTensor gc = gradient(to_spectral(constant));
  for (const auto& row : gc)
    for (const auto& e : row)
      for (const Complex& z : e) EXPECT_LT(std::abs(z), 1e-15);
}

TEST(Gradient, ShearSemiNorm) {
  const Lattice lat = make_lattice(16);
  const auto f = PhysicalField::sample(lat, 3, [](double, double y, double) { return std::array{std::sin(y), 0.0, 0.0}; });
  // int cos^2(y) over the box = (2pi)^3 / 2
  EXPECT_NEAR(compute_norms(to_spectral(f)).h1_semi * compute_norms(to_spectral(f)).h1_semi / (kBoxVolume / 2.0), 1.0,
              1e-14);
}

// Fourth-order centered differences as an independent oracle.
TEST(Gradient, AgreesWithFourthOrderDifferences) {
  const Lattice lat = make_lattice(32);
  const int n = lat.n();
  const double h = lat.spacing();
  const auto fn = [](double x, double y) { return std::sin(x) * std::cos(y); };
  const auto f = PhysicalField::sample(lat, 3, [&](double x, double y, double) { return std::array{fn(x, y), 0.0, 0.0}; });
  const GradientTensor g = gradient(to_spectral(f));
  for (int j = 0; j < 2; ++j) {
    SpectralField d = SpectralField::zeros(lat, 1);
    d[0] = g[0][j];
    const PhysicalField spectral = to_physical(d);
    double err = 0.0, scale = 0.0;
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1) {
        const double x = i0 * h, y = i1 * h;
        const auto at = [&](int s) { return j == 0 ? fn(x + s * h, y) : fn(x, y + s * h); };
        const double fd = (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * h);
        const double sp = spectral[0][lat.flat(i0, i1, 0)];
        err = std::max(err, std::abs(fd - sp));
        scale = std::max(scale, std::abs(sp));
      }
    EXPECT_LE(err / scale, 1e-3);
  }
}

TEST(Dealias, TruncatesAboveCutoff) {
  const Lattice lat = make_lattice(8);
  SpectralField u = SpectralField::zeros(lat);
  u.set_real_mode(0, {3, 0, 0}, {1.0, 0.0});
  u.set_real_mode(1, {2, 2, 2}, {0.5, 0.5});
  const SpectralField d = dealias(u);
  EXPECT_EQ(d.mode(0, {3, 0, 0}), Complex{});
  EXPECT_EQ(d.mode(0, {-3, 0, 0}), Complex{});
  EXPECT_EQ(d.mode(1, {2, 2, 2}), Complex(0.5, 0.5));
  EXPECT_EQ(max_abs_diff(dealias(d), d), 0.0);
}

TEST(Dealias, NeverIncreasesL2) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const SpectralField u = white_noise(make_lattice(8), seed);
    EXPECT_LE(compute_norms(dealias(u)).l2, compute_norms(u).l2);
  }
}

TEST(Norms, SineL2) {
  const Lattice lat = make_lattice(8);
  const auto f = PhysicalField::sample(lat, 3, [](double x, double, double) { return std::array{std::sin(x), 0.0, 0.0}; });
  const NormSet s = compute_norms(to_spectral(f));
  EXPECT_NEAR(s.l2 * s.l2 / (kBoxVolume / 2.0), 1.0, 1e-14);
}

TEST(Norms, ZeroField) {
  const NormSet s = compute_norms(SpectralField::zeros(make_lattice(8)));
  EXPECT_EQ(s.l2, 0.0);
  EXPECT_EQ(s.h1_semi, 0.0);
  EXPECT_EQ(s.h1, 0.0);
  EXPECT_EQ(s.h2, 0.0);
  EXPECT_EQ(s.v_dual, 0.0);
}

TEST(Norms, DualNormOfSingleMode) {
  const Lattice lat = make_lattice(8);
  SpectralField u = SpectralField::zeros(lat);
  // |k| = 2, amplitude orthogonal to k
  u.set_real_mode(1, {2, 0, 0}, {0.7, -0.1});
  u = leray_project(u);
  const NormSet s = compute_norms(u);
  EXPECT_NEAR(s.v_dual, s.l2 / 2.0, 1e-15 * s.l2);
}

TEST(Norms, H1Identity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const NormSet s = compute_norms(white_noise(make_lattice(8), seed, 1.0 + seed));
    EXPECT_NEAR(s.h1 * s.h1, s.l2 * s.l2 + s.h1_semi * s.h1_semi, 1e-12 * s.h1 * s.h1);
    EXPECT_GE(s.h2, s.h1);
  }
}

}  // namespace
}  // namespace qrns
