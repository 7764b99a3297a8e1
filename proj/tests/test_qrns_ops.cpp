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
#include <limits>
#include <numbers>
#include <random>

#include "qrns/initial.hpp"
#include "qrns/qrns_ops.hpp"
#include "test_util.hpp"

namespace qrns {
namespace {

using testing::max_abs_coeff;
using testing::max_abs_diff;
using testing::smooth_solenoidal;
using testing::white_noise;

constexpr auto kQr = ConvectionMode::quasi_relativistic;
constexpr auto kClassical = ConvectionMode::classical;

PhysicalField single_point(double a, double b, double c) {
  PhysicalField f = PhysicalField::zeros(make_lattice(8), 3);
  f[0][0] = a;
  f[1][0] = b;
  f[2][0] = c;
  return f;
}

TEST(RelativisticVelocity, ZeroMapsToZero) {
  const PhysicalField v = relativistic_velocity(single_point(0, 0, 0), 3.0);
  EXPECT_EQ(v[0][0], 0.0);
  EXPECT_EQ(v[1][0], 0.0);
  EXPECT_EQ(v[2][0], 0.0);
}

TEST(RelativisticVelocity, PythagoreanExample) {
  const PhysicalField v = relativistic_velocity(single_point(3, 4, 0), 5.0);
  EXPECT_NEAR(v[0][0], 3.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(v[1][0], 4.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(v[2][0], 0.0);
  EXPECT_NEAR(std::hypot(v[0][0], v[1][0]), 5.0 / std::sqrt(2.0), 1e-14);
}

TEST(RelativisticVelocity, Asymptote) {
  const PhysicalField v = relativistic_velocity(single_point(1e6, 0, 0), 1.0);
  EXPECT_LT(v[0][0], 1.0);
  EXPECT_LT(1.0 - v[0][0], 1e-12);
  EXPECT_NEAR(v[0][0], 1e6 / std::sqrt(1.0 + 1e12), 1e-16);
}

TEST(RelativisticVelocity, StrictSpeedBoundWithoutOverflow) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  std::uniform_real_distribution<double> log_speed(-3.0, 8.0);
  for (double c : {1e-3, 1.0, 1e3, 1e100}) {
    for (int trial = 0; trial < 20000; ++trial) {
      const double s = std::pow(10.0, log_speed(rng)) * c;
      std::array<double, 3> d{dir(rng), dir(rng), dir(rng)};
      const double m = std::hypot(d[0], d[1], d[2]);
      std::array<double, 3> u{s * d[0] / m, s * d[1] / m, s * d[2] / m};
      const auto v0 = u;
      relativistic_map(u, c);
      const double speed = std::hypot(u[0], u[1], u[2]);
      ASSERT_TRUE(std::isfinite(speed));
      ASSERT_LT(speed, c) << "|u|/c = " << s / c;
      // parallel, same orientation
      ASSERT_GE(u[0] * v0[0] + u[1] * v0[1] + u[2] * v0[2], 0.0);
    }
  }
  std::array<double, 3> huge{1e8, -1e8, 1e8};
  relativistic_map(huge, 1.0);
  EXPECT_LT(std::hypot(huge[0], huge[1], huge[2]), 1.0);
  std::array<double, 3> extreme{1e300, 1e300, 0.0};
  relativistic_map(extreme, 1.0);
  EXPECT_LT(std::hypot(extreme[0], extreme[1], extreme[2]), 1.0);
}

TEST(RelativisticVelocity, LowSpeedTaylorBound) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (double c : {0.5, 1.0, 10.0}) {
    for (int trial = 0; trial < 10000; ++trial) {
      std::array<double, 3> u{g(rng), g(rng), g(rng)};
      const auto orig = u;
      relativistic_map(u, c);
      const double gap = std::hypot(u[0] - orig[0], u[1] - orig[1], u[2] - orig[2]);
      const double mag = std::hypot(orig[0], orig[1], orig[2]);
      ASSERT_LE(gap, mag * mag * mag / (2.0 * c * c) * (1.0 + 1e-12) + 1e-16);
    }
  }
}

TEST(Convection, ConstantFieldGivesZero) {
  const Lattice lat = make_lattice(8);
  SpectralField u = SpectralField::zeros(lat);
  u[0][0] = 0.4;
  u[2][0] = -1.3;
  for (auto mode : {kClassical, kQr}) EXPECT_EQ(max_abs_coeff(convection_term(u, {0.1, 1.0}, mode)), 0.0);
}

TEST(Convection, ClassicalSkewSymmetry) {
  const Lattice lat = make_lattice(16);
  const SpectralField u = taylor_green_field(lat, 1.0);
  const SpectralField conv = convection_term(u, {0.1, 1.0}, kClassical);
  EXPECT_GT(max_abs_coeff(conv), 1e-3);
  const NormSet s = compute_norms(u);
  EXPECT_LE(std::abs(inner_product(conv, u)), 1e-10 * s.h1_semi * s.l2 * s.l2);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SpectralField r = smooth_solenoidal(lat, seed);
    const NormSet rs = compute_norms(r);
    EXPECT_LE(std::abs(inner_product(convection_term(r, {0.1, 1.0}, kClassical), r)),
              1e-10 * rs.h1_semi * rs.l2 * rs.l2);
  }
}

TEST(Convection, LowSpeedLimitMatchesClassical) {
  const Lattice lat = make_lattice(16);
  const SpectralField u = taylor_green_field(lat, 1.0);
  const SpectralField classical = convection_term(u, {0.1, 1e6}, kClassical);
  const SpectralField relativistic = convection_term(u, {0.1, 1e6}, kQr);
  const double diff = std::sqrt(compute_squared_norms(relativistic - classical).l2);
  EXPECT_LE(diff, 1e-10 * std::sqrt(compute_squared_norms(classical).l2));
}

TEST(Convection, OutputIsProjectedAndDealiased) {
  const Lattice lat = make_lattice(16);
  const SpectralField conv = convection_term(smooth_solenoidal(lat, 9, 3.0), {0.1, 0.5}, kQr);
  EXPECT_LE(max_relative_divergence(conv), 1e-12);
  EXPECT_EQ(max_abs_diff(dealias(conv), conv), 0.0);
  EXPECT_LT(hermitian_defect(conv), 1e-12);
}

TEST(Convection, NonFiniteInputIsReportedWithStage) {
  const Lattice lat = make_lattice(8);
  SpectralField u = taylor_green_field(lat, 1.0);
  u.mode(0, {1, 1, 1}) = {std::numeric_limits<double>::infinity(), 0.0};
  try {
    convection_term(u, {0.1, 1.0}, kClassical);
    FAIL() << "expected OverflowError";
  } catch (const OverflowError& e) {
    EXPECT_FALSE(e.stage().empty());
  }
}

TEST(BilinearA, SingleModeAndOrthogonality) {
  const Lattice lat = make_lattice(8);
  SpectralField u = SpectralField::zeros(lat);
  u.set_real_mode(1, {1, 0, 0}, {0.0, -0.5});
  const double alpha = 0.3;
  const double h1 = compute_norms(u).h1_semi;
  EXPECT_NEAR(bilinear_A(u, u, alpha), alpha * h1 * h1, 1e-14 * alpha * h1 * h1);
  EXPECT_NEAR(bilinear_A(u, u, alpha), alpha * kBoxVolume * 0.5, 1e-13);

  SpectralField w = SpectralField::zeros(lat);
  w.set_real_mode(1, {0, 2, 0}, {0.3, 0.1});
  EXPECT_EQ(bilinear_A(u, w, alpha), 0.0);
}

TEST(BilinearA, SymmetricAndBounded) {
  const Lattice lat = make_lattice(8);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const SpectralField u = white_noise(lat, 2 * seed);
    const SpectralField w = white_noise(lat, 2 * seed + 1, 0.1 + seed);
    const double alpha = 0.01 * (1 + seed);
    const double a = bilinear_A(u, w, alpha);
    EXPECT_NEAR(a, bilinear_A(w, u, alpha), 1e-12 * std::abs(a));
    EXPECT_LE(std::abs(a), alpha * compute_norms(u).h1_semi * compute_norms(w).h1_semi);
    EXPECT_NEAR(bilinear_A(u, u, alpha), alpha * compute_squared_norms(u).h1_semi,
                1e-12 * bilinear_A(u, u, alpha));
  }
}

TEST(TrilinearB, ConstantUGivesZero) {
  const Lattice lat = make_lattice(8);
  SpectralField u = SpectralField::zeros(lat);
  u[1][0] = 2.0;
  EXPECT_EQ(trilinear_B(white_noise(lat, 1), u, white_noise(lat, 2), 1.0), 0.0);
}

TEST(TrilinearB, PointwiseOrthogonalIntegrand) {
  const Lattice lat = make_lattice(8);
  // u = (sin x1, 0, 0): (v.grad)u is along e0 everywhere; w has no e0 part.
  SpectralField u = SpectralField::zeros(lat);
  u.set_real_mode(0, {0, 1, 0}, {0.0, -0.5});
  SpectralField w = white_noise(lat, 4);
  w[0].assign(lat.size(), Complex{});
  EXPECT_NEAR(trilinear_B(white_noise(lat, 3), u, w, 0.7), 0.0, 1e-14);
}

// Independent oracle: direct summation of the Fourier series at every point
// of the padded grid followed by equispaced quadrature.
TEST(TrilinearB, MatchesDirectSeriesQuadrature) {
  const Lattice lat = make_lattice(8);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  const auto sparse = [&](int modes) {
    SpectralField f = SpectralField::zeros(lat);
    std::uniform_int_distribution<int> pick(-2, 2);
    for (int m = 0; m < modes; ++m) {
      const Wavevector k{pick(rng), pick(rng), pick(rng)};
      if (k == Wavevector{0, 0, 0}) continue;
      for (int c = 0; c < 3; ++c) f.set_real_mode(c, k, {g(rng), g(rng)});
    }
    return f;
  };
  const SpectralField y = sparse(4), u = sparse(4), w = sparse(4);
  const double c = 0.8;
  const int m = lat.padded_n();
  const auto eval = [&](const SpectralField& f, int comp, int deriv, double x0, double x1, double x2) {
    double s = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const Complex z = f[comp][i];
      if (z == Complex{}) continue;
      const Wavevector k = lat.wavevector(i);
      Complex term = z * std::exp(Complex{0.0, k[0] * x0 + k[1] * x1 + k[2] * x2});
      if (deriv >= 0) term *= Complex{0.0, static_cast<double>(k[static_cast<std::size_t>(deriv)])};
      s += term.real();
    }
    return s;
  };
  double sum = 0.0;
  const double h = kTwoPi / m;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int d = 0; d < m; ++d) {
        const double x0 = a * h, x1 = b * h, x2 = d * h;
        std::array<double, 3> yv{eval(y, 0, -1, x0, x1, x2), eval(y, 1, -1, x0, x1, x2), eval(y, 2, -1, x0, x1, x2)};
        const double mag = std::sqrt(yv[0] * yv[0] + yv[1] * yv[1] + yv[2] * yv[2]);
        for (double& v : yv) v = c * v / std::sqrt(c * c + mag * mag);
        for (int i = 0; i < 3; ++i) {
          double adv = 0.0;
          for (int j = 0; j < 3; ++j) adv += yv[static_cast<std::size_t>(j)] * eval(u, i, j, x0, x1, x2);
          sum += adv * eval(w, i, -1, x0, x1, x2);
        }
      }
  const double oracle = kBoxVolume * sum / (m * m * m);
  EXPECT_NEAR(trilinear_B(y, u, w, c), oracle, 1e-11 * std::max(1.0, std::abs(oracle)));
}

TEST(TrilinearB, BoundOnRandomTriples) {
  const Lattice lat = make_lattice(8);
  std::mt19937_64 rng(123);
  std::lognormal_distribution<double> scale(0.0, 2.0);
  const double c_values[] = {1e-2, 1.0, 1e2};
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double c = c_values[trial % 3];
    const SpectralField y = white_noise(lat, rng(), scale(rng));
    const SpectralField u = white_noise(lat, rng(), scale(rng));
    const SpectralField w = white_noise(lat, rng(), scale(rng));
    const double b = trilinear_B(y, u, w, c);
    // The padded evaluation drops Nyquist modes, which only lowers the norms
    // on the right; compare against the full-field norms.
    const double bound = std::sqrt(3.0) * c * compute_norms(u).h1_semi * compute_norms(w).l2;
    ASSERT_LE(std::abs(b), bound) << "trial " << trial;
    worst = std::max(worst, std::abs(b) / bound);
  }
  EXPECT_GT(worst, 0.0);
}

TEST(TrilinearB, AgreesWithConvectionPairing) {
  const Lattice lat = make_lattice(16);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const SpectralField y = smooth_solenoidal(lat, 10 + seed, 2.0);
    const SpectralField u = smooth_solenoidal(lat, 20 + seed);
    const SpectralField w = smooth_solenoidal(lat, 30 + seed);
    for (auto mode : {kClassical, kQr}) {
      const double b = trilinear_B(y, u, w, 0.9, mode);
      const double pairing = inner_product(advection(y, u, 0.9, mode).term, w);
      EXPECT_NEAR(b, pairing, 1e-10 * std::abs(b));
    }
  }
}

TEST(TrilinearB, QuasiRelativisticSelfTermIsBoundedButNonzero) {
  const Lattice lat = make_lattice(16);
  const SpectralField u = smooth_solenoidal(lat, 77, 5.0);
  const double c = 0.5;
  const double b = trilinear_B(u, u, u, c);
  const NormSet s = compute_norms(u);
  EXPECT_GT(std::abs(b), 1e-8 * s.h1_semi * s.l2 * c);
  EXPECT_LE(std::abs(b), std::sqrt(3.0) * c * s.h1_semi * s.l2);
}

TEST(Pressure, ShearFlowHasNoPressure) {
  const Lattice lat = make_lattice(16);
  SpectralField u = SpectralField::zeros(lat);
  u.set_real_mode(0, {0, 1, 0}, {0.0, -0.5});
  u.is_projected = true;
  const SpectralField p = recover_pressure(u, SpectralField::zeros(lat), {0.1, 1.0}, kClassical);
  EXPECT_LT(max_abs_coeff(p), 1e-16);
}

TEST(Pressure, TwoDimensionalTaylorGreen) {
  const Lattice lat = make_lattice(16);
  const auto f = PhysicalField::sample(lat, 3, [](double x, double y, double) {
    return std::array{std::sin(x) * std::cos(y), -std::cos(x) * std::sin(y), 0.0};
  });
  const SpectralField u = leray_project(to_spectral(f));
  const PhysicalField p = to_physical(recover_pressure(u, SpectralField::zeros(lat), {0.1, 1.0}, kClassical));
  // (u.grad)u = (sin 2x, sin 2y, 0)/2 by direct differentiation, so
  // -Lap p = div (u.grad)u = cos 2x + cos 2y gives p = (cos 2x + cos 2y)/4.
  const auto expected = PhysicalField::sample(lat, 1, [](double x, double y, double) {
    return std::array{(std::cos(2 * x) + std::cos(2 * y)) / 4.0};
  });
  for (std::size_t i = 0; i < lat.size(); ++i) ASSERT_NEAR(p[0][i], expected[0][i], 1e-14);
}

TEST(Pressure, GradientForcingIsInverted) {
  const Lattice lat = make_lattice(16);
  // f = grad(phi), phi = sin(x0 + 2 x1) cos(x2)
  const auto phi = PhysicalField::sample(lat, 1, [](double x, double y, double z) {
    return std::array{std::sin(x + 2 * y) * std::cos(z)};
  });
  const SpectralField f = scalar_gradient(to_spectral(phi));
  const SpectralField p = recover_pressure(SpectralField::zeros(lat), f, {0.1, 1.0}, kQr);
  EXPECT_LE(max_abs_diff(scalar_gradient(p), f), 1e-15);
}

TEST(Pressure, GradientRestoresUnprojectedResidual) {
  const Lattice lat = make_lattice(16);
  const ModelParams params{0.1, 0.7};
  for (auto mode : {kClassical, kQr}) {
    const SpectralField u = smooth_solenoidal(lat, 5, 2.0);
    const SpectralField f = dealias(white_noise(lat, 6));
    const SpectralField residual = advection(u, u, params.c, mode).term - f;
    const SpectralField p = recover_pressure(u, f, params, mode);
    // N - f + grad p = P(N - f) on non-Nyquist modes
    const SpectralField lhs = residual + scalar_gradient(p);
    const SpectralField rhs = leray_project(residual);
    EXPECT_LE(max_abs_diff(leray_project(lhs), rhs), 1e-15);
    EXPECT_LE(std::sqrt(compute_squared_norms(lhs - rhs).l2), 1e-10 * std::sqrt(compute_squared_norms(residual).l2));
  }
}

TEST(Lipschitz, EqualPoints) {
  const LipschitzGap g = lipschitz_gap({1, 2, 3}, {1, 2, 3}, 2.0);
  EXPECT_EQ(g.lhs, 0.0);
  EXPECT_EQ(g.ratio, 0.0);
  EXPECT_EQ(g.bound, 0.0);
}

TEST(Lipschitz, AntipodalPair) {
  for (double c : {1e-3, 1.0, 7.0, 1e3}) {
    const LipschitzGap g = lipschitz_gap({c, 0, 0}, {-c, 0, 0}, c);
    EXPECT_NEAR(g.lhs, std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(g.bound, 24.0, 1e-13);
  }
}

TEST(Lipschitz, RandomPairsRespectBothBounds) {
  std::mt19937_64 rng(2718);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> decade(-3.0, 3.0);
  for (double c : {1e-3, 1.0, 1e3}) {
    double worst = 0.0;
    for (int trial = 0; trial < 100000; ++trial) {
      const double s1 = std::pow(10.0, decade(rng)) * c, s2 = std::pow(10.0, decade(rng)) * c;
      const Vec3 y1{s1 * g(rng), s1 * g(rng), s1 * g(rng)};
      const Vec3 y2{y1[0] + s2 * g(rng), y1[1] + s2 * g(rng), y1[2] + s2 * g(rng)};
      const LipschitzGap gap = lipschitz_gap(y1, y2, c);
      ASSERT_LE(gap.lhs, gap.bound);
      ASSERT_LE(gap.ratio, 12.0 / c);
      worst = std::max(worst, c * gap.ratio);
    }
    EXPECT_LE(worst, 1.0 + 1e-12);
    EXPECT_GT(worst, 0.9);
  }
}

}  // namespace
}  // namespace qrns
