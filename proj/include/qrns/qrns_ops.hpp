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

#pragma once

// Nonlinear kernels of the quasi-relativistic model: the bounded advecting
// velocity v = c u / sqrt(c^2 + |u|^2), the convection term (w.grad)u, the
// forms A and B, pressure recovery and the Lipschitz gap of the velocity map.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "qrns/error.hpp"
#include "qrns/field.hpp"
#include "qrns/spectral.hpp"
#include "qrns/transform.hpp"

namespace qrns {

enum class ConvectionMode { classical, quasi_relativistic };

inline std::string_view to_string(ConvectionMode mode) {
  return mode == ConvectionMode::classical ? "classical" : "quasi_relativistic";
}

struct ModelParams {
  double alpha = 1.0;  ///< viscosity
  double c = 1.0;      ///< speed bound

  void validate() const {
    if (!(std::isfinite(alpha) && alpha > 0.0)) throw InvalidArgument("alpha must be positive and finite");
    if (!(std::isfinite(c) && c > 0.0)) throw InvalidArgument("c must be positive and finite");
  }
};

/// Maps a sample u to v = c u / sqrt(c^2 + |u|^2) in place. The factor is
/// evaluated as 1/sqrt(1 + s^2) (or (1/s)/sqrt(1 + 1/s^2) for s = |u|/c > 1)
/// so that no intermediate overflows. The result is rounded toward zero until
/// its computed magnitude is strictly below c.
inline void relativistic_map(std::array<double, 3>& u, double c) {
  const double mag = std::hypot(u[0], u[1], u[2]);
  if (mag == 0.0) return;
  const double s = mag / c;
  const double factor = s <= 1.0 ? 1.0 / std::sqrt(1.0 + s * s) : (1.0 / s) / std::sqrt(1.0 + 1.0 / (s * s));
  for (double& x : u) x *= factor;
  constexpr double shrink = 1.0 - std::numeric_limits<double>::epsilon();
  while (std::hypot(u[0], u[1], u[2]) >= c)
    for (double& x : u) x *= shrink;
}

inline PhysicalField relativistic_velocity(PhysicalField u, double c) {
  if (!(c > 0.0)) throw InvalidArgument("relativistic_velocity: c must be positive");
  if (u.count() != 3) throw InvalidArgument("relativistic_velocity: vector field required");
  if (!u.all_finite()) throw InvalidArgument("relativistic_velocity: non-finite sample");
  for (std::size_t i = 0; i < u.lattice.size(); ++i) {
    std::array<double, 3> p{u[0][i], u[1][i], u[2][i]};
    relativistic_map(p, c);
    for (int k = 0; k < 3; ++k) u[k][i] = p[static_cast<std::size_t>(k)];
  }
  return u;
}

namespace detail {

inline bool all_finite(const fft::RealBuffer& b) {
  return std::all_of(b.begin(), b.end(), [](double v) { return std::isfinite(v); });
}

/// Advecting velocity sampled on the padded grid.
struct PaddedVelocity {
  int m = 0;
  std::array<fft::RealBuffer, 3> w;
  double max_speed = 0.0;
};

inline PaddedVelocity padded_advecting_velocity(const SpectralField& y, double c, ConvectionMode mode,
                                                fft::HalfBuffer& half) {
  const Lattice& lat = y.lattice;
  PaddedVelocity pv;
  pv.m = lat.padded_n();
  const auto one = [](const Wavevector&) { return Complex{1.0, 0.0}; };
  for (int i = 0; i < 3; ++i) {
    pv.w[static_cast<std::size_t>(i)].resize(fft::real_size(pv.m));
    synthesize_padded(lat, y[i], pv.m, one, half, pv.w[static_cast<std::size_t>(i)]);
    if (!all_finite(pv.w[static_cast<std::size_t>(i)]))
      throw OverflowError("advecting velocity", "non-finite velocity sample on the padded grid");
  }
  const std::size_t total = fft::real_size(pv.m);
  double max_speed = 0.0;
  for (std::size_t p = 0; p < total; ++p) {
    std::array<double, 3> v{pv.w[0][p], pv.w[1][p], pv.w[2][p]};
    if (mode == ConvectionMode::quasi_relativistic) {
      relativistic_map(v, c);
      pv.w[0][p] = v[0];
      pv.w[1][p] = v[1];
      pv.w[2][p] = v[2];
    }
    max_speed = std::max(max_speed, std::hypot(v[0], v[1], v[2]));
  }
  if (!std::isfinite(max_speed)) throw OverflowError("advecting velocity", "non-finite advecting speed");
  pv.max_speed = max_speed;
  return pv;
}

/// acc = sum_j w_j d_j u_i on the padded grid.
inline void padded_advection_component(const PaddedVelocity& pv, const SpectralField& u, int i,
                                       fft::HalfBuffer& half, fft::RealBuffer& scratch,
                                       fft::RealBuffer& acc) {
  const Lattice& lat = u.lattice;
  const int half_n = lat.n() / 2;
  std::fill(acc.begin(), acc.end(), 0.0);
  for (int j = 0; j < 3; ++j) {
    const auto ik = [j, half_n](const Wavevector& k) {
      const int kj = k[static_cast<std::size_t>(j)];
      return Complex{0.0, kj == -half_n ? 0.0 : static_cast<double>(kj)};
    };
    synthesize_padded(lat, u[i], pv.m, ik, half, scratch);
    const auto& wj = pv.w[static_cast<std::size_t>(j)];
    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += wj[p] * scratch[p];
  }
  if (!all_finite(acc)) throw OverflowError("product", "non-finite value in (w.grad)u");
}

}  // namespace detail

struct AdvectionResult {
  SpectralField term;       ///< (w.grad)u, dealiased, not projected
  double max_speed = 0.0;   ///< max |w| over the padded grid
};

/// (w.grad)u with w = y (classical) or w = v(y) (quasi-relativistic), using a
/// frozen advecting field y. Products are formed on the 3n/2 grid.
inline AdvectionResult advection(const SpectralField& y, const SpectralField& u, double c,
                                 ConvectionMode mode) {
  require_same_lattice(y.lattice, u.lattice, "advection");
  if (y.count() != 3 || u.count() != 3) throw InvalidArgument("advection: vector fields required");
  const Lattice& lat = u.lattice;
  const int m = lat.padded_n();
  fft::HalfBuffer half(fft::half_size(m));
  fft::RealBuffer scratch(fft::real_size(m)), acc(fft::real_size(m));
  const detail::PaddedVelocity pv = detail::padded_advecting_velocity(y, c, mode, half);
  AdvectionResult out{SpectralField::zeros(lat), pv.max_speed};
  for (int i = 0; i < 3; ++i) {
    detail::padded_advection_component(pv, u, i, half, scratch, acc);
    analyze_padded(lat, acc, m, half, out.term[i]);
  }
  out.term = dealias(std::move(out.term));
  for (const auto& comp : out.term.components)
    for (const Complex& z : comp)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw OverflowError("forward transform", "non-finite convection coefficient");
  return out;
}

/// Leray-projected, dealiased convection term for the configured mode.
inline SpectralField convection_term(const SpectralField& u, const ModelParams& params,
                                     ConvectionMode mode) {
  return leray_project(advection(u, u, params.c, mode).term);
}

/// A[u, w] = alpha sum_i int grad u_i . grad w_i.
inline double bilinear_A(const SpectralField& u, const SpectralField& w, double alpha) {
  require_same_lattice(u.lattice, w.lattice, "bilinear_A");
  const Lattice& lat = u.lattice;
  double sum = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double k2 = norm_sq(lat.wavevector(i));
    if (k2 == 0.0) continue;
    double dot = 0.0;
    for (int c = 0; c < u.count(); ++c) dot += (u[c][i] * std::conj(w[c][i])).real();
    sum += k2 * dot;
  }
  return alpha * kBoxVolume * sum;
}

/// B[y, u, w] = int ((v(y).grad) u) . w by equispaced quadrature on the padded
/// grid. With mode == classical the advecting field is y itself.
inline double trilinear_B(const SpectralField& y, const SpectralField& u, const SpectralField& w, double c,
                          ConvectionMode mode = ConvectionMode::quasi_relativistic) {
  require_same_lattice(y.lattice, u.lattice, "trilinear_B");
  require_same_lattice(y.lattice, w.lattice, "trilinear_B");
  const Lattice& lat = u.lattice;
  const int m = lat.padded_n();
  fft::HalfBuffer half(fft::half_size(m));
  fft::RealBuffer scratch(fft::real_size(m)), acc(fft::real_size(m)), wi(fft::real_size(m));
  const detail::PaddedVelocity pv = detail::padded_advecting_velocity(y, c, mode, half);
  const auto one = [](const Wavevector&) { return Complex{1.0, 0.0}; };
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    detail::padded_advection_component(pv, u, i, half, scratch, acc);
    synthesize_padded(lat, w[i], m, one, half, wi);
    for (std::size_t p = 0; p < acc.size(); ++p) sum += acc[p] * wi[p];
  }
  return kBoxVolume * sum / static_cast<double>(fft::real_size(m));
}

/// Poisson pressure: p(k) = i k.(N - f)(k) / |k|^2, p(0) = 0, where N is the
/// unprojected convection term. Then N - f + grad p = P(N - f).
inline SpectralField recover_pressure(const SpectralField& u, const SpectralField& f, const ModelParams& params,
                                      ConvectionMode mode) {
  require_same_lattice(u.lattice, f.lattice, "recover_pressure");
  const Lattice& lat = u.lattice;
  const SpectralField residual = advection(u, u, params.c, mode).term - f;
  SpectralField p = SpectralField::zeros(lat, 1);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (lat.has_nyquist(i)) continue;
    const Wavevector k = lat.wavevector(i);
    const double k2 = norm_sq(k);
    if (k2 == 0.0) continue;
    const Complex kdotr = static_cast<double>(k[0]) * residual[0][i] +
                          static_cast<double>(k[1]) * residual[1][i] +
                          static_cast<double>(k[2]) * residual[2][i];
    p[0][i] = kI * kdotr / k2;
  }
  return p;
}

/// Spectral gradient of a scalar field.
inline SpectralField scalar_gradient(const SpectralField& p) {
  const Lattice& lat = p.lattice;
  const int n = lat.n();
  SpectralField g = SpectralField::zeros(lat);
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        const std::size_t idx = lat.flat(i0, i1, i2);
        g[0][idx] = kI * derivative_wavenumber(lat, i0) * p[0][idx];
        g[1][idx] = kI * derivative_wavenumber(lat, i1) * p[0][idx];
        g[2][idx] = kI * derivative_wavenumber(lat, i2) * p[0][idx];
      }
  return g;
}

using Vec3 = std::array<double, 3>;

/// h(y) = y / sqrt(c^2 + |y|^2), evaluated without overflow.
inline Vec3 bounded_direction(const Vec3& y, double c) {
  Vec3 v = y;
  relativistic_map(v, c);
  return {v[0] / c, v[1] / c, v[2] / c};
}

struct LipschitzGap {
  double lhs = 0.0;    ///< |h(y1) - h(y2)|
  double bound = 0.0;  ///< (12/c) |y1 - y2|
  double ratio = 0.0;  ///< lhs / |y1 - y2|, 0 when y1 == y2
};

inline LipschitzGap lipschitz_gap(const Vec3& y1, const Vec3& y2, double c) {
  if (!(c > 0.0)) throw InvalidArgument("lipschitz_gap: c must be positive");
  const Vec3 h1 = bounded_direction(y1, c);
  const Vec3 h2 = bounded_direction(y2, c);
  const double lhs = std::hypot(h1[0] - h2[0], h1[1] - h2[1], h1[2] - h2[2]);
  const double dist = std::hypot(y1[0] - y2[0], y1[1] - y2[1], y1[2] - y2[2]);
  return {lhs, 12.0 / c * dist, dist == 0.0 ? 0.0 : lhs / dist};
}

}  // namespace qrns
