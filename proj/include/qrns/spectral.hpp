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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "qrns/field.hpp"
#include "qrns/lattice.hpp"

namespace qrns {

inline constexpr Complex kI{0.0, 1.0};

/// Leray projector u(k) -> u(k) - k (k.u(k)) / |k|^2. The mean mode passes
/// through; modes with a Nyquist index are zeroed since the projector is not
/// consistent with Hermitian symmetry there.
inline SpectralField leray_project(SpectralField u) {
  const Lattice& lat = u.lattice;
  if (u.count() != 3) throw InvalidArgument("leray_project: vector field required");
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (lat.has_nyquist(i)) {
      for (int c = 0; c < 3; ++c) u[c][i] = 0.0;
      continue;
    }
    const Wavevector k = lat.wavevector(i);
    const double k2 = norm_sq(k);
    if (k2 == 0.0) continue;
    const Complex kdotu = static_cast<double>(k[0]) * u[0][i] + static_cast<double>(k[1]) * u[1][i] +
                          static_cast<double>(k[2]) * u[2][i];
    const Complex s = kdotu / k2;
    for (int c = 0; c < 3; ++c) u[c][i] -= static_cast<double>(k[c]) * s;
  }
  u.is_projected = true;
  return u;
}

/// Zeroes every mode with some |k_j| above the 2/3-rule cutoff.
inline SpectralField dealias(SpectralField u) {
  const Lattice& lat = u.lattice;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (lat.retained(lat.wavevector(i))) continue;
    for (int c = 0; c < u.count(); ++c) u[c][i] = 0.0;
  }
  return u;
}

/// Wavenumber used for first derivatives; 0 on the Nyquist index so that
/// derivatives of real fields stay real.
inline double derivative_wavenumber(const Lattice& lat, int index) {
  return lat.is_nyquist(index) ? 0.0 : static_cast<double>(lat.wavenumber(index));
}

/// Spectral velocity gradient; entry [i][j] is d_j u_i.
using GradientTensor = std::array<std::array<std::vector<Complex>, 3>, 3>;

inline GradientTensor gradient(const SpectralField& u) {
  const Lattice& lat = u.lattice;
  if (u.count() != 3) throw InvalidArgument("gradient: vector field required");
  const int n = lat.n();
  GradientTensor g;
  for (auto& row : g)
    for (auto& e : row) e.assign(lat.size(), Complex{});
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        const std::size_t idx = lat.flat(i0, i1, i2);
        const std::array<double, 3> k{derivative_wavenumber(lat, i0), derivative_wavenumber(lat, i1),
                                      derivative_wavenumber(lat, i2)};
        for (int c = 0; c < 3; ++c)
          for (int j = 0; j < 3; ++j) g[c][j][idx] = kI * k[j] * u[c][idx];
      }
  return g;
}

/// Spectral divergence (scalar field).
inline SpectralField divergence(const SpectralField& u) {
  const Lattice& lat = u.lattice;
  const int n = lat.n();
  SpectralField d = SpectralField::zeros(lat, 1);
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        const std::size_t idx = lat.flat(i0, i1, i2);
        d[0][idx] = kI * (derivative_wavenumber(lat, i0) * u[0][idx] +
                          derivative_wavenumber(lat, i1) * u[1][idx] +
                          derivative_wavenumber(lat, i2) * u[2][idx]);
      }
  return d;
}

/// Largest |k.u(k)| / |u(k)| over nonzero modes (0 for an empty field).
inline double max_relative_divergence(const SpectralField& u) {
  const Lattice& lat = u.lattice;
  double worst = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Wavevector k = lat.wavevector(i);
    if (norm_sq(k) == 0.0) continue;
    const double mag = std::sqrt(std::norm(u[0][i]) + std::norm(u[1][i]) + std::norm(u[2][i]));
    if (mag == 0.0) continue;
    const Complex kdotu = static_cast<double>(k[0]) * u[0][i] + static_cast<double>(k[1]) * u[1][i] +
                          static_cast<double>(k[2]) * u[2][i];
    worst = std::max(worst, std::abs(kdotu) / (mag * std::sqrt(norm_sq(k))));
  }
  return worst;
}

/// Largest |u(-k) - conj(u(k))| relative to the largest coefficient.
inline double hermitian_defect(const SpectralField& u) {
  const Lattice& lat = u.lattice;
  double worst = 0.0, scale = 0.0;
  for (int c = 0; c < u.count(); ++c)
    for (std::size_t i = 0; i < lat.size(); ++i) {
      worst = std::max(worst, std::abs(u[c][lat.negated(i)] - std::conj(u[c][i])));
      scale = std::max(scale, std::abs(u[c][i]));
    }
  return scale == 0.0 ? 0.0 : worst / scale;
}

/// L2 inner product (2pi)^3 sum_k Re(a(k) conj(b(k))).
inline double inner_product(const SpectralField& a, const SpectralField& b) {
  require_same_lattice(a.lattice, b.lattice, "inner_product");
  double sum = 0.0;
  for (int c = 0; c < a.count(); ++c)
    for (std::size_t i = 0; i < a.lattice.size(); ++i) sum += (a[c][i] * std::conj(b[c][i])).real();
  return kBoxVolume * sum;
}

struct NormSet {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double v_dual = 0.0;
};

/// Squared norms, accumulated mode by mode in storage order.
struct SquaredNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h2 = 0.0;
  double v_dual = 0.0;
};

inline SquaredNorms compute_squared_norms(const SpectralField& u) {
  const Lattice& lat = u.lattice;
  SquaredNorms s;
  const bool vector = u.count() == 3;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Wavevector k = lat.wavevector(i);
    const double k2 = norm_sq(k);
    double a2 = 0.0;
    for (int c = 0; c < u.count(); ++c) a2 += std::norm(u[c][i]);
    s.l2 += a2;
    s.h1_semi += k2 * a2;
    s.h2 += (1.0 + k2) * (1.0 + k2) * a2;
    if (k2 == 0.0 || !vector || lat.has_nyquist(i)) continue;
    // |P u(k)|^2 = |u|^2 - |k.u|^2/|k|^2
    const Complex kdotu = static_cast<double>(k[0]) * u[0][i] + static_cast<double>(k[1]) * u[1][i] +
                          static_cast<double>(k[2]) * u[2][i];
    s.v_dual += std::max(0.0, a2 - std::norm(kdotu) / k2) / k2;
  }
  s.l2 *= kBoxVolume;
  s.h1_semi *= kBoxVolume;
  s.h2 *= kBoxVolume;
  s.v_dual *= kBoxVolume;
  return s;
}

inline NormSet compute_norms(const SpectralField& u) {
  const SquaredNorms s = compute_squared_norms(u);
  return {std::sqrt(s.l2), std::sqrt(s.h1_semi), std::sqrt(s.l2 + s.h1_semi), std::sqrt(s.h2),
          std::sqrt(s.v_dual)};
}

}  // namespace qrns
