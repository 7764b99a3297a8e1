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

// Discrete Fourier transforms between PhysicalField and SpectralField, plus
// the zero-padded synthesis/analysis used for nonlinear products. Backed by
// FFTW real-to-complex plans (FFTW_ESTIMATE, so plans are deterministic).

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <new>
#include <vector>

#include "qrns/error.hpp"
#include "qrns/field.hpp"
#include "qrns/lattice.hpp"

namespace qrns {
namespace fft {

template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using RealBuffer = std::vector<double, FftwAllocator<double>>;
using HalfBuffer = std::vector<Complex, FftwAllocator<Complex>>;

inline std::size_t real_size(int m) { return static_cast<std::size_t>(m) * m * m; }
inline std::size_t half_size(int m) { return static_cast<std::size_t>(m) * m * (m / 2 + 1); }
inline std::size_t half_flat(int m, int i0, int i1, int i2) {
  return (static_cast<std::size_t>(i0) * m + i1) * (m / 2 + 1) + i2;
}

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

/// Cached plans for an m^3 grid. Planning is serialized; execution through the
/// new-array interface is thread safe.
inline const Plans& plans_for(int m) {
  static std::mutex mutex;
  static std::map<int, Plans> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  RealBuffer real(real_size(m));
  HalfBuffer half(half_size(m));
  auto* c = reinterpret_cast<fftw_complex*>(half.data());
  Plans p;
  p.r2c = fftw_plan_dft_r2c_3d(m, m, m, real.data(), c, FFTW_ESTIMATE);
  p.c2r = fftw_plan_dft_c2r_3d(m, m, m, c, real.data(), FFTW_ESTIMATE);
  if (p.r2c == nullptr || p.c2r == nullptr) throw Error("FFTW planning failed");
  return cache.emplace(m, p).first->second;
}

/// Unnormalized forward transform; input preserved.
inline void forward(int m, RealBuffer& in, HalfBuffer& out) {
  fftw_execute_dft_r2c(plans_for(m).r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
}

/// Unnormalized inverse transform (sum of c_k e^{ikx}); input destroyed.
inline void inverse(int m, HalfBuffer& in, RealBuffer& out) {
  fftw_execute_dft_c2r(plans_for(m).c2r, reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

}  // namespace fft

/// Forward transform with 1/n^3 normalization. Throws on non-finite samples.
inline SpectralField to_spectral(const PhysicalField& f) {
  const Lattice& lat = f.lattice;
  const int n = lat.n();
  if (!f.all_finite()) throw InvalidArgument("to_spectral: non-finite sample");
  SpectralField out = SpectralField::zeros(lat, f.count());
  fft::RealBuffer real(fft::real_size(n));
  fft::HalfBuffer half(fft::half_size(n));
  const double scale = 1.0 / static_cast<double>(lat.size());
  for (int c = 0; c < f.count(); ++c) {
    std::copy(f[c].begin(), f[c].end(), real.begin());
    fft::forward(n, real, half);
    auto& dst = out[c];
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 <= n / 2; ++i2) {
          const Complex v = half[fft::half_flat(n, i0, i1, i2)] * scale;
          dst[lat.flat(i0, i1, i2)] = v;
          if (i2 != 0 && i2 != n / 2) dst[lat.flat((n - i0) % n, (n - i1) % n, n - i2)] = std::conj(v);
        }
  }
  return out;
}

/// Inverse transform. Only the half-spectrum k2 >= 0 is read, so the result
/// is the real field of the Hermitian part of the input.
inline PhysicalField to_physical(const SpectralField& g) {
  const Lattice& lat = g.lattice;
  const int n = lat.n();
  PhysicalField out = PhysicalField::zeros(lat, g.count());
  fft::RealBuffer real(fft::real_size(n));
  fft::HalfBuffer half(fft::half_size(n));
  for (int c = 0; c < g.count(); ++c) {
    const auto& src = g[c];
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 <= n / 2; ++i2) half[fft::half_flat(n, i0, i1, i2)] = src[lat.flat(i0, i1, i2)];
    fft::inverse(n, half, real);
    std::copy(real.begin(), real.end(), out[c].begin());
  }
  return out;
}

/// Zero-padded synthesis of one spectral component on an m^3 grid (m >= n),
/// each mode multiplied by multiplier(k). Modes carrying a Nyquist index are
/// dropped.
template <class Multiplier>
void synthesize_padded(const Lattice& lat, const std::vector<Complex>& coeffs, int m,
                       Multiplier&& multiplier, fft::HalfBuffer& half, fft::RealBuffer& out) {
  const int n = lat.n();
  std::fill(half.begin(), half.end(), Complex{});
  for (int i0 = 0; i0 < n; ++i0) {
    if (lat.is_nyquist(i0)) continue;
    const int k0 = lat.wavenumber(i0);
    const int p0 = k0 >= 0 ? k0 : k0 + m;
    for (int i1 = 0; i1 < n; ++i1) {
      if (lat.is_nyquist(i1)) continue;
      const int k1 = lat.wavenumber(i1);
      const int p1 = k1 >= 0 ? k1 : k1 + m;
      for (int k2 = 0; k2 < n / 2; ++k2) {
        const Complex v = coeffs[lat.flat(i0, i1, k2)];
        if (v == Complex{}) continue;
        half[fft::half_flat(m, p0, p1, k2)] = v * multiplier(Wavevector{k0, k1, k2});
      }
    }
  }
  fft::inverse(m, half, out);
}

/// Forward transform of m^3 samples restricted to the non-Nyquist modes of
/// lat, normalized by 1/m^3, written into the full-storage coefficients.
inline void analyze_padded(const Lattice& lat, fft::RealBuffer& samples, int m, fft::HalfBuffer& half,
                           std::vector<Complex>& coeffs) {
  const int n = lat.n();
  fft::forward(m, samples, half);
  const double scale = 1.0 / static_cast<double>(fft::real_size(m));
  std::fill(coeffs.begin(), coeffs.end(), Complex{});
  for (int i0 = 0; i0 < n; ++i0) {
    if (lat.is_nyquist(i0)) continue;
    const int k0 = lat.wavenumber(i0);
    const int p0 = k0 >= 0 ? k0 : k0 + m;
    for (int i1 = 0; i1 < n; ++i1) {
      if (lat.is_nyquist(i1)) continue;
      const int k1 = lat.wavenumber(i1);
      const int p1 = k1 >= 0 ? k1 : k1 + m;
      for (int k2 = 0; k2 < n / 2; ++k2) {
        const Complex v = half[fft::half_flat(m, p0, p1, k2)] * scale;
        coeffs[lat.flat(i0, i1, k2)] = v;
        if (k2 != 0) coeffs[lat.flat((n - i0) % n, (n - i1) % n, n - k2)] = std::conj(v);
      }
    }
  }
}

}  // namespace qrns
