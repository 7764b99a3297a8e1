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

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qrns/lattice.hpp"

namespace qrns {

using Complex = std::complex<double>;

/// Complex Fourier coefficients of a scalar (1 component) or vector
/// (3 components) field, full n^3 storage per component. Coefficient of mode
/// k is (1/n^3) sum_x f(x) exp(-i k.x).
struct SpectralField {
  Lattice lattice;
  std::vector<std::vector<Complex>> components;
  bool is_projected = false;

  static SpectralField zeros(const Lattice& lattice, int count = 3) {
    SpectralField f;
    f.lattice = lattice;
    f.components.assign(static_cast<std::size_t>(count), std::vector<Complex>(lattice.size()));
    return f;
  }

  int count() const noexcept { return static_cast<int>(components.size()); }
  std::vector<Complex>& operator[](int c) { return components[static_cast<std::size_t>(c)]; }
  const std::vector<Complex>& operator[](int c) const {
    return components[static_cast<std::size_t>(c)];
  }

  /// Mode (k0,k1,k2) of component c; wavenumbers in [-n/2, n/2).
  Complex& mode(int c, const Wavevector& k) {
    return (*this)[c][lattice.flat(lattice.index_of(k[0]), lattice.index_of(k[1]),
                                   lattice.index_of(k[2]))];
  }
  Complex mode(int c, const Wavevector& k) const {
    return (*this)[c][lattice.flat(lattice.index_of(k[0]), lattice.index_of(k[1]),
                                   lattice.index_of(k[2]))];
  }

  /// Sets the mode k and its Hermitian partner -k so the field stays real.
  void set_real_mode(int c, const Wavevector& k, Complex value) {
    mode(c, k) = value;
    mode(c, {-k[0], -k[1], -k[2]}) = std::conj(value);
  }

  SpectralField& operator+=(const SpectralField& o) {
    require_same_lattice(lattice, o.lattice, "SpectralField +=");
    for (int c = 0; c < count(); ++c)
      for (std::size_t i = 0; i < lattice.size(); ++i) (*this)[c][i] += o[c][i];
    is_projected = is_projected && o.is_projected;
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same_lattice(lattice, o.lattice, "SpectralField -=");
    for (int c = 0; c < count(); ++c)
      for (std::size_t i = 0; i < lattice.size(); ++i) (*this)[c][i] -= o[c][i];
    is_projected = is_projected && o.is_projected;
    return *this;
  }
  SpectralField& operator*=(double s) {
    for (auto& comp : components)
      for (auto& v : comp) v *= s;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
};

/// Real samples on the n^3 grid, x = 2 pi (i0, i1, i2) / n.
struct PhysicalField {
  Lattice lattice;
  std::vector<std::vector<double>> components;

  static PhysicalField zeros(const Lattice& lattice, int count = 3) {
    PhysicalField f;
    f.lattice = lattice;
    f.components.assign(static_cast<std::size_t>(count), std::vector<double>(lattice.size()));
    return f;
  }

  /// Samples fn(x0, x1, x2) -> component values.
  template <class Fn>
  static PhysicalField sample(const Lattice& lattice, int count, Fn&& fn) {
    PhysicalField f = zeros(lattice, count);
    const int n = lattice.n();
    const double h = lattice.spacing();
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2) {
          const std::size_t idx = lattice.flat(i0, i1, i2);
          const auto values = fn(i0 * h, i1 * h, i2 * h);
          for (int c = 0; c < count; ++c) f[c][idx] = values[static_cast<std::size_t>(c)];
        }
    return f;
  }

  int count() const noexcept { return static_cast<int>(components.size()); }
  std::vector<double>& operator[](int c) { return components[static_cast<std::size_t>(c)]; }
  const std::vector<double>& operator[](int c) const {
    return components[static_cast<std::size_t>(c)];
  }

  bool all_finite() const noexcept {
    for (const auto& comp : components)
      for (double v : comp)
        if (!std::isfinite(v)) return false;
    return true;
  }
};

}  // namespace qrns
