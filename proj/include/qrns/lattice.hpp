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

#include <array>
#include <cstddef>
#include <cstdlib>
#include <numbers>
#include <string>

#include "qrns/error.hpp"

namespace qrns {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Volume of the periodic box [0, 2pi)^3.
inline constexpr double kBoxVolume = kTwoPi * kTwoPi * kTwoPi;

using Wavevector = std::array<int, 3>;

/// Truncated Fourier lattice of the periodic cube [0, 2pi)^3 sampled on n^3
/// points. Spectral and physical arrays are both row-major with axis 0
/// slowest; along each axis index i maps to wavenumber i for i < n/2 and
/// i - n otherwise (FFT-standard order).
class Lattice {
 public:
  Lattice() = default;

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_ * n_; }
  double length() const noexcept { return kTwoPi; }
  double spacing() const noexcept { return kTwoPi / n_; }
  /// Largest |k_j| kept by the 2/3 rule.
  int dealias_cutoff() const noexcept { return n_ / 3; }
  /// Points per axis of the grid used for nonlinear products.
  int padded_n() const noexcept { return 3 * n_ / 2; }

  int wavenumber(int index) const noexcept { return index < n_ / 2 ? index : index - n_; }
  int index_of(int k) const noexcept { return k >= 0 ? k : k + n_; }
  bool is_nyquist(int index) const noexcept { return index == n_ / 2; }

  std::size_t flat(int i0, int i1, int i2) const noexcept {
    return (static_cast<std::size_t>(i0) * n_ + i1) * n_ + i2;
  }
  Wavevector wavevector(std::size_t flat_index) const noexcept {
    const auto nn = static_cast<std::size_t>(n_);
    return {wavenumber(static_cast<int>(flat_index / (nn * nn))),
            wavenumber(static_cast<int>((flat_index / nn) % nn)),
            wavenumber(static_cast<int>(flat_index % nn))};
  }
  /// Flat index of -k (mod n).
  std::size_t negated(std::size_t flat_index) const noexcept {
    const auto nn = static_cast<std::size_t>(n_);
    const int i0 = static_cast<int>(flat_index / (nn * nn));
    const int i1 = static_cast<int>((flat_index / nn) % nn);
    const int i2 = static_cast<int>(flat_index % nn);
    return flat((n_ - i0) % n_, (n_ - i1) % n_, (n_ - i2) % n_);
  }
  bool has_nyquist(std::size_t flat_index) const noexcept {
    const auto nn = static_cast<std::size_t>(n_);
    return is_nyquist(static_cast<int>(flat_index / (nn * nn))) ||
           is_nyquist(static_cast<int>((flat_index / nn) % nn)) ||
           is_nyquist(static_cast<int>(flat_index % nn));
  }
  bool retained(const Wavevector& k) const noexcept {
    const int cut = dealias_cutoff();
    return std::abs(k[0]) <= cut && std::abs(k[1]) <= cut && std::abs(k[2]) <= cut;
  }

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  explicit Lattice(int n) : n_(n) {}
  friend Lattice make_lattice(int n);

  int n_ = 0;
};

inline Lattice make_lattice(int n) {
  const bool pow2 = n > 0 && (n & (n - 1)) == 0;
  if (!pow2) throw InvalidArgument("lattice size " + std::to_string(n) + " is not a power of two");
  if (n < 8 || n > 512)
    throw InvalidArgument("lattice size " + std::to_string(n) + " outside [8, 512]");
  return Lattice(n);
}

inline double norm_sq(const Wavevector& k) noexcept {
  return static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1] +
         static_cast<double>(k[2]) * k[2];
}

inline void require_same_lattice(const Lattice& a, const Lattice& b, const char* what) {
  if (!(a == b)) throw InvalidArgument(std::string(what) + ": lattice mismatch");
}

}  // namespace qrns
