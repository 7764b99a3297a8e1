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
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <variant>

#include "qrns/error.hpp"
#include "qrns/field.hpp"
#include "qrns/snapshot.hpp"
#include "qrns/spectral.hpp"

namespace qrns {

struct TaylorGreen {
  double amplitude = 1.0;
};
struct RandomSolenoidal {
  double energy = 1.0;          ///< target ||u||_L2^2
  double peak_wavenumber = 2.0;
  std::uint64_t seed = 0;
};
struct FromSnapshot {
  std::string path;
};
using InitialSpec = std::variant<TaylorGreen, RandomSolenoidal, FromSnapshot>;

struct ZeroForcing {};
struct SteadyForcing {
  std::string path;  ///< snapshot holding the forcing field
};
/// Independent random solenoidal draws at t_j = j * refresh_interval, linearly
/// interpolated in between. Each draw has ||f_j||_L2^2 = energy_rate.
struct RandomForcing {
  double energy_rate = 1.0;
  double peak_wavenumber = 2.0;
  std::uint64_t seed = 0;
  double refresh_interval = 0.1;
};
using ForcingSpec = std::variant<ZeroForcing, SteadyForcing, RandomForcing>;

/// a (sin x0 cos x1 cos x2, -cos x0 sin x1 cos x2, 0)
inline SpectralField taylor_green_field(const Lattice& lat, double amplitude) {
  SpectralField u = SpectralField::zeros(lat);
  for (int s0 : {-1, 1})
    for (int s1 : {-1, 1})
      for (int s2 : {-1, 1}) {
        const Wavevector k{s0, s1, s2};
        // sin(x) -> -i sign(k)/2, cos(x) -> 1/2
        u.mode(0, k) = Complex{0.0, -0.125 * amplitude * s0};
        u.mode(1, k) = Complex{0.0, 0.125 * amplitude * s1};
      }
  u.is_projected = true;
  return u;
}

/// Hermitian Gaussian modes in the shell max(1, p-1) <= |k| <= p+1 (within the
/// dealiased set), projected and scaled to ||u||_L2^2 = energy. Bit-identical
/// for equal seeds.
inline SpectralField random_solenoidal_field(const Lattice& lat, double energy, double peak_wavenumber,
                                             std::uint64_t seed) {
  if (!(energy >= 0.0) || !std::isfinite(energy)) throw InvalidArgument("random_solenoidal: bad energy");
  if (!(peak_wavenumber > 0.0)) throw InvalidArgument("random_solenoidal: peak_wavenumber must be positive");
  const double lo = std::max(1.0, peak_wavenumber - 1.0), hi = peak_wavenumber + 1.0;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x51u};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField u = SpectralField::zeros(lat);
  bool any = false;
  // Wavevectors are visited in a fixed order independent of n, so the same
  // seed gives the same field on every lattice that resolves the shell.
  const int reach = static_cast<int>(std::ceil(hi));
  for (int k0 = 0; k0 <= reach; ++k0)
    for (int k1 = -reach; k1 <= reach; ++k1)
      for (int k2 = -reach; k2 <= reach; ++k2) {
        // one draw per Hermitian pair: first nonzero component positive
        if (k0 == 0 && (k1 < 0 || (k1 == 0 && k2 <= 0))) continue;
        const Wavevector k{k0, k1, k2};
        const double mag = std::sqrt(norm_sq(k));
        if (mag < lo || mag > hi) continue;
        std::array<Complex, 3> draw;
        for (auto& z : draw) {
          const double re = gauss(rng);
          const double im = gauss(rng);
          z = {re, im};
        }
        if (!lat.retained(k)) continue;
        for (int c = 0; c < 3; ++c) u.set_real_mode(c, k, draw[static_cast<std::size_t>(c)]);
        any = true;
      }
  if (!any) throw InvalidArgument("random_solenoidal: no resolved modes near peak wavenumber");
  u = leray_project(std::move(u));
  const double l2_sq = compute_squared_norms(u).l2;
  if (l2_sq > 0.0) u *= std::sqrt(energy / l2_sq);
  u.is_projected = true;
  return u;
}

inline SpectralField realize_initial(const InitialSpec& spec, const Lattice& lat) {
  SpectralField u = std::visit(
      [&](const auto& s) -> SpectralField {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TaylorGreen>) {
          return taylor_green_field(lat, s.amplitude);
        } else if constexpr (std::is_same_v<T, RandomSolenoidal>) {
          return random_solenoidal_field(lat, s.energy, s.peak_wavenumber, s.seed);
        } else {
          Snapshot snap = read_snapshot(s.path);
          if (!(snap.field.lattice == lat))
            throw InvalidArgument("initial snapshot " + s.path + " has n=" + std::to_string(snap.field.lattice.n()) +
                                  ", configuration has n=" + std::to_string(lat.n()));
          if (snap.field.count() != 3) throw InvalidArgument("initial snapshot must hold a vector field");
          return std::move(snap.field);
        }
      },
      spec);
  return leray_project(dealias(std::move(u)));
}

/// Evaluates f(t) for one ForcingSpec. Holds a small cache of random draws, so
/// each simulation owns its own instance.
class Forcing {
 public:
  Forcing(const ForcingSpec& spec, const Lattice& lat) : spec_(spec), lattice_(lat) {
    if (const auto* steady = std::get_if<SteadyForcing>(&spec_)) {
      Snapshot snap = read_snapshot(steady->path);
      if (!(snap.field.lattice == lat) || snap.field.count() != 3)
        throw InvalidArgument("forcing snapshot " + steady->path + " does not match the lattice");
      steady_ = leray_project(dealias(std::move(snap.field)));
      remove_mean(steady_);
    } else if (const auto* r = std::get_if<RandomForcing>(&spec_)) {
      if (!(r->refresh_interval > 0.0)) throw InvalidArgument("forcing refresh_interval must be positive");
    }
  }

  bool is_zero() const { return std::holds_alternative<ZeroForcing>(spec_); }

  SpectralField at(double t) {
    if (is_zero()) return SpectralField::zeros(lattice_);
    if (std::holds_alternative<SteadyForcing>(spec_)) return steady_;
    const auto& r = std::get<RandomForcing>(spec_);
    const double s = t / r.refresh_interval;
    const auto j = static_cast<std::int64_t>(std::floor(s));
    const double theta = s - static_cast<double>(j);
    SpectralField f = draw(j);
    if (theta != 0.0) {
      const SpectralField& next = draw(j + 1);
      for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < lattice_.size(); ++i)
          f[c][i] = (1.0 - theta) * f[c][i] + theta * next[c][i];
    }
    f.is_projected = true;
    return f;
  }

 private:
  static void remove_mean(SpectralField& f) {
    for (int c = 0; c < f.count(); ++c) f[c][0] = 0.0;
  }

  const SpectralField& draw(std::int64_t j) {
    for (auto& [index, field] : cache_)
      if (index == j && !field.components.empty()) return field;
    const auto& r = std::get<RandomForcing>(spec_);
    const std::uint64_t mixed = r.seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(j + 1));
    auto& slot = cache_[next_slot_];
    next_slot_ = (next_slot_ + 1) % cache_.size();
    slot = {j, random_solenoidal_field(lattice_, r.energy_rate, r.peak_wavenumber, mixed)};
    return slot.second;
  }

  ForcingSpec spec_;
  Lattice lattice_;
  SpectralField steady_;
  std::array<std::pair<std::int64_t, SpectralField>, 3> cache_{};
  std::size_t next_slot_ = 0;
};

}  // namespace qrns
