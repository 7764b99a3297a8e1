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

// Binary field snapshots. Layout (little-endian, no padding):
//
//   offset  size  field
//        0     8  magic "QRNSFLD1"
//        8     4  n (u32)
//       12     4  component_count (u32)
//       16     8  time (f64)
//       24     1  mode (u8: 0 classical, 1 quasi_relativistic)
//       25     8  c (f64)
//       33     8  alpha (f64)
//       41     -  payload: per component, n^3 coefficients as (re, im) f64
//                 pairs in lattice storage order (axis 0 slowest, FFT order)

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "qrns/error.hpp"
#include "qrns/field.hpp"
#include "qrns/qrns_ops.hpp"
#include "qrns/spectral.hpp"

namespace qrns {

inline constexpr char kSnapshotMagic[9] = "QRNSFLD1";
inline constexpr std::size_t kSnapshotHeaderBytes = 41;

struct SnapshotMeta {
  double time = 0.0;
  ConvectionMode mode = ConvectionMode::quasi_relativistic;
  double c = 1.0;
  double alpha = 1.0;
};

struct Snapshot {
  SpectralField field;
  SnapshotMeta meta;
  std::vector<std::string> warnings;
};

/// Writes bytes to path through a temporary file and a rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}
inline void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}
inline std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + static_cast<std::size_t>(b)])) << (8 * b);
  return v;
}
inline double get_f64(const std::string& in, std::size_t at) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + static_cast<std::size_t>(b)])) << (8 * b);
  return std::bit_cast<double>(v);
}

}  // namespace detail

inline std::string encode_snapshot(const SpectralField& field, const SnapshotMeta& meta) {
  std::string out;
  const std::size_t n3 = field.lattice.size();
  out.reserve(kSnapshotHeaderBytes + static_cast<std::size_t>(field.count()) * n3 * 16);
  out.append(kSnapshotMagic, 8);
  detail::put_u32(out, static_cast<std::uint32_t>(field.lattice.n()));
  detail::put_u32(out, static_cast<std::uint32_t>(field.count()));
  detail::put_f64(out, meta.time);
  out.push_back(meta.mode == ConvectionMode::classical ? '\0' : '\1');
  detail::put_f64(out, meta.c);
  detail::put_f64(out, meta.alpha);
  for (const auto& comp : field.components)
    for (const Complex& z : comp) {
      detail::put_f64(out, z.real());
      detail::put_f64(out, z.imag());
    }
  return out;
}

inline Snapshot decode_snapshot(const std::string& bytes) {
  if (bytes.size() < kSnapshotHeaderBytes)
    throw FormatError("snapshot truncated: header needs " + std::to_string(kSnapshotHeaderBytes) +
                      " bytes, file has " + std::to_string(bytes.size()));
  if (std::memcmp(bytes.data(), kSnapshotMagic, 8) != 0) throw FormatError("snapshot has bad magic");
  const std::uint32_t n = detail::get_u32(bytes, 8);
  const std::uint32_t count = detail::get_u32(bytes, 12);
  if (count != 1 && count != 3)
    throw FormatError("snapshot component_count " + std::to_string(count) + " is not 1 or 3");
  Lattice lat;
  try {
    lat = make_lattice(static_cast<int>(n));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("snapshot lattice: ") + e.what());
  }
  const std::size_t expected = kSnapshotHeaderBytes + static_cast<std::size_t>(count) * lat.size() * 16;
  if (bytes.size() < expected)
    throw FormatError("snapshot truncated: expected " + std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  if (bytes.size() > expected)
    throw FormatError("snapshot size mismatch: expected " + std::to_string(expected) + " bytes, got " +
                      std::to_string(bytes.size()));
  Snapshot s;
  s.meta.time = detail::get_f64(bytes, 16);
  const auto mode_flag = static_cast<unsigned char>(bytes[24]);
  if (mode_flag > 1) throw FormatError("snapshot mode flag " + std::to_string(mode_flag) + " is invalid");
  s.meta.mode = mode_flag == 0 ? ConvectionMode::classical : ConvectionMode::quasi_relativistic;
  s.meta.c = detail::get_f64(bytes, 25);
  s.meta.alpha = detail::get_f64(bytes, 33);
  s.field = SpectralField::zeros(lat, static_cast<int>(count));
  std::size_t at = kSnapshotHeaderBytes;
  for (auto& comp : s.field.components)
    for (Complex& z : comp) {
      z = {detail::get_f64(bytes, at), detail::get_f64(bytes, at + 8)};
      at += 16;
    }
  const double defect = hermitian_defect(s.field);
  if (defect > 1e-12)
    s.warnings.push_back("snapshot is not Hermitian-symmetric (relative defect " + std::to_string(defect) + ")");
  if (count == 3) s.field.is_projected = max_relative_divergence(s.field) <= 1e-12;
  return s;
}

inline void write_snapshot(const SpectralField& field, const SnapshotMeta& meta,
                           const std::filesystem::path& path) {
  write_file_atomic(path, encode_snapshot(field, meta));
}

inline Snapshot read_snapshot(const std::filesystem::path& path) { return decode_snapshot(read_file(path)); }

}  // namespace qrns
