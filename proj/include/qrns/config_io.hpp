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

// Run configuration files and energy-record CSV.
//
// Configuration: one key=value per line, '#' starts a comment, blank lines
// ignored. Required keys: n, alpha, c, mode, t_end, cfl_safety, dt_max,
// record_every, seed, initial.type, forcing.type. Variant keys:
//
//   initial.type = taylor_green       initial.amplitude
//   initial.type = random_solenoidal  initial.energy, initial.peak_wavenumber,
//                                     initial.seed (optional, defaults to seed)
//   initial.type = snapshot           initial.path
//   forcing.type = zero
//   forcing.type = steady             forcing.path
//   forcing.type = random_solenoidal  forcing.energy_rate, forcing.peak_wavenumber,
//                                     forcing.refresh_interval,
//                                     forcing.seed (optional, defaults to seed + 1)

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "qrns/error.hpp"
#include "qrns/records.hpp"
#include "qrns/snapshot.hpp"
#include "qrns/timestepper.hpp"

namespace qrns {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_double(std::string_view text, double& out) {
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

inline bool parse_u64(std::string_view text, std::uint64_t& out) {
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

}  // namespace detail

inline SimConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {}) {
  static const std::set<std::string, std::less<>> known{
      "n", "alpha", "c", "mode", "t_end", "cfl_safety", "dt_max", "record_every", "seed",
      "initial.type", "initial.amplitude", "initial.energy", "initial.peak_wavenumber", "initial.seed",
      "initial.path", "forcing.type", "forcing.path", "forcing.energy_rate", "forcing.peak_wavenumber",
      "forcing.seed", "forcing.refresh_interval"};

  std::map<std::string, detail::Entry, std::less<>> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected key=value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (!known.contains(key)) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (entries.contains(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");
    entries[key] = {value, line_no};
  }

  std::set<std::string, std::less<>> used;
  const auto require = [&](const std::string& key) -> const detail::Entry& {
    const auto it = entries.find(key);
    if (it == entries.end()) throw ConfigError(0, "missing required key '" + key + "'");
    used.insert(key);
    return it->second;
  };
  const auto number = [&](const std::string& key) {
    const auto& e = require(key);
    double v = 0.0;
    if (!detail::parse_double(e.value, v) || !std::isfinite(v))
      throw ConfigError(e.line, "cannot parse '" + e.value + "' as a number for '" + key + "'");
    return std::pair{v, e.line};
  };
  const auto positive = [&](const std::string& key) {
    const auto [v, line] = number(key);
    if (!(v > 0.0)) throw ConfigError(line, key + " must be > 0, got " + entries.at(key).value);
    return v;
  };
  const auto integer = [&](const std::string& key) {
    const auto& e = require(key);
    std::uint64_t v = 0;
    if (!detail::parse_u64(e.value, v))
      throw ConfigError(e.line, "cannot parse '" + e.value + "' as a non-negative integer for '" + key + "'");
    return std::pair{v, e.line};
  };
  const auto path = [&](const std::string& key) {
    std::filesystem::path p = require(key).value;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return p.string();
  };

  SimConfig cfg;
  {
    const auto [n, line] = integer("n");
    try {
      cfg.lattice = make_lattice(static_cast<int>(std::min<std::uint64_t>(n, 1u << 30)));
    } catch (const InvalidArgument& e) {
      throw ConfigError(line, e.what());
    }
  }
  cfg.params.alpha = positive("alpha");
  cfg.params.c = positive("c");
  {
    const auto& e = require("mode");
    if (e.value == "classical") cfg.mode = ConvectionMode::classical;
    else if (e.value == "quasi_relativistic") cfg.mode = ConvectionMode::quasi_relativistic;
    else throw ConfigError(e.line, "mode '" + e.value + "' is not one of {classical, quasi_relativistic}");
  }
  {
    const auto [t, line] = number("t_end");
    if (!(t >= 0.0)) throw ConfigError(line, "t_end must be >= 0");
    cfg.t_end = t;
  }
  {
    const auto [s, line] = number("cfl_safety");
    if (!(s > 0.0 && s <= 1.0)) throw ConfigError(line, "cfl_safety must lie in (0, 1]");
    cfg.cfl_safety = s;
  }
  cfg.dt_max = positive("dt_max");
  {
    const auto [r, line] = integer("record_every");
    if (r == 0) throw ConfigError(line, "record_every must be >= 1");
    cfg.record_every = static_cast<std::size_t>(r);
  }
  cfg.seed = integer("seed").first;

  {
    const auto& e = require("initial.type");
    if (e.value == "taylor_green") {
      cfg.initial = TaylorGreen{number("initial.amplitude").first};
    } else if (e.value == "random_solenoidal") {
      RandomSolenoidal r;
      const auto [energy, line] = number("initial.energy");
      if (!(energy >= 0.0)) throw ConfigError(line, "initial.energy must be >= 0");
      r.energy = energy;
      r.peak_wavenumber = positive("initial.peak_wavenumber");
      r.seed = entries.contains("initial.seed") ? integer("initial.seed").first : cfg.seed;
      cfg.initial = r;
    } else if (e.value == "snapshot") {
      cfg.initial = FromSnapshot{path("initial.path")};
    } else {
      throw ConfigError(e.line, "initial.type '" + e.value +
                                    "' is not one of {taylor_green, random_solenoidal, snapshot}");
    }
  }
  {
    const auto& e = require("forcing.type");
    if (e.value == "zero") {
      cfg.forcing = ZeroForcing{};
    } else if (e.value == "steady") {
      cfg.forcing = SteadyForcing{path("forcing.path")};
    } else if (e.value == "random_solenoidal") {
      RandomForcing r;
      const auto [rate, line] = number("forcing.energy_rate");
      if (!(rate >= 0.0)) throw ConfigError(line, "forcing.energy_rate must be >= 0");
      r.energy_rate = rate;
      r.peak_wavenumber = positive("forcing.peak_wavenumber");
      r.refresh_interval = positive("forcing.refresh_interval");
      r.seed = entries.contains("forcing.seed") ? integer("forcing.seed").first : cfg.seed + 1;
      cfg.forcing = r;
    } else {
      throw ConfigError(e.line, "forcing.type '" + e.value + "' is not one of {zero, steady, random_solenoidal}");
    }
  }
  for (const auto& [key, entry] : entries)
    if (!used.contains(key)) throw ConfigError(entry.line, "key '" + key + "' does not apply to this configuration");
  return cfg;
}

inline SimConfig load_config(const std::filesystem::path& file) {
  std::string text;
  try {
    text = read_file(file);
  } catch (const Error& e) {
    throw ConfigError(0, e.what());
  }
  try {
    return parse_config(text, file.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), file.string() + ": " + e.what());
  }
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Inverse of parse_config (paths are written as given).
inline std::string format_config(const SimConfig& cfg) {
  std::ostringstream out;
  out << "n=" << cfg.lattice.n() << "\n"
      << "alpha=" << format_double(cfg.params.alpha) << "\n"
      << "c=" << format_double(cfg.params.c) << "\n"
      << "mode=" << to_string(cfg.mode) << "\n"
      << "t_end=" << format_double(cfg.t_end) << "\n"
      << "cfl_safety=" << format_double(cfg.cfl_safety) << "\n"
      << "dt_max=" << format_double(cfg.dt_max) << "\n"
      << "record_every=" << cfg.record_every << "\n"
      << "seed=" << cfg.seed << "\n";
  if (const auto* tg = std::get_if<TaylorGreen>(&cfg.initial)) {
    out << "initial.type=taylor_green\ninitial.amplitude=" << format_double(tg->amplitude) << "\n";
  } else if (const auto* r = std::get_if<RandomSolenoidal>(&cfg.initial)) {
    out << "initial.type=random_solenoidal\ninitial.energy=" << format_double(r->energy)
        << "\ninitial.peak_wavenumber=" << format_double(r->peak_wavenumber) << "\ninitial.seed=" << r->seed << "\n";
  } else {
    out << "initial.type=snapshot\ninitial.path=" << std::get<FromSnapshot>(cfg.initial).path << "\n";
  }
  if (std::holds_alternative<ZeroForcing>(cfg.forcing)) {
    out << "forcing.type=zero\n";
  } else if (const auto* s = std::get_if<SteadyForcing>(&cfg.forcing)) {
    out << "forcing.type=steady\nforcing.path=" << s->path << "\n";
  } else {
    const auto& r = std::get<RandomForcing>(cfg.forcing);
    out << "forcing.type=random_solenoidal\nforcing.energy_rate=" << format_double(r.energy_rate)
        << "\nforcing.peak_wavenumber=" << format_double(r.peak_wavenumber)
        << "\nforcing.refresh_interval=" << format_double(r.refresh_interval) << "\nforcing.seed=" << r.seed << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Energy-record CSV

inline constexpr std::string_view kRecordsHeader = "t,dt,l2_sq,h1_semi_sq,h2_sq,b_uuu,f_l2_sq,f_vdual_sq,work,max_speed";

inline std::string format_records(const std::vector<EnergyRecord>& records) {
  std::string out(kRecordsHeader);
  out += '\n';
  for (const auto& r : records) {
    const double values[] = {r.t, r.dt, r.l2_sq, r.h1_semi_sq, r.h2_sq, r.b_uuu, r.f_l2_sq, r.f_vdual_sq, r.work, r.max_speed};
    for (std::size_t i = 0; i < std::size(values); ++i) {
      if (i > 0) out += ',';
      out += format_double(values[i]);
    }
    out += '\n';
  }
  return out;
}

inline void write_records(const std::vector<EnergyRecord>& records, const std::filesystem::path& path) {
  write_file_atomic(path, format_records(records));
}

inline std::vector<EnergyRecord> parse_records(std::string_view text) {
  std::vector<EnergyRecord> records;
  std::size_t pos = 0, line_no = 0;
  bool header = true;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = detail::trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (header) {
      if (line != kRecordsHeader) throw FormatError("records CSV: unexpected header '" + std::string(line) + "'");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    double values[10];
    std::size_t field = 0, start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
      if (field >= 10 || !detail::parse_double(cell, values[field]))
        throw FormatError("records CSV line " + std::to_string(line_no) + ": bad value '" + std::string(cell) + "'");
      ++field;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (field != 10)
      throw FormatError("records CSV line " + std::to_string(line_no) + ": expected 10 columns, got " +
                        std::to_string(field));
    records.push_back({values[0], values[1], values[2], values[3], values[4], values[5], values[6], values[7],
                       values[8], values[9]});
  }
  if (header) throw FormatError("records CSV: missing header");
  return records;
}

inline std::vector<EnergyRecord> read_records(const std::filesystem::path& path) {
  return parse_records(read_file(path));
}

// ---------------------------------------------------------------------------
// Audit report CSV

struct AuditRow {
  std::string name;
  double observed = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = false;
};

inline constexpr std::string_view kAuditHeader = "audit,observed,bound,margin,pass";

inline std::string format_audit(const std::vector<AuditRow>& rows) {
  std::string out(kAuditHeader);
  out += '\n';
  for (const auto& r : rows)
    out += r.name + ',' + format_double(r.observed) + ',' + format_double(r.bound) + ',' + format_double(r.margin) +
           ',' + (r.pass ? "PASS" : "FAIL") + '\n';
  return out;
}

}  // namespace qrns
