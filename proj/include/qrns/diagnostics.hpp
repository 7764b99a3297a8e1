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

// Audits of the a-priori estimates on recorded trajectories, the two-run
// uniqueness probe, and the resolution / low-speed studies.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <string>
#include <vector>

#include "qrns/error.hpp"
#include "qrns/initial.hpp"
#include "qrns/records.hpp"
#include "qrns/spectral.hpp"
#include "qrns/timestepper.hpp"

namespace qrns {

/// Constants of the energy estimates, derived from (alpha, c, records) only.
struct AuditConstants {
  double alpha = 0.0;
  double c_b = 0.0;       ///< trilinear bound |B[y,u,w]| <= c_b ||grad u|| ||w||
  double eps = 0.0;       ///< (1 + c_b) eps = alpha / 2
  double k_energy = 0.0;  ///< Gronwall rate K
  double t_end = 0.0;
  double f_vdual_integral = 0.0;
  double c1_T = 0.0;
  double c2_T = 0.0;
};

inline double trilinear_constant(double c) { return std::sqrt(3.0) * c; }

/// Trapezoid rule of value(record) over the recorded (nonuniform) time grid.
template <class Fn>
double trapezoid(const std::vector<EnergyRecord>& records, Fn&& value) {
  double sum = 0.0;
  for (std::size_t i = 1; i < records.size(); ++i)
    sum += 0.5 * (records[i].t - records[i - 1].t) * (value(records[i]) + value(records[i - 1]));
  return sum;
}

inline AuditConstants make_audit_constants(double alpha, double c, const std::vector<EnergyRecord>& records) {
  if (records.empty()) throw InvalidArgument("audit constants need at least one record");
  AuditConstants k;
  k.alpha = alpha;
  k.c_b = trilinear_constant(c);
  k.eps = alpha / (2.0 * (1.0 + k.c_b));
  k.k_energy = 2.0 * std::max(1.0 / (4.0 * k.eps), k.eps + k.c_b / (4.0 * k.eps));
  k.t_end = records.back().t - records.front().t;
  k.f_vdual_integral = trapezoid(records, [](const EnergyRecord& r) { return r.f_vdual_sq; });
  const double K = k.k_energy, T = k.t_end;
  k.c1_T = std::exp(K * T) * (K + 1.0) * (records.front().l2_sq + k.f_vdual_integral);
  k.c2_T = (2.0 * k.c1_T + K * T * k.c1_T + K * k.f_vdual_integral) / alpha;
  return k;
}

struct EnergyAudit {
  std::vector<double> margins;  ///< one per adjacent record pair
  double min_margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// margin_i = K (f_vdual_sq + l2_sq) - [ d/dt l2_sq + alpha h1_semi_sq ], with
/// the record quantities averaged over each interval.
inline EnergyAudit audit_energy_inequality(const std::vector<EnergyRecord>& records, const AuditConstants& k) {
  if (records.size() < 2) throw InvalidArgument("audit_energy_inequality needs at least 2 records");
  EnergyAudit a;
  a.min_margin = std::numeric_limits<double>::infinity();
  double max_l2 = 0.0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const EnergyRecord& p = records[i - 1];
    const EnergyRecord& q = records[i];
    const double dt = q.t - p.t;
    if (!(dt > 0.0)) throw InvalidArgument("records are not strictly increasing in time");
    const double rate = (q.l2_sq - p.l2_sq) / dt;
    const double h1 = 0.5 * (p.h1_semi_sq + q.h1_semi_sq);
    const double rhs = k.k_energy * 0.5 * (p.f_vdual_sq + q.f_vdual_sq + p.l2_sq + q.l2_sq);
    const double margin = rhs - (rate + k.alpha * h1);
    a.margins.push_back(margin);
    a.min_margin = std::min(a.min_margin, margin);
  }
  for (const auto& r : records) max_l2 = std::max(max_l2, r.l2_sq);
  a.tolerance = 1e-6 * (1.0 + max_l2);
  a.pass = a.min_margin >= -a.tolerance;
  return a;
}

struct BoundAudit {
  double observed = 0.0;
  double bound = 0.0;
  double margin = 0.0;  ///< bound - observed
  bool pass = false;
};

/// sup_t ||u||^2 <= C1(T).
inline BoundAudit audit_gronwall_sup(const std::vector<EnergyRecord>& records, const AuditConstants& k) {
  BoundAudit a;
  for (const auto& r : records) a.observed = std::max(a.observed, r.l2_sq);
  a.bound = k.c1_T;
  a.margin = a.bound - a.observed;
  a.pass = a.observed <= a.bound * (1.0 + 1e-6);
  return a;
}

/// int_0^T (||u||^2 + ||grad u||^2) dt <= T C1(T) + C2(T).
inline BoundAudit audit_dissipation_integral(const std::vector<EnergyRecord>& records, const AuditConstants& k) {
  BoundAudit a;
  a.observed = trapezoid(records, [](const EnergyRecord& r) { return r.l2_sq + r.h1_semi_sq; });
  a.bound = k.t_end * k.c1_T + k.c2_T;
  a.margin = a.bound - a.observed;
  a.pass = a.observed <= a.bound * (1.0 + 1e-6);
  return a;
}

/// Speed bound max|v| < c and trilinear bound |B[u,u,u]| <= c_b ||grad u|| ||u||
/// at every record of a quasi-relativistic run.
struct PointwiseAudit {
  double max_speed = 0.0;
  double worst_trilinear_ratio = 0.0;  ///< max |b_uuu| / (c_b sqrt(h1 l2))
  bool speed_pass = false;
  bool trilinear_pass = false;
};

inline PointwiseAudit audit_pointwise(const std::vector<EnergyRecord>& records, double c) {
  PointwiseAudit a;
  const double c_b = trilinear_constant(c);
  for (const auto& r : records) {
    a.max_speed = std::max(a.max_speed, r.max_speed);
    const double scale = c_b * std::sqrt(r.h1_semi_sq * r.l2_sq);
    if (scale > 0.0) a.worst_trilinear_ratio = std::max(a.worst_trilinear_ratio, std::abs(r.b_uuu) / scale);
    else if (r.b_uuu != 0.0) a.worst_trilinear_ratio = std::numeric_limits<double>::infinity();
  }
  a.speed_pass = a.max_speed < c;
  a.trilinear_pass = a.worst_trilinear_ratio <= 1.0;
  return a;
}

/// Higher-regularity quantities reported without a bound (the estimate's
/// constant is not computable): int ||u||_H2^2 dt and sup ||u||_V^2.
struct RegularityReport {
  double h2_integral = 0.0;
  double sup_h1_sq = 0.0;
  double initial_h1_sq = 0.0;
  double f_l2_integral = 0.0;
  bool finite = false;
};

inline RegularityReport regularity_report(const std::vector<EnergyRecord>& records) {
  RegularityReport r;
  if (records.empty()) return r;
  r.h2_integral = trapezoid(records, [](const EnergyRecord& e) { return e.h2_sq; });
  r.f_l2_integral = trapezoid(records, [](const EnergyRecord& e) { return e.f_l2_sq; });
  for (const auto& e : records) r.sup_h1_sq = std::max(r.sup_h1_sq, e.l2_sq + e.h1_semi_sq);
  r.initial_h1_sq = records.front().l2_sq + records.front().h1_semi_sq;
  r.finite = std::isfinite(r.h2_integral) && std::isfinite(r.sup_h1_sq) && std::isfinite(r.f_l2_integral);
  return r;
}

/// Per-step defect of the discrete energy identity
/// (1/2) d/dt ||u||^2 + alpha ||grad u||^2 + B[u,u,u] - <f,u> = 0.
/// The right-hand side is integrated over each step with the quadratic through
/// three neighbouring records (trapezoid when only two exist), so the defect
/// reflects the time integrator rather than the quadrature. Records are
/// expected at every step.
inline std::vector<double> energy_identity_residuals(const std::vector<EnergyRecord>& records, double alpha) {
  std::vector<double> out;
  const auto source = [alpha](const EnergyRecord& r) { return -alpha * r.h1_semi_sq - r.b_uuu + r.work; };
  const auto quadratic_integral = [&](std::size_t first, double lo, double hi) {
    const double t[3] = {records[first].t, records[first + 1].t, records[first + 2].t};
    const double s[3] = {source(records[first]), source(records[first + 1]), source(records[first + 2])};
    const auto interp = [&](double x) {
      double v = 0.0;
      for (int a = 0; a < 3; ++a) {
        double w = s[a];
        for (int b = 0; b < 3; ++b)
          if (b != a) w *= (x - t[b]) / (t[a] - t[b]);
        v += w;
      }
      return v;
    };
    // two-point Gauss rule, exact for the quadratic
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo), off = half / std::sqrt(3.0);
    return half * (interp(mid - off) + interp(mid + off));
  };
  for (std::size_t i = 1; i < records.size(); ++i) {
    const EnergyRecord& p = records[i - 1];
    const EnergyRecord& q = records[i];
    double integral = 0.0;
    if (records.size() < 3)
      integral = 0.5 * (q.t - p.t) * (source(p) + source(q));
    else
      integral = quadratic_integral(i + 1 < records.size() ? i - 1 : i - 2, p.t, q.t);
    out.push_back(0.5 * (q.l2_sq - p.l2_sq) - integral);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Uniqueness probe

/// Lipschitz constant of g(y) = c y / sqrt(c^2 + |y|^2) used in the envelope:
/// the dimension constant n(n+1) = 12 times c, times the 1/c of h.
inline constexpr double kVelocityMapLipschitz = 12.0;

/// Smallest C with lambda X Y <= (alpha/2) X^{4/3} + C Y^4 for all X, Y >= 0
/// (Young's inequality with exponents 4/3 and 4).
inline double young_constant(double lambda, double alpha) {
  return 27.0 * std::pow(lambda, 4) / (32.0 * alpha * alpha * alpha);
}

struct UniquenessReport {
  double k_unique = 0.0;
  double young_c = 0.0;
  double sup_grad_sq = 0.0;                ///< sup_t ||grad u_1||^2
  std::vector<double> times;
  std::vector<double> difference_sq;       ///< ||U(t)||^2
  std::vector<double> log_margin;          ///< K t + log(1+1e-6) - log(||U||^2/||U(0)||^2)
  double sup_difference = 0.0;             ///< sup_t ||U(t)||
  double max_growth = 0.0;                 ///< sup_t ||U(t)||^2 / ||U(0)||^2
  bool identical = false;                  ///< U == 0 at every record, bitwise
  bool pass = false;
};

inline SpectralField unit_perturbation(const Lattice& lat, std::uint64_t seed) {
  return random_solenoidal_field(lat, 1.0, 2.0, seed ^ 0xD1B54A32D192ED03ull);
}

/// Runs u_0 and u_0 + delta p (p a unit random solenoidal field) and checks
/// ||U(t)||^2 <= e^{K t} ||U(0)||^2 (1 + 1e-6) at every record.
inline UniquenessReport uniqueness_probe(const SimConfig& config, double delta, const SimOptions& options = {}) {
  if (!(delta >= 0.0)) throw InvalidArgument("uniqueness_probe: delta must be >= 0");
  if (config.mode != ConvectionMode::quasi_relativistic)
    throw InvalidArgument("uniqueness_probe: quasi_relativistic mode required");
  config.validate();
  SimConfig fixed = config;
  fixed.record_every = 1;
  SimState s1 = initial_state(fixed);
  SimState s2 = s1;
  const SpectralField p = unit_perturbation(fixed.lattice, fixed.seed);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < fixed.lattice.size(); ++i) s2.u[c][i] += delta * p[c][i];

  // Both runs advance on the same time grid (that of u_1) so U is compared
  // at equal times.
  fixed.step_control = StepControl::fixed;
  // dt <= cfl_safety dx / c keeps every later step CFL-stable since |v| < c.
  fixed.dt_max = std::min({config.dt_max, cfl_dt(s1.u, config),
                           config.cfl_safety * config.lattice.spacing() / config.params.c});

  Forcing f1(fixed.forcing, fixed.lattice), f2(fixed.forcing, fixed.lattice);
  UniquenessReport rep;
  rep.young_c = young_constant(kVelocityMapLipschitz, config.params.alpha);
  const double c_b = trilinear_constant(config.params.c);
  const auto start = std::chrono::steady_clock::now();

  std::vector<double> grad_sq;
  const auto diff_sq = [](const SpectralField& a, const SpectralField& b) {
    return compute_squared_norms(a - b).l2;
  };
  rep.identical = true;
  const auto record = [&](const SimState& a, const SimState& b) {
    rep.times.push_back(a.t);
    rep.difference_sq.push_back(diff_sq(a.u, b.u));
    grad_sq.push_back(compute_squared_norms(a.u).h1_semi);
    for (int c = 0; c < 3 && rep.identical; ++c)
      if (a.u[c] != b.u[c]) rep.identical = false;
  };
  record(s1, s2);
  while (s1.t < fixed.t_end) {
    s1 = step(s1, fixed, f1);
    s2 = step(s2, fixed, f2);
    record(s1, s2);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (elapsed.count() > options.budget_seconds) break;
  }
  rep.sup_grad_sq = *std::max_element(grad_sq.begin(), grad_sq.end());
  rep.k_unique = 2.0 * (c_b * c_b / (2.0 * config.params.alpha) + rep.young_c * rep.sup_grad_sq * rep.sup_grad_sq);
  const double u0 = rep.difference_sq.front();
  rep.pass = true;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double d = rep.difference_sq[i];
    rep.sup_difference = std::max(rep.sup_difference, std::sqrt(d));
    if (u0 == 0.0) {
      rep.log_margin.push_back(d == 0.0 ? 0.0 : -std::numeric_limits<double>::infinity());
      if (d != 0.0) rep.pass = false;
      continue;
    }
    rep.max_growth = std::max(rep.max_growth, d / u0);
    const double lm = rep.k_unique * (rep.times[i] - rep.times.front()) + std::log1p(1e-6) - std::log(d / u0);
    rep.log_margin.push_back(lm);
    if (lm < 0.0) rep.pass = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Studies

/// Embeds a field into a finer lattice (modes outside the coarse lattice zero).
inline SpectralField prolong(const SpectralField& coarse, const Lattice& fine) {
  const Lattice& lat = coarse.lattice;
  if (fine.n() < lat.n()) throw InvalidArgument("prolong: target lattice is coarser");
  SpectralField out = SpectralField::zeros(fine, coarse.count());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (lat.has_nyquist(i)) continue;
    const Wavevector k = lat.wavevector(i);
    for (int c = 0; c < coarse.count(); ++c) out.mode(c, k) = coarse[c][i];
  }
  out.is_projected = coarse.is_projected;
  return out;
}

/// Restriction onto a coarser lattice (drops coarse Nyquist modes).
inline SpectralField restrict_to(const SpectralField& fine, const Lattice& coarse) {
  SpectralField out = SpectralField::zeros(coarse, fine.count());
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (coarse.has_nyquist(i)) continue;
    const Wavevector k = coarse.wavevector(i);
    for (int c = 0; c < fine.count(); ++c) out[c][i] = fine.mode(c, k);
  }
  out.is_projected = fine.is_projected;
  return out;
}

/// Runs fn(i) for i in [0, count) with at most jobs concurrent invocations.
template <class Fn>
auto run_parallel(std::size_t count, std::size_t jobs, Fn&& fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> results;
  results.reserve(count);
  jobs = std::max<std::size_t>(1, jobs);
  for (std::size_t begin = 0; begin < count; begin += jobs) {
    std::vector<std::future<R>> batch;
    for (std::size_t i = begin; i < std::min(count, begin + jobs); ++i)
      batch.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, fn, i));
    for (auto& f : batch) results.push_back(f.get());
  }
  return results;
}

struct ConvergenceRow {
  int n = 0;
  double error = 0.0;  ///< ||u_n - u_ref|| at t_end
  double ratio = 0.0;  ///< error(previous n) / error(n); 0 on the first row
};

struct ConvergenceStudy {
  int n_ref = 0;
  double reference_l2 = 0.0;
  std::vector<ConvergenceRow> rows;
  bool asserted = false;  ///< false for a single resolution
  bool decreasing = false;
  bool spectral = false;  ///< every successive ratio >= 10
  bool pass = false;
};

/// Resolution study at fixed step dt = dt_max. Initial data is realized on
/// each lattice from the same spec.
inline ConvergenceStudy convergence_study(const SimConfig& base, std::vector<int> n_list, std::size_t jobs = 1) {
  if (n_list.empty()) throw InvalidArgument("convergence_study: empty resolution list");
  std::sort(n_list.begin(), n_list.end());
  if (std::adjacent_find(n_list.begin(), n_list.end()) != n_list.end())
    throw InvalidArgument("convergence_study: duplicate resolutions");
  ConvergenceStudy study;
  study.n_ref = 2 * n_list.back();
  std::vector<int> all = n_list;
  all.push_back(study.n_ref);
  const auto run = [&](std::size_t i) {
    SimConfig cfg = base;
    cfg.lattice = make_lattice(all[i]);
    cfg.step_control = StepControl::fixed;
    cfg.record_every = std::numeric_limits<std::size_t>::max();
    return simulate(cfg).final_state.u;
  };
  std::vector<SpectralField> finals = run_parallel(all.size(), jobs, run);
  const SpectralField& ref = finals.back();
  study.reference_l2 = std::sqrt(compute_squared_norms(ref).l2);
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    ConvergenceRow row;
    row.n = all[i];
    row.error = std::sqrt(compute_squared_norms(prolong(finals[i], ref.lattice) - ref).l2);
    if (i > 0) row.ratio = study.rows.back().error / row.error;
    study.rows.push_back(row);
  }
  study.asserted = study.rows.size() > 1;
  study.decreasing = true;
  study.spectral = true;
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    if (!(study.rows[i].error < study.rows[i - 1].error)) study.decreasing = false;
    if (!(study.rows[i].ratio >= 10.0)) study.spectral = false;
  }
  study.pass = !study.asserted || (study.decreasing && study.spectral);
  return study;
}

struct ConsistencyRow {
  double c = 0.0;
  double difference = 0.0;  ///< ||u_qrns(T; c) - u_classical(T)||
};

struct ConsistencyStudy {
  std::vector<ConsistencyRow> rows;
  double classical_l2 = 0.0;
  double initial_max_speed = 0.0;
  double slope = 0.0;  ///< least-squares slope of log D against log c (rows with D > 0)
  bool slope_pass = false;
};

/// Least-squares slope of log y against log x.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double nn = static_cast<double>(n);
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

/// Distance between quasi-relativistic and classical trajectories at t_end
/// for each c, at fixed step dt = dt_max; fits the decay rate in c.
inline ConsistencyStudy low_speed_consistency(const SimConfig& base, std::vector<double> c_list,
                                              std::size_t jobs = 1) {
  std::sort(c_list.begin(), c_list.end());
  if (std::adjacent_find(c_list.begin(), c_list.end()) != c_list.end())
    throw InvalidArgument("low_speed_consistency: duplicate c values");
  if (c_list.size() < 3) throw InvalidArgument("low_speed_consistency: need at least 3 values of c");
  if (!(c_list.front() > 0.0)) throw InvalidArgument("low_speed_consistency: c must be positive");
  if (c_list.back() / c_list.front() < 100.0 * (1.0 - 1e-12))
    throw InvalidArgument("low_speed_consistency: c values must span at least two decades");

  ConsistencyStudy study;
  SimConfig cfg = base;
  cfg.step_control = StepControl::fixed;
  cfg.record_every = std::numeric_limits<std::size_t>::max();
  {
    fft::HalfBuffer half(fft::half_size(cfg.lattice.padded_n()));
    const SpectralField u0 = realize_initial(cfg.initial, cfg.lattice);
    study.initial_max_speed =
        detail::padded_advecting_velocity(u0, 1.0, ConvectionMode::classical, half).max_speed;
  }
  if (!(c_list.front() > study.initial_max_speed))
    throw InvalidArgument("low_speed_consistency: every c must exceed the initial max speed");

  const auto run = [&](std::size_t i) {
    SimConfig run_cfg = cfg;
    if (i == 0) {
      run_cfg.mode = ConvectionMode::classical;
    } else {
      run_cfg.mode = ConvectionMode::quasi_relativistic;
      run_cfg.params.c = c_list[i - 1];
    }
    return simulate(run_cfg).final_state.u;
  };
  std::vector<SpectralField> finals = run_parallel(c_list.size() + 1, jobs, run);
  study.classical_l2 = std::sqrt(compute_squared_norms(finals[0]).l2);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < c_list.size(); ++i) {
    ConsistencyRow row{c_list[i], std::sqrt(compute_squared_norms(finals[i + 1] - finals[0]).l2)};
    study.rows.push_back(row);
    if (row.difference > 0.0) {
      xs.push_back(row.c);
      ys.push_back(row.difference);
    }
  }
  if (xs.size() >= 2) {
    study.slope = log_log_slope(xs, ys);
    study.slope_pass = study.slope >= -2.3 && study.slope <= -1.7;
  }
  return study;
}

}  // namespace qrns
