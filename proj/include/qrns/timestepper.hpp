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

// Time integration: SSP-RK3 on the integrating-factor form. Diffusion is
// applied exactly per mode through e^{-alpha |k|^2 h}; convection and forcing
// are explicit. The step is chosen by a CFL rule on the advecting velocity.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qrns/error.hpp"
#include "qrns/field.hpp"
#include "qrns/initial.hpp"
#include "qrns/qrns_ops.hpp"
#include "qrns/records.hpp"
#include "qrns/spectral.hpp"

namespace qrns {

enum class StepControl {
  cfl,    ///< dt = min(dt_max, cfl_safety * dx / max|w|)
  fixed,  ///< dt = dt_max (used by studies comparing runs at equal steps)
};

struct SimConfig {
  Lattice lattice = make_lattice(32);
  ModelParams params;
  ConvectionMode mode = ConvectionMode::quasi_relativistic;
  double t_end = 1.0;
  double cfl_safety = 0.5;
  double dt_max = 0.01;
  std::size_t record_every = 1;
  std::uint64_t seed = 0;
  InitialSpec initial = TaylorGreen{1.0};
  ForcingSpec forcing = ZeroForcing{};
  StepControl step_control = StepControl::cfl;

  void validate() const {
    params.validate();
    if (!(std::isfinite(t_end) && t_end >= 0.0)) throw InvalidArgument("t_end must be finite and >= 0");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw InvalidArgument("cfl_safety must lie in (0, 1]");
    if (!(std::isfinite(dt_max) && dt_max > 0.0)) throw InvalidArgument("dt_max must be positive");
    if (record_every == 0) throw InvalidArgument("record_every must be >= 1");
  }
};

struct SimState {
  double t = 0.0;
  SpectralField u;
  std::size_t step_index = 0;
  double dt_last = 0.0;
};

/// Convection evaluated at one state.
struct StageEvaluation {
  SpectralField convection;  ///< projected, dealiased (w.grad)u
  double max_speed = 0.0;
  double b_uuu = 0.0;        ///< <(w.grad)u, u> = B[u,u,u]
};

inline StageEvaluation evaluate_stage(const SpectralField& u, const SimConfig& config) {
  AdvectionResult adv = advection(u, u, config.params.c, config.mode);
  StageEvaluation e;
  e.max_speed = adv.max_speed;
  e.convection = leray_project(std::move(adv.term));
  e.b_uuu = inner_product(e.convection, u);
  return e;
}

inline double cfl_dt_from_speed(double max_speed, const SimConfig& config) {
  if (config.step_control == StepControl::fixed || max_speed == 0.0) return config.dt_max;
  return std::min(config.dt_max, config.cfl_safety * config.lattice.spacing() / max_speed);
}

inline double cfl_dt(const SpectralField& u, const SimConfig& config) {
  fft::HalfBuffer half(fft::half_size(u.lattice.padded_n()));
  const auto pv = detail::padded_advecting_velocity(u, config.params.c, config.mode, half);
  return cfl_dt_from_speed(pv.max_speed, config);
}

namespace detail {

/// exp(-alpha |k|^2 h) on retained modes, 0 elsewhere.
inline std::vector<double> diffusion_factors(const Lattice& lat, double alpha, double h) {
  std::vector<double> e(lat.size(), 0.0);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Wavevector k = lat.wavevector(i);
    if (lat.retained(k)) e[i] = std::exp(-alpha * norm_sq(k) * h);
  }
  return e;
}

inline double max_abs_coefficient(const SpectralField& u) {
  double m = 0.0;
  for (const auto& comp : u.components)
    for (const Complex& z : comp) m = std::max(m, std::abs(z));
  return m;
}

inline bool all_finite(const SpectralField& u) {
  for (const auto& comp : u.components)
    for (const Complex& z : comp)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace detail

/// Advances one SSP-RK3 integrating-factor step of size dt, given the
/// convection already evaluated at state.u. The mean mode of the convection
/// is discarded, so the mean flow obeys d/dt mean(u) = mean(f).
inline SimState advance(const SimState& state, const StageEvaluation& eval0, double dt, const SimConfig& config,
                        Forcing& forcing) {
  const Lattice& lat = state.u.lattice;
  const double alpha = config.params.alpha;
  const std::vector<double> e_full = detail::diffusion_factors(lat, alpha, dt);
  const std::vector<double> e_half = detail::diffusion_factors(lat, alpha, 0.5 * dt);
  const double t0 = state.t;

  const auto rhs = [&](const SpectralField& conv, double t) {
    SpectralField r = forcing.at(t);
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 1; i < lat.size(); ++i) r[c][i] -= conv[c][i];
    }
    return r;
  };
  const auto stage_eval = [&](const SpectralField& u, const char* name, double t) {
    try {
      return evaluate_stage(u, config);
    } catch (const OverflowError& e) {
      throw BlowUpError(t, state.step_index, eval0.max_speed,
                        std::string("blow-up in RK stage ") + name + " (" + e.stage() + ") at t=" +
                            std::to_string(t) + ", step " + std::to_string(state.step_index));
    }
  };

  const SpectralField& u0 = state.u;
  SpectralField u1 = SpectralField::zeros(lat), u2 = SpectralField::zeros(lat), u3 = SpectralField::zeros(lat);
  {
    const SpectralField l0 = rhs(eval0.convection, t0);
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < lat.size(); ++i) u1[c][i] = e_full[i] * (u0[c][i] + dt * l0[c][i]);
  }
  {
    const StageEvaluation ev1 = stage_eval(u1, "2", t0 + dt);
    const SpectralField l1 = rhs(ev1.convection, t0 + dt);
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < lat.size(); ++i) {
        if (e_half[i] == 0.0) continue;
        u2[c][i] = 0.75 * e_half[i] * u0[c][i] + 0.25 / e_half[i] * (u1[c][i] + dt * l1[c][i]);
      }
  }
  {
    const StageEvaluation ev2 = stage_eval(u2, "3", t0 + 0.5 * dt);
    const SpectralField l2 = rhs(ev2.convection, t0 + 0.5 * dt);
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < lat.size(); ++i)
        u3[c][i] = (1.0 / 3.0) * e_full[i] * u0[c][i] + (2.0 / 3.0) * e_half[i] * (u2[c][i] + dt * l2[c][i]);
  }
  SimState next;
  next.u = leray_project(std::move(u3));
  next.t = t0 + dt;
  next.step_index = state.step_index + 1;
  next.dt_last = dt;
  if (!detail::all_finite(next.u))
    throw BlowUpError(next.t, next.step_index, eval0.max_speed,
                      "blow-up: non-finite field at t=" + std::to_string(next.t) + ", step " +
                          std::to_string(next.step_index) + ", last max|w|=" + std::to_string(eval0.max_speed));
  return next;
}

/// Step size for the next step, clipped so the run lands exactly on t_end.
inline double next_dt(double t, double max_speed, const SimConfig& config) {
  double dt = cfl_dt_from_speed(max_speed, config);
  const double remaining = config.t_end - t;
  if (dt * (1.0 + 1e-9) >= remaining) dt = remaining;
  return dt;
}

/// One step from state (evaluates the convection at state.u first).
inline SimState step(const SimState& state, const SimConfig& config, Forcing& forcing) {
  const StageEvaluation eval = evaluate_stage(state.u, config);
  const double dt = next_dt(state.t, eval.max_speed, config);
  if (!(dt > 0.0)) throw InvalidArgument("step: state is already at t_end");
  SimState next = advance(state, eval, dt, config, forcing);
  if (dt == config.t_end - state.t) next.t = config.t_end;
  return next;
}

inline SimState step(const SimState& state, const SimConfig& config) {
  Forcing forcing(config.forcing, config.lattice);
  return step(state, config, forcing);
}

inline EnergyRecord make_record(const SimState& state, const StageEvaluation& eval, const SpectralField& f) {
  const SquaredNorms un = compute_squared_norms(state.u);
  const SquaredNorms fn = compute_squared_norms(f);
  EnergyRecord r;
  r.t = state.t;
  r.dt = state.dt_last;
  r.l2_sq = un.l2;
  r.h1_semi_sq = un.h1_semi;
  r.h2_sq = un.h2;
  r.b_uuu = eval.b_uuu;
  r.f_l2_sq = fn.l2;
  r.f_vdual_sq = fn.v_dual;
  r.work = inner_product(f, state.u);
  r.max_speed = eval.max_speed;
  return r;
}

struct SimOptions {
  /// A copy of the state is kept at the first step boundary with t >= each time.
  std::vector<double> checkpoint_times;
  double budget_seconds = std::numeric_limits<double>::infinity();
};

struct SimResult {
  SimState final_state;
  std::vector<EnergyRecord> records;
  std::vector<SimState> snapshots;
  bool complete = true;  ///< false when the wall-clock budget ran out
};

/// Runs from an explicit state until t_end.
inline SimResult simulate_from(SimState state, const SimConfig& config, const SimOptions& options = {}) {
  config.validate();
  require_same_lattice(state.u.lattice, config.lattice, "simulate");
  Forcing forcing(config.forcing, config.lattice);
  const auto start = std::chrono::steady_clock::now();
  SimResult result;
  std::size_t next_checkpoint = 0;
  std::size_t since_record = 0;

  const auto evaluate = [&](const SimState& s) {
    try {
      return evaluate_stage(s.u, config);
    } catch (const OverflowError& e) {
      throw BlowUpError(s.t, s.step_index, std::numeric_limits<double>::infinity(),
                        "blow-up (" + e.stage() + ") at t=" + std::to_string(s.t) + ", step " +
                            std::to_string(s.step_index));
    }
  };

  StageEvaluation eval = evaluate(state);
  for (;;) {
    const bool done = state.t >= config.t_end;
    if (since_record == 0 || done) {
      result.records.push_back(make_record(state, eval, forcing.at(state.t)));
      if (!result.records.back().all_finite())
        throw BlowUpError(state.t, state.step_index, eval.max_speed, "non-finite energy record");
    }
    while (next_checkpoint < options.checkpoint_times.size() &&
           state.t >= options.checkpoint_times[next_checkpoint]) {
      result.snapshots.push_back(state);
      ++next_checkpoint;
    }
    if (done) break;
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    if (elapsed.count() > options.budget_seconds) {
      result.complete = false;
      break;
    }
    const double dt = next_dt(state.t, eval.max_speed, config);
    const bool lands = dt == config.t_end - state.t;
    state = advance(state, eval, dt, config, forcing);
    if (lands) state.t = config.t_end;
    eval = evaluate(state);
    since_record = (since_record + 1) % config.record_every;
  }
  result.final_state = std::move(state);
  return result;
}

inline SimState initial_state(const SimConfig& config) {
  SimState s;
  s.u = realize_initial(config.initial, config.lattice);
  return s;
}

inline SimResult simulate(const SimConfig& config, const SimOptions& options = {}) {
  config.validate();
  return simulate_from(initial_state(config), config, options);
}

}  // namespace qrns
