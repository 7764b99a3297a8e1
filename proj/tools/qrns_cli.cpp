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

// qrns: command-line driver for simulations, audits and studies.
//
// Exit status: 0 success with every audit passing, 1 usage or input error,
// 2 an audit failed or the run did not finish (artifacts are still written).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrns/qrns.hpp"

namespace fs = std::filesystem;
using namespace qrns;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kAuditFail = 2;

struct Options {
  std::string config;
  std::string out;
  std::string records;
  std::size_t jobs = 1;
  std::vector<int> n_list{16, 32, 64};
  std::vector<double> c_list;
  std::size_t samples = 1000000;
  std::uint64_t seed = 0;
  double budget_seconds = std::numeric_limits<double>::infinity();
  double alpha = 0.0;
  double c = 0.0;
  std::string mode = "quasi_relativistic";
  double delta = 1e-6;
  std::vector<double> checkpoint_times;
};

void write_artifact(const Options& o, const std::string& name, const std::string& text) {
  if (o.out.empty()) return;
  fs::create_directories(o.out);
  write_file_atomic(fs::path(o.out) / name, text);
}

bool all_pass(const std::vector<AuditRow>& rows) {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

void print_rows(const std::vector<AuditRow>& rows, std::ostream& os) {
  for (const auto& r : rows)
    os << (r.pass ? "PASS " : "FAIL ") << r.name << "  observed=" << format_double(r.observed)
       << " bound=" << format_double(r.bound) << " margin=" << format_double(r.margin) << "\n";
}

std::vector<AuditRow> audit_records(const std::vector<EnergyRecord>& records, double alpha, double c,
                                    ConvectionMode mode, std::string* margins_csv) {
  std::vector<AuditRow> rows;
  if (records.empty()) throw InvalidArgument("no records to audit");
  const AuditConstants k = make_audit_constants(alpha, c, records);
  if (records.size() >= 2) {
    const EnergyAudit e = audit_energy_inequality(records, k);
    rows.push_back({"energy_inequality", e.min_margin, -e.tolerance, e.min_margin + e.tolerance, e.pass});
    if (margins_csv) {
      *margins_csv = "t_start,t_end,margin\n";
      for (std::size_t i = 0; i < e.margins.size(); ++i)
        *margins_csv += format_double(records[i].t) + ',' + format_double(records[i + 1].t) + ',' +
                        format_double(e.margins[i]) + '\n';
    }
  }
  const BoundAudit g = audit_gronwall_sup(records, k);
  rows.push_back({"gronwall_sup", g.observed, g.bound, g.margin, g.pass});
  const BoundAudit d = audit_dissipation_integral(records, k);
  rows.push_back({"dissipation_integral", d.observed, d.bound, d.margin, d.pass});
  if (mode == ConvectionMode::quasi_relativistic) {
    const PointwiseAudit p = audit_pointwise(records, c);
    rows.push_back({"speed_bound", p.max_speed, c, c - p.max_speed, p.speed_pass});
    rows.push_back({"trilinear_bound", p.worst_trilinear_ratio, 1.0, 1.0 - p.worst_trilinear_ratio, p.trilinear_pass});
  }
  const RegularityReport reg = regularity_report(records);
  rows.push_back({"h2_integral_finite", reg.h2_integral, std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), reg.finite});
  return rows;
}

std::string constants_text(const std::vector<EnergyRecord>& records, double alpha, double c) {
  const AuditConstants k = make_audit_constants(alpha, c, records);
  std::ostringstream os;
  os << "c_b=" << format_double(k.c_b) << " eps=" << format_double(k.eps) << " K=" << format_double(k.k_energy)
     << " T=" << format_double(k.t_end) << " C1=" << format_double(k.c1_T) << " C2=" << format_double(k.c2_T)
     << "\n";
  return os.str();
}

// Runs one configuration, writes its artifacts under prefix and returns the audit status.
int run_and_audit(const SimConfig& cfg, const Options& o, const std::string& prefix) {
  SimOptions so;
  so.checkpoint_times = o.checkpoint_times;
  so.budget_seconds = o.budget_seconds;
  const SimResult r = simulate(cfg, so);
  write_artifact(o, prefix + "records.csv", format_records(r.records));
  const SimState& fin = r.final_state;
  write_artifact(o, prefix + "final.qrns",
                 encode_snapshot(fin.u, {fin.t, cfg.mode, cfg.params.c, cfg.params.alpha}));
  for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "checkpoint_%03zu.qrns", i);
    const SimState& s = r.snapshots[i];
    write_artifact(o, prefix + name, encode_snapshot(s.u, {s.t, cfg.mode, cfg.params.c, cfg.params.alpha}));
  }
  std::string margins;
  const auto rows = audit_records(r.records, cfg.params.alpha, cfg.params.c, cfg.mode, &margins);
  write_artifact(o, prefix + "audit.csv", format_audit(rows));
  if (!margins.empty()) write_artifact(o, prefix + "energy_margins.csv", margins);

  std::ostringstream summary;
  summary << to_string(cfg.mode) << ": n=" << cfg.lattice.n() << " steps=" << fin.step_index
          << " t=" << format_double(fin.t) << (r.complete ? "" : " INCOMPLETE (budget exhausted)") << "\n"
          << constants_text(r.records, cfg.params.alpha, cfg.params.c);
  print_rows(rows, summary);
  write_artifact(o, prefix + "summary.txt", summary.str());
  std::cout << summary.str();
  return all_pass(rows) && r.complete ? kOk : kAuditFail;
}

int cmd_simulate(const Options& o) { return run_and_audit(load_config(o.config), o, ""); }

int cmd_compare(const Options& o) {
  SimConfig cfg = load_config(o.config);
  cfg.step_control = StepControl::fixed;
  SimConfig classical = cfg, relativistic = cfg;
  classical.mode = ConvectionMode::classical;
  relativistic.mode = ConvectionMode::quasi_relativistic;
  const int a = run_and_audit(classical, o, "classical_");
  const int b = run_and_audit(relativistic, o, "quasi_relativistic_");
  SimOptions so;
  so.budget_seconds = o.budget_seconds;
  classical.record_every = relativistic.record_every = std::numeric_limits<std::size_t>::max();
  const SpectralField ua = simulate(classical, so).final_state.u;
  const SpectralField ub = simulate(relativistic, so).final_state.u;
  const double diff = std::sqrt(compute_squared_norms(ub - ua).l2);
  const double ref = std::sqrt(compute_squared_norms(ua).l2);
  const std::string text = "quantity,value\ndifference_l2," + format_double(diff) + "\nclassical_l2," +
                           format_double(ref) + "\nrelative_difference," + format_double(ref > 0 ? diff / ref : 0.0) +
                           "\n";
  write_artifact(o, "compare.csv", text);
  std::cout << "final ||u_qrns - u_classical|| = " << format_double(diff) << " (relative "
            << format_double(ref > 0 ? diff / ref : 0.0) << ")\n";
  return a == kOk && b == kOk ? kOk : kAuditFail;
}

int cmd_verify(const Options& o) {
  if (!o.records.empty()) {
    if (!(o.alpha > 0.0) || !(o.c > 0.0)) throw InvalidArgument("verify --records needs --alpha and --c > 0");
    ConvectionMode mode;
    if (o.mode == "classical") mode = ConvectionMode::classical;
    else if (o.mode == "quasi_relativistic") mode = ConvectionMode::quasi_relativistic;
    else throw InvalidArgument("--mode must be one of {classical, quasi_relativistic}");
    const auto records = read_records(o.records);
    std::string margins;
    const auto rows = audit_records(records, o.alpha, o.c, mode, &margins);
    write_artifact(o, "audit.csv", format_audit(rows));
    if (!margins.empty()) write_artifact(o, "energy_margins.csv", margins);
    std::cout << constants_text(records, o.alpha, o.c);
    print_rows(rows, std::cout);
    return all_pass(rows) ? kOk : kAuditFail;
  }
  if (o.config.empty()) throw InvalidArgument("verify needs --records or --config");
  return run_and_audit(load_config(o.config), o, "");
}

int cmd_converge(const Options& o) {
  const SimConfig cfg = load_config(o.config);
  const ConvergenceStudy s = convergence_study(cfg, o.n_list, o.jobs);
  std::string csv = "n,error,ratio\n";
  for (const auto& r : s.rows) csv += std::to_string(r.n) + ',' + format_double(r.error) + ',' + format_double(r.ratio) + '\n';
  write_artifact(o, "convergence.csv", csv);
  std::cout << "reference n=" << s.n_ref << " ||u_ref||=" << format_double(s.reference_l2) << "\n" << csv;
  if (!s.asserted) {
    std::cout << "single resolution: no assertion\n";
    return kOk;
  }
  std::cout << (s.pass ? "PASS" : "FAIL") << " convergence (decreasing=" << s.decreasing
            << ", successive ratios >= 10: " << s.spectral << ")\n";
  return s.pass ? kOk : kAuditFail;
}

int cmd_consistency(const Options& o) {
  const SimConfig cfg = load_config(o.config);
  const std::vector<double> c_list = o.c_list.empty() ? std::vector<double>{10, 100, 1000} : o.c_list;
  const ConsistencyStudy s = low_speed_consistency(cfg, c_list, o.jobs);
  std::string csv = "c,difference,relative\n";
  for (const auto& r : s.rows)
    csv += format_double(r.c) + ',' + format_double(r.difference) + ',' +
           format_double(s.classical_l2 > 0 ? r.difference / s.classical_l2 : 0.0) + '\n';
  write_artifact(o, "consistency.csv", csv);
  std::cout << "initial max|u|=" << format_double(s.initial_max_speed) << "\n"
            << csv << (s.slope_pass ? "PASS" : "FAIL") << " slope=" << format_double(s.slope)
            << " (expected in [-2.3, -1.7])\n";
  return s.slope_pass ? kOk : kAuditFail;
}

int cmd_lipschitz(const Options& o) {
  const std::vector<double> c_list = o.c_list.empty() ? std::vector<double>{1e-3, 1.0, 1e3} : o.c_list;
  std::string csv = "c,samples,max_ratio,bound,max_c_ratio,violations,pass\n";
  bool ok = true;
  for (std::size_t ci = 0; ci < c_list.size(); ++ci) {
    const double c = c_list[ci];
    if (!(c > 0.0)) throw InvalidArgument("--c-list values must be positive");
    std::seed_seq seq{static_cast<std::uint32_t>(o.seed), static_cast<std::uint32_t>(o.seed >> 32),
                      static_cast<std::uint32_t>(ci)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> decade(-3.0, 3.0);
    const double bound = kVelocityMapLipschitz / c;
    double max_ratio = 0.0;
    std::size_t violations = 0;
    for (std::size_t i = 0; i < o.samples; ++i) {
      const double s1 = std::pow(10.0, decade(rng)) * c, s2 = std::pow(10.0, decade(rng)) * c;
      const Vec3 y1{s1 * g(rng), s1 * g(rng), s1 * g(rng)};
      const Vec3 y2{y1[0] + s2 * g(rng), y1[1] + s2 * g(rng), y1[2] + s2 * g(rng)};
      const LipschitzGap gap = lipschitz_gap(y1, y2, c);
      if (gap.lhs > gap.bound) ++violations;
      max_ratio = std::max(max_ratio, gap.ratio);
    }
    const bool pass = violations == 0 && c * max_ratio <= 1.0 + 1e-12;
    ok = ok && pass;
    csv += format_double(c) + ',' + std::to_string(o.samples) + ',' + format_double(max_ratio) + ',' +
           format_double(bound) + ',' + format_double(c * max_ratio) + ',' + std::to_string(violations) + ',' +
           (pass ? "PASS" : "FAIL") + '\n';
  }
  write_artifact(o, "lipschitz.csv", csv);
  std::cout << csv;
  return ok ? kOk : kAuditFail;
}

int cmd_uniqueness(const Options& o) {
  const SimConfig cfg = load_config(o.config);
  SimOptions so;
  so.budget_seconds = o.budget_seconds;
  const UniquenessReport rep = uniqueness_probe(cfg, o.delta, so);
  std::string csv = "t,difference_sq,log_margin\n";
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    csv += format_double(rep.times[i]) + ',' + format_double(rep.difference_sq[i]) + ',' +
           format_double(rep.log_margin[i]) + '\n';
  write_artifact(o, "uniqueness.csv", csv);
  std::cout << "K_unique=" << format_double(rep.k_unique) << " C_young=" << format_double(rep.young_c)
            << " sup||grad u1||^2=" << format_double(rep.sup_grad_sq) << "\n"
            << "sup||U||=" << format_double(rep.sup_difference) << " max growth=" << format_double(rep.max_growth)
            << "\n"
            << (rep.pass ? "PASS" : "FAIL") << " uniqueness envelope\n";
  return rep.pass ? kOk : kAuditFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-relativistic Navier-Stokes solver and audit harness on the periodic box"};
  app.require_subcommand(1, 1);
  Options o;

  const auto add_config = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--config", o.config, "run configuration file (key=value)");
    opt->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  const auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "output directory (created if missing)");
  };
  const auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--budget-seconds", o.budget_seconds, "wall-clock budget; the run stops early and is flagged incomplete")
        ->check(CLI::PositiveNumber);
  };

  auto* simulate_cmd = app.add_subcommand("simulate", "run one configuration and audit its energy records");
  add_config(simulate_cmd, true);
  add_out(simulate_cmd);
  add_budget(simulate_cmd);
  simulate_cmd->add_option("--checkpoint-times", o.checkpoint_times, "write a snapshot at the first step past each time")
      ->delimiter(',');

  auto* compare_cmd = app.add_subcommand("compare", "run classical and quasi-relativistic convection at a fixed step dt_max");
  add_config(compare_cmd, true);
  add_out(compare_cmd);
  add_budget(compare_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "audit an energy-record CSV, or simulate a configuration and audit it");
  add_config(verify_cmd, false);
  verify_cmd->add_option("--records", o.records, "energy-record CSV")->check(CLI::ExistingFile);
  verify_cmd->add_option("--alpha", o.alpha, "viscosity used to produce the records");
  verify_cmd->add_option("--c", o.c, "speed limit used to produce the records");
  verify_cmd->add_option("--mode", o.mode, "classical or quasi_relativistic (default)");
  add_out(verify_cmd);
  add_budget(verify_cmd);

  auto* converge_cmd = app.add_subcommand("converge", "resolution study against a reference at twice the finest n");
  add_config(converge_cmd, true);
  converge_cmd->add_option("--n-list", o.n_list, "resolutions, comma separated")->delimiter(',');
  converge_cmd->add_option("--jobs", o.jobs, "concurrent runs")->check(CLI::PositiveNumber);
  add_out(converge_cmd);

  auto* consistency_cmd = app.add_subcommand("consistency", "distance to the classical run as c grows");
  add_config(consistency_cmd, true);
  consistency_cmd->add_option("--c-list", o.c_list, "speed limits, comma separated (default 10,100,1000)")
      ->delimiter(',');
  consistency_cmd->add_option("--jobs", o.jobs, "concurrent runs")->check(CLI::PositiveNumber);
  add_out(consistency_cmd);

  auto* lipschitz_cmd = app.add_subcommand("lipschitz-check", "sample the Lipschitz bound of the bounded direction map");
  lipschitz_cmd->add_option("--samples", o.samples, "pairs per value of c");
  lipschitz_cmd->add_option("--c-list,--c", o.c_list, "speed limits, comma separated (default 0.001,1,1000)")
      ->delimiter(',');
  lipschitz_cmd->add_option("--seed", o.seed, "random seed");
  add_out(lipschitz_cmd);

  auto* uniqueness_cmd = app.add_subcommand("uniqueness", "perturbation probe of the stability envelope");
  add_config(uniqueness_cmd, true);
  uniqueness_cmd->add_option("--delta", o.delta, "perturbation size")->check(CLI::NonNegativeNumber);
  add_out(uniqueness_cmd);
  add_budget(uniqueness_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(o);
    if (*compare_cmd) return cmd_compare(o);
    if (*verify_cmd) return cmd_verify(o);
    if (*converge_cmd) return cmd_converge(o);
    if (*consistency_cmd) return cmd_consistency(o);
    if (*lipschitz_cmd) return cmd_lipschitz(o);
    if (*uniqueness_cmd) return cmd_uniqueness(o);
  } catch (const BlowUpError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAuditFail;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
