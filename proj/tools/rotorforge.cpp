// Copyright 2026 The rotorforge Authors
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

// rotorforge <subcommand> --config <file> [--out DIR] [--jobs N]
//
// Exit codes: 0 success, 1 error, 2 falsification (a physics check failed).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rotorforge/config.hpp"
#include "rotorforge/nf_io.hpp"
#include "rotorforge/report.hpp"

namespace fs = std::filesystem;
using namespace rotorforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFalsified = 2;

RunConfig load_config(const std::string& path, const std::string& out_override) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  RunConfig rc = parse_config(ss.str());
  if (const char* env = std::getenv("ROTORFORGE_SEED")) {
    rc.experiment.seed = std::strtoull(env, nullptr, 10);
  }
  if (!out_override.empty()) rc.output.dir = out_override;
  return rc;
}

int print_checks(const std::vector<Check>& checks) {
  bool all = true;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " = " << c.value
              << " (expected " << c.expected << ")\n";
    all = all && c.pass;
  }
  return all ? kExitOk : kExitFalsified;
}

struct RunWriter {
  RunConfig cfg;
  fs::path dir;
  std::string prefix;  // payload names embed the experiment id and config hash
  std::vector<std::string> payloads;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  explicit RunWriter(RunConfig c) : cfg(std::move(c)), dir(cfg.output.dir) {
    fs::create_directories(dir);
    prefix = cfg.experiment_kind + "-" + cfg.config_hash().substr(0, 8) + "-";
  }
  fs::path path(const std::string& name) { return dir / (prefix + name); }
  void add_json(const std::string& name, const json& j) {
    if (!cfg.output.json) return;
    json wrapped = j;
    wrapped["config_hash"] = cfg.config_hash();
    wrapped["version"] = kVersion;
    wrapped["seeds"] = {cfg.experiment.seed};
    std::ofstream os(path(name));
    os << wrapped.dump(2) << "\n";
    payloads.push_back(prefix + name);
  }
  void note(const std::string& name) { payloads.push_back(prefix + name); }
  void finish() {
    write_manifest(cfg, payloads,
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(),
                   dir);
  }
};

double first_L(const RunConfig& rc) {
  return rc.experiment.L_list.empty() ? 10.0 : rc.experiment.L_list.front();
}

int cmd_simulate(RunWriter& w) {
  const double L = first_L(w.cfg);
  State s0 = initial_state(w.cfg.chain, L, w.cfg.experiment.rho, w.cfg.experiment.seed);
  Trajectory tr = integrate(w.cfg.chain, s0, w.cfg.integrator);
  if (w.cfg.output.csv) {
    write_trajectory_csv(tr, w.path("trajectory.csv"));
    w.note("trajectory.csv");
  }
  json rep;
  rep["L"] = L;
  rep["steps"] = tr.size();
  rep["H0"] = tr.H0;
  rep["H_final"] = tr.energy.back();
  rep["dissipated"] = tr.dissipated.back();
  rep["energy_balance_residual"] = energy_balance_residual(tr);
  w.add_json("report.json", rep);
  std::cout << "integrated to t=" << tr.times.back() << ", residual "
            << energy_balance_residual(tr) << "\n";
  return kExitOk;
}

int cmd_normal_form(RunWriter& w) {
  NormalFormResult nf = build_normal_form(w.cfg.chain);
  IdentityReport id = verify_exact_identities(nf);
  P1Bundle p1 = compute_p1_bundle(nf);
  {
    std::ofstream os(w.path("normal_form.txt"));
    os << serialize_normal_form(nf, w.cfg.potential_specs);
    w.note("normal_form.txt");
  }
  json rep;
  rep["identities_ok"] = id.ok;
  rep["detail"] = id.detail;
  rep["generators"] = nf.generators.size();
  rep["final_terms"] = nf.final_f.term_count();
  rep["G_sq_mean"] = p1.G_sq_mean.get_str();
  rep["p1_relative_sign"] = p1.relative_sign;
  w.add_json("report.json", rep);
  std::cout << (id.ok ? "[PASS] " : "[FAIL] ") << "exact identities: " << id.detail << "\n";
  return id.ok ? kExitOk : kExitFalsified;
}

int cmd_scaling(RunWriter& w) {
  ScalingReport rep = scaling_experiment(w.cfg.experiment);
  if (w.cfg.output.csv) {
    CsvWriter levels(w.path("scaling_levels.csv"), {"L", "site", "plateau_level"});
    for (std::size_t li = 0; li < rep.runs.size(); ++li)
      for (int site = 1; site <= w.cfg.chain.n; ++site)
        levels.row({rep.runs[li].L, static_cast<double>(site), rep.levels[site][li]});
    w.note("scaling_levels.csv");
    CsvWriter fits(w.path("scaling_fits.csv"), {"site", "exponent", "prefactor", "r_squared"});
    for (auto& [site, fit] : rep.site_fits)
      fits.row({static_cast<double>(site), fit.exponent, fit.prefactor(), fit.r_squared});
    w.note("scaling_fits.csv");
  }
  json j;
  j["checks"] = to_json(rep.checks);
  for (auto& [site, fit] : rep.site_fits) j["fits"][std::to_string(site)] = to_json(fit);
  w.add_json("report.json", j);
  return print_checks(rep.checks);
}

int cmd_dissipation(RunWriter& w) {
  DissipationReport rep = dissipation_experiment(w.cfg.experiment);
  if (w.cfg.output.csv) {
    CsvWriter rates(w.path("dissipation_rates.csv"), {"L", "rate"});
    for (std::size_t i = 0; i < rep.rates.size(); ++i)
      rates.row({w.cfg.experiment.L_list[i], rep.rates[i]});
    w.note("dissipation_rates.csv");
  }
  json j;
  j["checks"] = to_json(rep.checks);
  j["fit"] = to_json(rep.fit);
  w.add_json("report.json", j);
  return print_checks(rep.checks);
}

int cmd_decompose(RunWriter& w) {
  DecompositionReport rep = dissipation_decomposition(w.cfg.experiment);
  DecoupledComparisonReport dec = decoupled_comparison(w.cfg.experiment);
  CoordinateScalingReport coord = coordinate_scalings(w.cfg.experiment);
  P1ComparisonReport p1 = p1_comparison(w.cfg.experiment);
  M1WindowReport m1 = m1_window_integrals(w.cfg.experiment);
  if (w.cfg.output.csv) {
    CsvWriter csv(w.path("decomposition.csv"),
                  {"L", "int_I1sq", "int_tilde", "int_p1sq", "int_mixed", "mismatch", "dH_raw"});
    for (auto& p : rep.points)
      csv.row({p.L, p.int_I1sq, p.int_tilde, p.int_p1sq, p.int_mixed, p.mismatch, p.dH_raw});
    w.note("decomposition.csv");
  }
  json j;
  j["decomposition_checks"] = to_json(rep.checks);
  j["decoupled_checks"] = to_json(dec.checks);
  j["coordinate_checks"] = to_json(coord.checks);
  j["p1_checks"] = to_json(p1.checks);
  j["m1_checks"] = to_json(m1.checks);
  j["G_sq_mean"] = m1.g_sq_mean.get_str();
  w.add_json("report.json", j);
  std::vector<Check> all = rep.checks;
  for (auto* more : {&dec.checks, &coord.checks, &p1.checks, &m1.checks})
    all.insert(all.end(), more->begin(), more->end());
  return print_checks(all);
}

int cmd_asymptotics(RunWriter& w) {
  AsymptoticsReport rep = asymptotic_comparison(w.cfg.experiment);
  json j;
  j["checks"] = to_json(rep.checks);
  for (auto& [site, c] : rep.measured)
    j["measured"][std::to_string(site)] = {c.real(), c.imag()};
  w.add_json("report.json", j);
  return print_checks(rep.checks);
}

int cmd_degenerate(RunWriter& w) {
  DegenerateReport rep = degenerate_experiment(w.cfg.experiment);
  if (w.cfg.output.csv) {
    CsvWriter csv(w.path("degenerate_levels.csv"),
                  {"L", "l1", "l2", "l3", "max_I1", "rate", "horizon"});
    for (std::size_t i = 0; i < w.cfg.experiment.L_list.size(); ++i)
      csv.row({w.cfg.experiment.L_list[i], rep.l1[i], rep.l2[i], rep.l3[i], rep.max_I1[i],
               rep.rates[i], rep.horizons[i]});
    w.note("degenerate_levels.csv");
  }
  json j;
  j["checks"] = to_json(rep.checks);
  j["ratio21_fit"] = to_json(rep.ratio21_fit);
  j["ratio32_fit"] = to_json(rep.ratio32_fit);
  j["rate_fit"] = to_json(rep.rate_fit);
  w.add_json("report.json", j);
  return print_checks(rep.checks);
}

// Exact algebra identity suite on the configured chain.
int cmd_verify(RunWriter& w) {
  std::vector<Check> checks;
  bool all = true;
  NormalFormResult nf = build_normal_form(w.cfg.chain);
  IdentityReport id = verify_exact_identities(nf);
  add_check(checks, all, "exact_identities", id.ok, id.ok ? 1 : 0, "all hold");

  // spot algebra properties on seeded random functions
  SplitMix rng(w.cfg.experiment.seed ^ 0x7e71f1ull);
  bool antisym = true, jacobi = true, leibniz = true;
  for (int s = 0; s < 5; ++s) {
    const int n = w.cfg.chain.n;
    FourierFunction f = random_trig(rng, n, 2, 2, true);
    FourierFunction g = random_trig(rng, n, 2, 2, true);
    FourierFunction h = random_trig(rng, n, 2, 2, false);
    antisym = antisym && (poisson_bracket(f, g) + poisson_bracket(g, f)).is_zero();
    jacobi = jacobi && (poisson_bracket(poisson_bracket(f, g), h) +
                        poisson_bracket(poisson_bracket(g, h), f) +
                        poisson_bracket(poisson_bracket(h, f), g))
                           .is_zero();
    leibniz = leibniz && (poisson_bracket(f * g, h) - f * poisson_bracket(g, h) -
                          poisson_bracket(f, h) * g)
                             .is_zero();
  }
  add_check(checks, all, "poisson_antisymmetry", antisym, antisym, "exact");
  add_check(checks, all, "jacobi_identity", jacobi, jacobi, "exact");
  add_check(checks, all, "leibniz_rule", leibniz, leibniz, "exact");
  {
    FourierFunction chi = nf.generators.back();
    const std::string text = serialize(chi);
    const bool rt = serialize(parse_fourier(text)) == text;
    add_check(checks, all, "serialization_round_trip", rt, rt, "bit-exact");
  }
  json j;
  j["checks"] = to_json(checks);
  w.add_json("report.json", j);
  return print_checks(checks);
}

int cmd_bounds(RunWriter& w) {
  BoundsReport rep = appendix_bound_checks(w.cfg.experiment);
  json j;
  j["checks"] = to_json(rep.checks);
  j["violations"] = rep.violation_details;
  w.add_json("report.json", j);
  for (const auto& v : rep.violation_details) std::cout << "[VIOLATION] " << v << "\n";
  return print_checks(rep.checks);
}

int cmd_stability(RunWriter& w) {
  StabilityReport rep = stability_monitor(w.cfg.experiment);
  if (w.cfg.output.csv) {
    CsvWriter csv(w.path("stability.csv"), {"L", "rho_star_x", "rho_star_tilde", "horizon"});
    for (std::size_t i = 0; i < w.cfg.experiment.L_list.size(); ++i)
      csv.row({w.cfg.experiment.L_list[i], rep.rho_star_x[i], rep.rho_star_tilde[i],
               rep.horizons[i]});
    w.note("stability.csv");
  }
  json j;
  j["checks"] = to_json(rep.checks);
  w.add_json("report.json", j);
  return print_checks(rep.checks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotorforge: dissipative rotator chains, exact normal forms, scaling laws"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int jobs = 1;

  const std::vector<std::pair<std::string, int (*)(RunWriter&)>> commands = {
      {"simulate", cmd_simulate},   {"normal-form", cmd_normal_form},
      {"scaling", cmd_scaling},     {"dissipation", cmd_dissipation},
      {"decompose", cmd_decompose}, {"asymptotics", cmd_asymptotics},
      {"degenerate", cmd_degenerate}, {"verify", cmd_verify},
      {"bounds", cmd_bounds},       {"stability", cmd_stability}};

  for (auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--jobs", jobs, "worker pool size for sweeps");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto& [name, fn] : commands) {
      if (app.got_subcommand(name)) {
        RunConfig rc = load_config(config_path, out_dir);
        rc.jobs = jobs;
        rc.experiment.jobs = jobs;
        if (rc.experiment_kind != name && name != "simulate" && name != "verify" &&
            name != "normal-form")
          rc.experiment_kind = name;  // subcommand wins over config kind
        RunWriter w(std::move(rc));
        const int code = fn(w);
        w.finish();
        return code;
      }
    }
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
