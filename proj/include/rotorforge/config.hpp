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

#ifndef ROTORFORGE_CONFIG_HPP
#define ROTORFORGE_CONFIG_HPP

// Line-oriented run configuration:
//
//   [chain]
//   n = 3
//   k = 3
//   gamma = 1
//   potentials = cosine, cosine
//   [integrator]
//   scheme = yoshida4
//   t_final = 400
//   [experiment]
//   kind = scaling
//   L_list = 10, 20, 40, 80
//   [output]
//   dir = out
//
// Unknown keys and duplicate keys are hard errors with line numbers. Custom
// potentials are written in braces: potentials = cosine, {1: 1/2, 3: -1/4}.

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rotorforge/experiments.hpp"

namespace rotorforge {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputConfig {
  std::string dir = "out";
  bool csv = true;
  bool json = true;
};

struct RunConfig {
  ChainSpec chain = ChainSpec::uniform_cosine(3, 3, 1.0);
  std::vector<std::string> potential_specs = {"cosine", "cosine"};
  IntegratorConfig integrator;
  std::string experiment_kind = "simulate";
  ExperimentConfig experiment;
  OutputConfig output;
  int jobs = 1;

  // Canonical text: every field, fixed order, so the hash is stable across
  // key order and configs that differ only in formatting.
  std::string canonical() const;
  std::string config_hash() const;
};

namespace config_detail {

inline std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

// Splits on commas that are not inside braces; strips braces from items.
inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '{') {
      ++depth;
      continue;
    }
    if (c == '}') {
      --depth;
      continue;
    }
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

inline double to_real(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (...) {
    throw config_error("line " + std::to_string(line) + ": key '" + key +
                       "' expects a real number, got '" + v + "'");
  }
}
inline long to_int(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t used = 0;
    long d = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (...) {
    throw config_error("line " + std::to_string(line) + ": key '" + key +
                       "' expects an integer, got '" + v + "'");
  }
}
inline bool to_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw config_error("line " + std::to_string(line) + ": key '" + key +
                     "' expects a boolean, got '" + v + "'");
}

}  // namespace config_detail

inline RunConfig parse_config(std::string_view text) {
  using namespace config_detail;
  RunConfig rc;
  rc.potential_specs.clear();

  std::string section;
  std::set<std::string> seen;
  bool n_set = false, k_set = false, gamma_set = false, potentials_set = false;

  std::istringstream is{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw config_error("line " + std::to_string(line) + ": malformed section header");
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      static const std::set<std::string> known = {"chain", "integrator", "experiment", "output"};
      if (!known.count(section))
        throw config_error("line " + std::to_string(line) + ": unknown section [" + section + "]");
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(line) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string val = trim(std::string_view(s).substr(eq + 1));
    const std::string qual = section + "." + key;
    if (!seen.insert(qual).second)
      throw config_error("line " + std::to_string(line) + ": duplicate key '" + qual + "'");

    if (section == "chain") {
      if (key == "n") {
        rc.chain.n = static_cast<int>(to_int(val, qual, line));
        n_set = true;
      } else if (key == "k") {
        rc.chain.k = static_cast<int>(to_int(val, qual, line));
        k_set = true;
      } else if (key == "gamma") {
        rc.chain.gamma = to_real(val, qual, line);
        gamma_set = true;
      } else if (key == "potentials") {
        rc.potential_specs = split_list(val);
        potentials_set = true;
      } else if (key == "degenerate_allowed") {
        rc.chain.degenerate_allowed = to_bool(val, qual, line);
      } else {
        throw config_error("line " + std::to_string(line) + ": unknown key '" + qual + "'");
      }
    } else if (section == "integrator") {
      if (key == "scheme") {
        try {
          rc.integrator.scheme = parse_scheme(val);
        } catch (const integration_error& e) {
          throw config_error("line " + std::to_string(line) + ": " + e.what());
        }
      } else if (key == "steps_per_fast_period") {
        rc.integrator.steps_per_fast_period = static_cast<int>(to_int(val, qual, line));
      } else if (key == "t_final") {
        rc.integrator.t_final = to_real(val, qual, line);
      } else if (key == "sample_stride") {
        rc.integrator.sample_stride = static_cast<int>(to_int(val, qual, line));
      } else if (key == "compensated_sums") {
        rc.integrator.compensated_sums = to_bool(val, qual, line);
      } else {
        throw config_error("line " + std::to_string(line) + ": unknown key '" + qual + "'");
      }
    } else if (section == "experiment") {
      if (key == "kind") {
        static const std::set<std::string> kinds = {
            "simulate",  "normal-form", "scaling",   "dissipation", "decompose",
            "asymptotics", "degenerate", "verify",    "bounds",      "stability"};
        if (!kinds.count(val))
          throw config_error("line " + std::to_string(line) + ": unknown experiment kind '" +
                             val + "'");
        rc.experiment_kind = val;
      } else if (key == "L_list") {
        rc.experiment.L_list.clear();
        for (auto& item : split_list(val))
          rc.experiment.L_list.push_back(to_real(item, qual, line));
      } else if (key == "alpha") {
        rc.experiment.alpha = to_real(val, qual, line);
      } else if (key == "rho") {
        rc.experiment.rho = to_real(val, qual, line);
      } else if (key == "seeds") {
        rc.experiment.seed = static_cast<std::uint64_t>(to_int(val, qual, line));
      } else if (key == "t_initial") {
        rc.experiment.transient.t_initial = to_real(val, qual, line);
      } else if (key == "hard_cap") {
        rc.experiment.transient.hard_cap = to_real(val, qual, line);
      } else if (key == "windows_after_plateau") {
        rc.experiment.windows_after_plateau = static_cast<int>(to_int(val, qual, line));
      } else if (key == "norm_budget") {
        rc.experiment.norm_budget = to_int(val, qual, line);
      } else {
        throw config_error("line " + std::to_string(line) + ": unknown key '" + qual + "'");
      }
    } else if (section == "output") {
      if (key == "dir") {
        rc.output.dir = val;
      } else if (key == "formats") {
        rc.output.csv = rc.output.json = false;
        for (auto& f : split_list(val)) {
          if (f == "csv")
            rc.output.csv = true;
          else if (f == "json")
            rc.output.json = true;
          else
            throw config_error("line " + std::to_string(line) + ": unknown format '" + f + "'");
        }
      } else {
        throw config_error("line " + std::to_string(line) + ": unknown key '" + qual + "'");
      }
    } else {
      throw config_error("line " + std::to_string(line) + ": key '" + key +
                         "' outside any [section]");
    }
  }

  if (!n_set || !k_set || !gamma_set || !potentials_set)
    throw config_error("[chain] must set n, k, gamma, and potentials");
  if (rc.chain.k > rc.chain.n)
    throw config_error("k = " + std::to_string(rc.chain.k) + " exceeds n = " +
                       std::to_string(rc.chain.n));
  if (static_cast<int>(rc.potential_specs.size()) != rc.chain.n - 1)
    throw config_error("expected n-1 = " + std::to_string(rc.chain.n - 1) +
                       " potentials, got " + std::to_string(rc.potential_specs.size()));
  rc.chain.potentials.clear();
  for (const auto& spec : rc.potential_specs) rc.chain.potentials.push_back(Potential::parse(spec));
  rc.chain.validate();
  rc.experiment.chain = rc.chain;
  rc.experiment.integ = rc.integrator;
  if (rc.experiment_kind == "scaling" || rc.experiment_kind == "dissipation" ||
      rc.experiment_kind == "degenerate") {
    try {
      rc.experiment.validate_for_fit();
    } catch (const algebra_error& e) {
      throw config_error(std::string(e.what()) + " (experiment.L_list)");
    }
  }
  return rc;
}

inline std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "[chain]\n";
  os << "n = " << chain.n << "\n";
  os << "k = " << chain.k << "\n";
  char buf[64];
  auto real = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "gamma = " << real(chain.gamma) << "\n";
  os << "potentials = ";
  for (std::size_t i = 0; i < potential_specs.size(); ++i)
    os << (i ? ", " : "") << "{" << potential_specs[i] << "}";
  os << "\n";
  os << "degenerate_allowed = " << (chain.degenerate_allowed ? "true" : "false") << "\n";
  os << "[integrator]\n";
  os << "scheme = " << scheme_name(integrator.scheme) << "\n";
  os << "steps_per_fast_period = " << integrator.steps_per_fast_period << "\n";
  os << "t_final = " << real(integrator.t_final) << "\n";
  os << "sample_stride = " << integrator.sample_stride << "\n";
  os << "compensated_sums = " << (integrator.compensated_sums ? "true" : "false") << "\n";
  os << "[experiment]\n";
  os << "kind = " << experiment_kind << "\n";
  os << "L_list = ";
  for (std::size_t i = 0; i < experiment.L_list.size(); ++i)
    os << (i ? ", " : "") << real(experiment.L_list[i]);
  os << "\n";
  os << "alpha = " << real(experiment.alpha) << "\n";
  os << "rho = " << real(experiment.rho) << "\n";
  os << "seeds = " << experiment.seed << "\n";
  os << "t_initial = " << real(experiment.transient.t_initial) << "\n";
  os << "hard_cap = " << real(experiment.transient.hard_cap) << "\n";
  os << "windows_after_plateau = " << experiment.windows_after_plateau << "\n";
  os << "norm_budget = " << experiment.norm_budget << "\n";
  os << "[output]\n";
  os << "dir = " << output.dir << "\n";
  os << "formats = " << (output.csv ? "csv" : "") << ((output.csv && output.json) ? ", " : "")
     << (output.json ? "json" : "") << "\n";
  return os.str();
}

inline std::string RunConfig::config_hash() const {
  // FNV-1a 64 over the canonical serialization
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rotorforge

#endif  // ROTORFORGE_CONFIG_HPP
