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

#ifndef ROTORFORGE_REPORT_HPP
#define ROTORFORGE_REPORT_HPP

// Deterministic output writing: per-experiment CSV tables (gnuplot-ready,
// full double precision), JSON reports, and a run manifest with the config
// echo and payload hashes. Identical configs reproduce byte-identical CSV
// and report payloads.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotorforge/config.hpp"
#include "rotorforge/version.hpp"

namespace rotorforge {

using nlohmann::json;

inline std::string fmt_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json to_json(const Check& c) {
  return json{{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"expected", c.expected}};
}
inline json to_json(const std::vector<Check>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(to_json(c));
  return a;
}
inline json to_json(const ScalingFit& f) {
  json pts = json::array();
  for (auto& [L, v] : f.points) pts.push_back({L, v});
  return json{{"exponent", f.exponent},
              {"prefactor", f.prefactor()},
              {"r_squared", f.r_squared},
              {"points", pts}};
}

// CSV writer with a fixed header; all values full precision.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : os_(path) {
    if (!os_) throw std::runtime_error("cannot open " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
    os_ << "\n";
  }
  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << fmt_full(values[i]);
    os_ << "\n";
  }

 private:
  std::ofstream os_;
};

// Trajectory CSV: t, I1..In, phi1..phin, H, dissipated. Angles reduced to
// [0, 2pi).
inline void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::vector<std::string> header{"t"};
  for (int i = 1; i <= traj.n; ++i) header.push_back("I" + std::to_string(i));
  for (int i = 1; i <= traj.n; ++i) header.push_back("phi" + std::to_string(i));
  header.push_back("H");
  header.push_back("dissipated");
  CsvWriter csv(path, header);
  std::vector<double> row;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    row.clear();
    row.push_back(traj.times[s]);
    const State red = traj.states[s].reduced();
    for (double v : red.I) row.push_back(v);
    for (double v : red.phi) row.push_back(v);
    row.push_back(traj.energy[s]);
    row.push_back(traj.dissipated[s]);
    csv.row(row);
  }
}

inline std::string file_hash(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[65536];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    for (std::streamsize i = 0; i < is.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char out[20];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

// Writes manifest.json: config echo + hash, code version, seeds, wall time,
// and the content hash of every payload file written by the run.
inline void write_manifest(const RunConfig& cfg, const std::vector<std::string>& payloads,
                           double wall_seconds, const std::filesystem::path& dir) {
  json m;
  m["tool"] = "rotorforge";
  m["version"] = kVersion;
  m["config_hash"] = cfg.config_hash();
  m["config"] = cfg.canonical();
  m["seeds"] = {cfg.experiment.seed};
  m["experiment"] = cfg.experiment_kind;
  m["wall_seconds"] = wall_seconds;
  json files = json::object();
  for (const auto& p : payloads) files[p] = file_hash(dir / p);
  m["payloads"] = files;
  std::ofstream os(dir / "manifest.json");
  os << m.dump(2) << "\n";
}

}  // namespace rotorforge

#endif  // ROTORFORGE_REPORT_HPP
