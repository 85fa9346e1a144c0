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

#ifndef ROTORFORGE_NF_IO_HPP
#define ROTORFORGE_NF_IO_HPP

// Normal-form serialization: a manifest header (n, k, N*, gamma, potential
// specs, build timestamp, content hash) followed by the algebra text format,
// section per object. The hash covers the section payload, not the
// timestamp, so re-serializing a loaded result reproduces it.

#include <chrono>
#include <ctime>
#include <sstream>
#include <string>
#include <vector>

#include "rotorforge/normal_form.hpp"
#include "rotorforge/trigpoly_io.hpp"

namespace rotorforge {

namespace nf_io_detail {

inline std::string payload_hash(const std::string& body) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : body) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char out[20];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace nf_io_detail

inline std::string serialize_normal_form(const NormalFormResult& nf,
                                         const std::vector<std::string>& potential_specs,
                                         bool with_timestamp = true) {
  std::ostringstream body;
  body << "[h0]\n";
  serialize(nf.h0, body);
  for (std::size_t j = 0; j < nf.resonant_layers.size(); ++j) {
    body << "[resonant " << j << "]\n";
    serialize(nf.resonant_layers[j], body);
  }
  for (std::size_t j = 0; j < nf.generators.size(); ++j) {
    body << "[generator " << j << "]\n";
    serialize(nf.generators[j], body);
  }
  body << "[final]\n";
  serialize(nf.final_f, body);
  body << "end normal-form\n";

  std::ostringstream os;
  os << "rotorforge normal-form v1\n";
  os << "n=" << nf.n() << " k=" << nf.k() << " nstar=" << nf.nstar
     << " order_cap=" << nf.order_cap << " gamma=" << nf.chain.gamma << "\n";
  os << "potentials=";
  for (std::size_t i = 0; i < potential_specs.size(); ++i)
    os << (i ? ";" : "") << "{" << potential_specs[i] << "}";
  os << "\n";
  if (with_timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "built=" << buf << "\n";
  }
  os << "hash=" << nf_io_detail::payload_hash(body.str()) << "\n";
  os << body.str();
  return os.str();
}

inline NormalFormResult parse_normal_form(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "rotorforge normal-form v1")
    throw parse_error("not a rotorforge normal-form file");
  int n = 0, k = 0, nstar = 0, order_cap = 0;
  double gamma = 0;
  if (!std::getline(is, line) ||
      std::sscanf(line.c_str(), "n=%d k=%d nstar=%d order_cap=%d gamma=%lf", &n, &k, &nstar,
                  &order_cap, &gamma) != 5)
    throw parse_error("malformed normal-form header");
  if (!std::getline(is, line) || line.rfind("potentials=", 0) != 0)
    throw parse_error("missing potentials line");
  std::vector<std::string> specs;
  {
    std::string rest = line.substr(11);
    std::size_t pos = 0;
    while ((pos = rest.find('{')) != std::string::npos) {
      auto end = rest.find('}', pos);
      if (end == std::string::npos) throw parse_error("unbalanced potential braces");
      specs.push_back(rest.substr(pos + 1, end - pos - 1));
      rest = rest.substr(end + 1);
    }
  }
  // optional built=, then hash=
  std::string hash;
  while (std::getline(is, line)) {
    if (line.rfind("built=", 0) == 0) continue;
    if (line.rfind("hash=", 0) == 0) {
      hash = line.substr(5);
      break;
    }
    throw parse_error("unexpected header line: " + line);
  }

  NormalFormResult nf;
  nf.chain.n = n;
  nf.chain.k = k;
  nf.chain.gamma = gamma;
  nf.chain.degenerate_allowed = true;  // loading does not re-run the checks
  for (const auto& s : specs) nf.chain.potentials.push_back(Potential::parse(s));
  nf.nstar = nstar;
  nf.order_cap = order_cap;

  while (std::getline(is, line)) {
    if (line == "end normal-form") return nf;
    if (line == "[h0]")
      nf.h0 = parse_fourier(is);
    else if (line.rfind("[resonant", 0) == 0)
      nf.resonant_layers.push_back(parse_fourier(is));
    else if (line.rfind("[generator", 0) == 0)
      nf.generators.push_back(parse_fourier(is));
    else if (line == "[final]")
      nf.final_f = parse_fourier(is);
    else
      throw parse_error("unexpected section line: " + line);
  }
  throw parse_error("missing 'end normal-form'");
}

inline NormalFormResult parse_normal_form(const std::string& text) {
  std::istringstream is(text);
  return parse_normal_form(is);
}

}  // namespace rotorforge

#endif  // ROTORFORGE_NF_IO_HPP
