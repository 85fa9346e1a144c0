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

#ifndef ROTORFORGE_CHAIN_HPP
#define ROTORFORGE_CHAIN_HPP

// Rotator-chain specification: interaction potentials as finite single-angle
// Fourier series with exact coefficients, the non-degeneracy check (no common
// zero of U' and U''), and double-precision Hamiltonian/force evaluation for
// the integrator.

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rotorforge/trigpoly.hpp"

namespace rotorforge {

struct assumption_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace poly_detail {

// Dense univariate polynomial over the Gaussian rationals, little-endian.
using Poly = std::vector<GaussianRational>;

inline void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}
inline int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Poly rem(Poly a, const Poly& b) {
  while (degree(a) >= degree(b)) {
    GaussianRational q = a.back() / b.back();
    const int shift = degree(a) - degree(b);
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = a[i + shift] - q * b[i];
    a.pop_back();
    trim(a);
    if (a.empty()) break;
  }
  return a;
}

inline Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
    // keep coefficients small
    if (!b.empty()) {
      GaussianRational lead = b.back();
      for (auto& c : b) c = c / lead;
    }
  }
  if (!a.empty()) {
    GaussianRational lead = a.back();
    for (auto& c : a) c = c / lead;
  }
  return a;
}

// Durand-Kerner root finder; degree is tiny here.
inline std::vector<std::complex<double>> roots(const Poly& p) {
  const int d = degree(p);
  std::vector<std::complex<double>> c(d + 1);
  for (int i = 0; i <= d; ++i) c[i] = p[i].to_complex() / p[d].to_complex();
  std::vector<std::complex<double>> z(d);
  for (int i = 0; i < d; ++i) z[i] = std::polar(1.3, 0.7 + 2.0 * M_PI * i / std::max(d, 1));
  for (int it = 0; it < 500; ++it) {
    double moved = 0;
    for (int i = 0; i < d; ++i) {
      std::complex<double> num = c[d];
      for (int j = d - 1; j >= 0; --j) num = num * z[i] + c[j];
      std::complex<double> den = 1;
      for (int j = 0; j < d; ++j)
        if (j != i) den *= z[i] - z[j];
      std::complex<double> step = num / den;
      z[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-14) break;
  }
  return z;
}

}  // namespace poly_detail

// Interaction potential U(psi) = sum_{m>0} c_m e^{i m psi} + conj. Finite,
// real-valued, with the physically irrelevant constant mode absent.
class Potential {
 public:
  Potential() = default;

  static Potential cosine() {  // -cos(psi)
    Potential u;
    u.modes_[1] = grat(-1, 2);
    u.sync();
    return u;
  }
  static Potential degenerate_quartic() {  // (cos(psi) - 1)^2 / 2, constant dropped
    Potential u;
    u.modes_[1] = grat(-1, 2);
    u.modes_[2] = grat(1, 8);
    u.sync();
    return u;
  }
  static Potential zero() { return Potential(); }  // free bond (degenerate)

  // Grammar: preset name, or comma-separated harmonics "m: a/b [+ c/d i]".
  static Potential parse(std::string_view spec);

  const std::map<int, GaussianRational>& modes() const { return modes_; }
  int max_harmonic() const { return modes_.empty() ? 0 : modes_.rbegin()->first; }
  bool non_constant() const { return !modes_.empty(); }

  // Signed-harmonic coefficient: m>0 gives c_m, m<0 gives conj(c_{-m}).
  GaussianRational coeff(int m) const {
    auto it = modes_.find(std::abs(m));
    if (it == modes_.end()) return {};
    return m > 0 ? it->second : it->second.conj();
  }

  double value(double psi) const {
    double s = 0;
    for (const auto& t : table_) s += 2.0 * (t.a * std::cos(t.m * psi) - t.b * std::sin(t.m * psi));
    return s;
  }
  double dvalue(double psi) const {
    double s = 0;
    for (const auto& t : table_)
      s += -2.0 * t.m * (t.a * std::sin(t.m * psi) + t.b * std::cos(t.m * psi));
    return s;
  }
  double d2value(double psi) const {
    double s = 0;
    for (const auto& t : table_)
      s += 2.0 * t.m * t.m * (-t.a * std::cos(t.m * psi) + t.b * std::sin(t.m * psi));
    return s;
  }

  // U_i(phi_{j+1} - phi_j) as an exact algebra element; `deriv` applies
  // (d/dpsi)^deriv before embedding.
  FourierFunction bond_function(int n, int bond, int deriv = 0) const {
    FourierFunction f(n, true);
    for (const auto& [m, c] : modes_) {
      IntVec mu(n, 0);
      mu[bond - 1] = -m;
      mu[bond] = m;
      GaussianRational cm = c;
      for (int d2 = 0; d2 < deriv; ++d2) cm = cm.times_i_pow(1) * rat(m);
      f.set_mode(FreqVector(mu), Coefficient::constant(n, cm));
      for (auto& v : mu) v = -v;
      f.set_mode(FreqVector(mu), Coefficient::constant(n, cm.conj()));
    }
    return f;
  }

  // True iff U' and U'' never vanish simultaneously on the torus. Exact
  // polynomial gcd in z = e^{i psi}; only root extraction is numeric.
  bool check_nondegenerate(double* witness = nullptr) const {
    using namespace poly_detail;
    if (modes_.empty()) {
      if (witness) *witness = 0;
      return false;  // constant potential: U' = U'' = 0 everywhere
    }
    const int M = max_harmonic();
    Poly a(2 * M + 1), b(2 * M + 1);
    for (const auto& [m, c] : modes_) {
      const GaussianRational im_c = c.times_i_pow(1) * rat(m);          // (im) c_m
      const GaussianRational m2_c = c * rat(-static_cast<long>(m) * m); // -(m^2) c_m
      a[M + m] += im_c;
      a[M - m] += im_c.conj();
      b[M + m] += m2_c;
      b[M - m] += m2_c.conj();
    }
    trim(a);
    trim(b);
    std::size_t va = 0, vb = 0;
    while (va < a.size() && a[va].is_zero()) ++va;
    while (vb < b.size() && b[vb].is_zero()) ++vb;
    a.erase(a.begin(), a.begin() + va);
    b.erase(b.begin(), b.begin() + vb);
    Poly g = gcd(a, b);
    if (degree(g) < 1) return true;
    for (const auto& z : roots(g)) {
      if (std::abs(std::abs(z) - 1.0) < 1e-9) {
        if (witness) *witness = std::arg(z);
        return false;
      }
    }
    return true;
  }

 private:
  void sync() {
    table_.clear();
    for (const auto& [m, c] : modes_)
      table_.push_back({static_cast<double>(m), to_double(c.re), to_double(c.im)});
  }

  std::map<int, GaussianRational> modes_;
  struct Entry {
    double m, a, b;
  };
  std::vector<Entry> table_;
};

inline Potential Potential::parse(std::string_view spec) {
  auto trimmed = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  std::string_view body = trimmed(spec);
  if (body == "cosine") return cosine();
  if (body == "degenerate_quartic") return degenerate_quartic();
  if (body == "zero") return zero();

  Potential u;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string_view item = trimmed(body.substr(pos, comma - pos));
    pos = comma == std::string_view::npos ? body.size() : comma + 1;
    if (item.empty()) continue;
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos)
      throw assumption_violation("potential: expected 'm: a/b', got '" + std::string(item) + "'");
    int m = 0;
    try {
      m = std::stoi(std::string(trimmed(item.substr(0, colon))));
    } catch (...) {
      throw assumption_violation("potential: bad harmonic index in '" + std::string(item) + "'");
    }
    if (m == 0) throw assumption_violation("potential: constant Fourier mode is not allowed");
    if (m < 0) throw assumption_violation("potential: harmonics are indexed by m > 0");
    std::string_view rest = trimmed(item.substr(colon + 1));
    GaussianRational c;
    std::size_t ipos = rest.find('i');
    if (ipos != std::string_view::npos) {
      std::string_view imag = trimmed(rest.substr(0, ipos));
      std::size_t plus = imag.rfind('+');
      if (plus == std::string_view::npos || plus == 0)
        throw assumption_violation("potential: expected 'a/b + c/d i'");
      c.re = parse_rational(trimmed(imag.substr(0, plus)));
      c.im = parse_rational(trimmed(imag.substr(plus + 1)));
      if (!trimmed(rest.substr(ipos + 1)).empty())
        throw assumption_violation("potential: trailing characters after 'i'");
    } else {
      c.re = parse_rational(rest);
    }
    if (u.modes_.count(m)) throw assumption_violation("potential: duplicate harmonic");
    if (!c.is_zero()) u.modes_[m] = c;
  }
  if (u.modes_.empty()) throw assumption_violation("potential: empty specification");
  u.sync();
  return u;
}

struct State {
  std::vector<double> I;
  std::vector<double> phi;

  int n() const { return static_cast<int>(I.size()); }

  // Angles reduced to [0, 2pi); integration keeps winding angles and reduces
  // only at output boundaries.
  State reduced() const {
    State s = *this;
    for (auto& p : s.phi) {
      p = std::fmod(p, 2.0 * M_PI);
      if (p < 0) p += 2.0 * M_PI;
    }
    return s;
  }
};

struct ChainSpec {
  int n = 0;
  int k = 0;
  double gamma = 0;
  std::vector<Potential> potentials;  // U_1 .. U_{n-1}
  bool degenerate_allowed = false;

  void validate() const {
    if (n <= 1) throw assumption_violation("chain: n must be > 1");
    if (k < 2 || k > n) throw assumption_violation("chain: k must satisfy 2 <= k <= n");
    if (gamma < 0) throw assumption_violation("chain: gamma must be >= 0");
    if (static_cast<int>(potentials.size()) != n - 1)
      throw assumption_violation("chain: expected n-1 potentials");
    if (!degenerate_allowed) {
      for (int i = 0; i < n - 1; ++i) {
        double w = 0;
        if (!potentials[i].check_nondegenerate(&w))
          throw assumption_violation("chain: potential U_" + std::to_string(i + 1) +
                                     " is degenerate (witness psi=" + std::to_string(w) +
                                     "); set degenerate_allowed to override");
      }
    }
  }

  static ChainSpec uniform_cosine(int n, int k, double gamma) {
    ChainSpec c;
    c.n = n;
    c.k = k;
    c.gamma = gamma;
    c.potentials.assign(n - 1, Potential::cosine());
    c.validate();
    return c;
  }
};

inline double hamiltonian(const ChainSpec& chain, const State& s) {
  double h = 0;
  for (double v : s.I) h += 0.5 * v * v;
  for (int i = 0; i + 1 < chain.n; ++i)
    h += chain.potentials[i].value(s.phi[i + 1] - s.phi[i]);
  return h;
}

// F_i = -dH/dphi_i = U'_i(phi_{i+1}-phi_i) - U'_{i-1}(phi_i-phi_{i-1}),
// free ends (U_0 = U_n = 0). Computed from per-bond forces so the telescoping
// global-rotation identity sum_i F_i = 0 holds to roundoff.
inline void forces(const ChainSpec& chain, const State& s, std::span<double> out,
                   std::span<const int> active_bonds = {}) {
  const int n = chain.n;
  double prev = 0.0;
  for (int i = 0; i < n; ++i) {
    double cur = 0.0;
    if (i + 1 < n) {
      const bool active = active_bonds.empty() || active_bonds[i];
      if (active) cur = chain.potentials[i].dvalue(s.phi[i + 1] - s.phi[i]);
    }
    out[i] = cur - prev;
    prev = cur;
  }
}

inline std::vector<double> forces(const ChainSpec& chain, const State& s) {
  std::vector<double> f(chain.n);
  forces(chain, s, f);
  return f;
}

}  // namespace rotorforge

#endif  // ROTORFORGE_CHAIN_HPP
