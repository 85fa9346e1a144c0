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

#ifndef ROTORFORGE_TRIGPOLY_HPP
#define ROTORFORGE_TRIGPOLY_HPP

// Exact algebra of phi-periodic functions
//
//   f(I, phi) = sum_mu f_mu(I) e^{i mu.phi},   mu in Z^n,
//
// where each coefficient f_mu is a finite sum of terms
//
//   (Gaussian rational) * I^a * prod_nu (nu.I)^{-p}
//
// over primitive integer linear forms nu. The class is closed under +, *,
// d/dphi_i, d/dI_i, the Poisson bracket, and the mode-wise division Q, so the
// whole normal-form pipeline runs with no rounding in the coefficients.
// Site indices in the public interface are 1-based.

#include <algorithm>
#include <atomic>
#include <cassert>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotorforge/rational.hpp"

namespace rotorforge {

struct algebra_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct dimension_mismatch : algebra_error {
  using algebra_error::algebra_error;
};
struct term_budget_error : algebra_error {
  using algebra_error::algebra_error;
};
struct denominator_error : algebra_error {
  using algebra_error::algebra_error;
};

// Global cap on CoeffTerms per FourierFunction. The inductive construction
// grows combinatorially in k and must fail loudly instead of thrashing.
inline std::atomic<std::size_t>& term_budget_ref() {
  static std::atomic<std::size_t> budget{2'000'000};
  return budget;
}
inline std::size_t term_budget() { return term_budget_ref().load(); }
inline void set_term_budget(std::size_t b) { term_budget_ref().store(b); }

using IntVec = std::vector<std::int32_t>;

inline int compare_intvec(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// FreqVector: the Fourier multi-index mu.

struct FreqVector {
  IntVec e;

  FreqVector() = default;
  explicit FreqVector(IntVec v) : e(std::move(v)) {}

  int n() const { return static_cast<int>(e.size()); }
  std::int32_t operator[](int site1) const { return e[site1 - 1]; }

  // Resonant <=> the entry at site k vanishes.
  bool resonant(int k) const { return e[k - 1] == 0; }

  bool is_zero() const {
    return std::all_of(e.begin(), e.end(), [](auto v) { return v == 0; });
  }
  int max_abs() const {
    int m = 0;
    for (auto v : e) m = std::max(m, std::abs(v));
    return m;
  }
  FreqVector operator-() const {
    FreqVector r = *this;
    for (auto& v : r.e) v = -v;
    return r;
  }
  friend FreqVector operator+(const FreqVector& a, const FreqVector& b) {
    FreqVector r = a;
    for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] += b.e[i];
    return r;
  }
  friend bool operator==(const FreqVector& a, const FreqVector& b) { return a.e == b.e; }
  friend bool operator<(const FreqVector& a, const FreqVector& b) {
    return compare_intvec(a.e, b.e) < 0;
  }
};

// ---------------------------------------------------------------------------
// LinearForm: primitive integer form nu, denominator of (nu.I)^{-p}.

struct LinearForm {
  IntVec e;

  LinearForm() = default;
  explicit LinearForm(IntVec v) : e(std::move(v)) {}

  int n() const { return static_cast<int>(e.size()); }
  int max_abs() const {
    int m = 0;
    for (auto v : e) m = std::max(m, std::abs(v));
    return m;
  }

  // Factors raw = scale * form with form primitive and form[k] > 0
  // (every form produced by Q is non-resonant, so the k entry is nonzero).
  // With k_site <= 0 the sign is fixed by the first nonzero entry instead.
  static LinearForm canonical(const IntVec& raw, int k_site, long* scale) {
    long g = 0;
    for (auto v : raw) g = std::gcd(g, static_cast<long>(std::abs(v)));
    if (g == 0) throw algebra_error("LinearForm: zero form");
    std::int32_t anchor = 0;
    if (k_site >= 1) {
      anchor = raw[k_site - 1];
      if (anchor == 0) throw algebra_error("LinearForm: resonant form where non-resonant required");
    } else {
      for (auto v : raw)
        if (v != 0) {
          anchor = v;
          break;
        }
    }
    long s = anchor > 0 ? g : -g;
    LinearForm f;
    f.e.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
      f.e[i] = static_cast<std::int32_t>(raw[i] / s);
    if (scale) *scale = s;
    return f;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(e[i]);
    }
    return s + ")";
  }

  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.e == b.e; }
  friend bool operator<(const LinearForm& a, const LinearForm& b) {
    return compare_intvec(a.e, b.e) < 0;
  }
};

using DenomList = std::vector<std::pair<LinearForm, std::int32_t>>;  // sorted, powers > 0

// ---------------------------------------------------------------------------
// CoeffTerm / Coefficient

struct CoeffTerm {
  GaussianRational c;
  IntVec mono;      // exponents of I_1..I_n, all >= 0, size n
  DenomList dens;   // sorted by form, no duplicates
};

inline int compare_term_key(const CoeffTerm& a, const CoeffTerm& b) {
  if (int c = compare_intvec(a.mono, b.mono)) return c;
  if (a.dens.size() != b.dens.size()) return a.dens.size() < b.dens.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.dens.size(); ++i) {
    if (int c = compare_intvec(a.dens[i].first.e, b.dens[i].first.e)) return c;
    if (a.dens[i].second != b.dens[i].second)
      return a.dens[i].second < b.dens[i].second ? -1 : 1;
  }
  return 0;
}

struct TermKeyLess {
  bool operator()(const CoeffTerm& a, const CoeffTerm& b) const {
    return compare_term_key(a, b) < 0;
  }
};

class Coefficient {
 public:
  Coefficient() = default;

  static Coefficient constant(int n, GaussianRational c) {
    Coefficient r;
    if (!c.is_zero()) r.terms_.push_back({std::move(c), IntVec(n, 0), {}});
    return r;
  }
  static Coefficient monomial(const IntVec& pows, GaussianRational c) {
    Coefficient r;
    if (!c.is_zero()) r.terms_.push_back({std::move(c), pows, {}});
    return r;
  }

  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<CoeffTerm>& terms() const { return terms_; }

  // Builder access: push unsorted, then normalize().
  void push_raw(CoeffTerm t) { terms_.push_back(std::move(t)); }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), TermKeyLess{});
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size();) {
      CoeffTerm acc = std::move(terms_[i]);
      std::size_t j = i + 1;
      while (j < terms_.size() && compare_term_key(acc, terms_[j]) == 0)
        acc.c += terms_[j++].c;
      if (!acc.c.is_zero()) terms_[out++] = std::move(acc);
      i = j;
    }
    terms_.resize(out);
  }

  Coefficient operator-() const {
    Coefficient r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }
  Coefficient conj() const {
    Coefficient r = *this;
    for (auto& t : r.terms_) t.c = t.c.conj();
    return r;
  }
  Coefficient scaled(const GaussianRational& s) const {
    if (s.is_zero()) return {};
    Coefficient r = *this;
    for (auto& t : r.terms_) t.c *= s;
    return r;
  }

  friend Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    Coefficient r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      int c = compare_term_key(a.terms_[i], b.terms_[j]);
      if (c < 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c > 0) {
        r.terms_.push_back(b.terms_[j++]);
      } else {
        CoeffTerm t = a.terms_[i++];
        t.c += b.terms_[j++].c;
        if (!t.c.is_zero()) r.terms_.push_back(std::move(t));
      }
    }
    for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
    return r;
  }

  // d/dI_i by the product rule: the monomial power drops, and each
  // (nu.I)^{-p} contributes -p nu_i (nu.I)^{-p-1}.
  Coefficient d_I(int site1) const {
    const int idx = site1 - 1;
    Coefficient r;
    for (const auto& t : terms_) {
      if (t.mono[idx] > 0) {
        CoeffTerm u = t;
        u.c *= Rational(t.mono[idx]);
        u.mono[idx] -= 1;
        r.terms_.push_back(std::move(u));
      }
      for (std::size_t d = 0; d < t.dens.size(); ++d) {
        const auto& [form, p] = t.dens[d];
        if (form.e[idx] == 0) continue;
        CoeffTerm u = t;
        u.c *= rat(-static_cast<long>(p) * form.e[idx]);
        u.dens[d].second += 1;
        r.terms_.push_back(std::move(u));
      }
    }
    r.normalize();
    return r;
  }

  std::complex<double> evaluate(std::span<const std::complex<double>> I) const {
    std::complex<double> sum = 0;
    for (const auto& t : terms_) {
      std::complex<double> v = t.c.to_complex();
      for (std::size_t i = 0; i < t.mono.size(); ++i)
        for (int p = 0; p < t.mono[i]; ++p) v *= I[i];
      for (const auto& [form, p] : t.dens) {
        std::complex<double> dot = 0;
        for (std::size_t i = 0; i < form.e.size(); ++i)
          if (form.e[i]) dot += static_cast<double>(form.e[i]) * I[i];
        if (dot == std::complex<double>(0.0, 0.0))
          throw denominator_error("denominator vanishes at evaluation point: " + form.str());
        std::complex<double> inv = 1.0 / dot;
        for (int q = 0; q < p; ++q) v *= inv;
      }
      sum += v;
    }
    return sum;
  }

  // Exact evaluation at rational actions; nullopt if a denominator vanishes.
  std::optional<GaussianRational> evaluate_exact(std::span<const Rational> I) const {
    GaussianRational sum;
    for (const auto& t : terms_) {
      GaussianRational v = t.c;
      Rational m = 1;
      for (std::size_t i = 0; i < t.mono.size(); ++i)
        if (t.mono[i]) m *= pow_rational(I[i], t.mono[i]);
      for (const auto& [form, p] : t.dens) {
        Rational dot = 0;
        for (std::size_t i = 0; i < form.e.size(); ++i)
          if (form.e[i]) dot += form.e[i] * I[i];
        if (dot == 0) return std::nullopt;
        m /= pow_rational(dot, p);
      }
      sum += v * m;
    }
    return sum;
  }

  // Exact zero test: put everything over the common denominator and expand
  // the numerator into a plain polynomial in I.
  bool is_zero_exact() const {
    if (terms_.empty()) return true;
    std::map<LinearForm, std::int32_t> maxp;
    for (const auto& t : terms_)
      for (const auto& [form, p] : t.dens) {
        auto& mp = maxp[form];
        mp = std::max(mp, p);
      }
    std::map<IntVec, GaussianRational> poly;
    std::map<IntVec, GaussianRational> work;
    for (const auto& t : terms_) {
      work.clear();
      work.emplace(t.mono, t.c);
      for (const auto& [form, maxpow] : maxp) {
        std::int32_t have = 0;
        for (const auto& [f2, p2] : t.dens)
          if (f2 == form) {
            have = p2;
            break;
          }
        for (std::int32_t q = have; q < maxpow; ++q) {
          std::map<IntVec, GaussianRational> next;
          for (const auto& [mono, c] : work)
            for (std::size_t i = 0; i < form.e.size(); ++i) {
              if (!form.e[i]) continue;
              IntVec m2 = mono;
              m2[i] += 1;
              auto [it, fresh] = next.emplace(std::move(m2), c * rat(form.e[i]));
              if (!fresh) it->second += c * rat(form.e[i]);
            }
          work = std::move(next);
        }
      }
      for (auto& [mono, c] : work) {
        auto [it, fresh] = poly.emplace(mono, c);
        if (!fresh) it->second += c;
      }
    }
    for (const auto& [mono, c] : poly)
      if (!c.is_zero()) return false;
    return true;
  }

  int max_form_abs() const {
    int m = 0;
    for (const auto& t : terms_)
      for (const auto& [form, p] : t.dens) m = std::max(m, form.max_abs());
    return m;
  }
  bool has_denominators() const {
    return std::any_of(terms_.begin(), terms_.end(),
                       [](const CoeffTerm& t) { return !t.dens.empty(); });
  }

 private:
  std::vector<CoeffTerm> terms_;
};

inline CoeffTerm mul_terms(const CoeffTerm& a, const CoeffTerm& b) {
  CoeffTerm r;
  r.c = a.c * b.c;
  r.mono = a.mono;
  for (std::size_t i = 0; i < r.mono.size(); ++i) r.mono[i] += b.mono[i];
  r.dens.reserve(a.dens.size() + b.dens.size());
  std::size_t i = 0, j = 0;
  while (i < a.dens.size() && j < b.dens.size()) {
    int c = compare_intvec(a.dens[i].first.e, b.dens[j].first.e);
    if (c < 0)
      r.dens.push_back(a.dens[i++]);
    else if (c > 0)
      r.dens.push_back(b.dens[j++]);
    else {
      r.dens.emplace_back(a.dens[i].first, a.dens[i].second + b.dens[j].second);
      ++i, ++j;
    }
  }
  for (; i < a.dens.size(); ++i) r.dens.push_back(a.dens[i]);
  for (; j < b.dens.size(); ++j) r.dens.push_back(b.dens[j]);
  return r;
}

// ---------------------------------------------------------------------------
// FourierFunction

class FourierFunction {
 public:
  using ModeMap = std::map<FreqVector, Coefficient>;

  FourierFunction() : n_(0), real_(true) {}
  explicit FourierFunction(int n, bool real = true) : n_(n), real_(real) {}

  static FourierFunction zero(int n) { return FourierFunction(n, true); }

  static FourierFunction constant(int n, GaussianRational c) {
    FourierFunction f(n, c.is_real());
    f.set_mode(FreqVector(IntVec(n, 0)), Coefficient::constant(n, std::move(c)));
    return f;
  }

  static FourierFunction action_monomial(int n, const IntVec& pows, Rational c) {
    FourierFunction f(n, true);
    f.set_mode(FreqVector(IntVec(n, 0)), Coefficient::monomial(pows, GaussianRational(std::move(c))));
    return f;
  }

  // Kinetic part sum_i I_i^2 / 2.
  static FourierFunction h0(int n) {
    FourierFunction f(n, true);
    Coefficient c;
    for (int i = 0; i < n; ++i) {
      IntVec mono(n, 0);
      mono[i] = 2;
      c.push_raw({GaussianRational(rat(1, 2)), std::move(mono), {}});
    }
    c.normalize();
    f.set_mode(FreqVector(IntVec(n, 0)), std::move(c));
    return f;
  }

  // c e^{i mu.phi} + conj(c) e^{-i mu.phi}  (a real harmonic).
  static FourierFunction harmonic(int n, const FreqVector& mu, const GaussianRational& c) {
    FourierFunction f(n, true);
    if (mu.is_zero()) {
      f.set_mode(mu, Coefficient::constant(n, c + c.conj()));
      return f;
    }
    f.set_mode(mu, Coefficient::constant(n, c));
    f.set_mode(-mu, Coefficient::constant(n, c.conj()));
    return f;
  }
  static FourierFunction cosine(int n, const FreqVector& mu) {
    return harmonic(n, mu, GaussianRational(rat(1, 2)));
  }
  static FourierFunction sine(int n, const FreqVector& mu) {
    return harmonic(n, mu, GaussianRational(rat(0), rat(-1, 2)));
  }

  int n() const { return n_; }
  bool real_flagged() const { return real_; }
  void set_real_flag(bool r) { real_ = r; }
  const ModeMap& modes() const { return modes_; }
  bool empty() const { return modes_.empty(); }

  const Coefficient* mode(const FreqVector& mu) const {
    auto it = modes_.find(mu);
    return it == modes_.end() ? nullptr : &it->second;
  }

  void set_mode(FreqVector mu, Coefficient c) {
    if (static_cast<int>(mu.e.size()) != n_) throw dimension_mismatch("mode length != n");
    if (c.empty())
      modes_.erase(mu);
    else
      modes_[std::move(mu)] = std::move(c);
  }

  std::size_t term_count() const {
    std::size_t s = 0;
    for (const auto& [mu, c] : modes_) s += c.size();
    return s;
  }
  int max_mode_abs() const {
    int m = 0;
    for (const auto& [mu, c] : modes_) m = std::max(m, mu.max_abs());
    return m;
  }
  int max_form_abs() const {
    int m = 0;
    for (const auto& [mu, c] : modes_) m = std::max(m, c.max_form_abs());
    return m;
  }
  bool has_denominators() const {
    return std::any_of(modes_.begin(), modes_.end(),
                       [](const auto& kv) { return kv.second.has_denominators(); });
  }

  friend FourierFunction operator+(const FourierFunction& f, const FourierFunction& g) {
    f.require_same_n(g);
    FourierFunction r(f.n_, f.real_ && g.real_);
    r.modes_ = f.modes_;
    for (const auto& [mu, c] : g.modes_) {
      auto it = r.modes_.find(mu);
      if (it == r.modes_.end()) {
        r.modes_.emplace(mu, c);
      } else {
        it->second = it->second + c;
        if (it->second.empty()) r.modes_.erase(it);
      }
    }
    r.enforce_budget();
    return r;
  }
  friend FourierFunction operator-(const FourierFunction& f, const FourierFunction& g) {
    return f + (-g);
  }
  FourierFunction operator-() const {
    FourierFunction r(n_, real_);
    for (const auto& [mu, c] : modes_) r.modes_.emplace(mu, -c);
    return r;
  }
  FourierFunction scaled(const GaussianRational& s) const {
    FourierFunction r(n_, real_ && s.is_real());
    if (s.is_zero()) return r;
    for (const auto& [mu, c] : modes_) r.modes_.emplace(mu, c.scaled(s));
    return r;
  }

  friend FourierFunction operator*(const FourierFunction& f, const FourierFunction& g) {
    f.require_same_n(g);
    FourierFunction r(f.n_, f.real_ && g.real_);
    Accumulator acc;
    for (const auto& [mu, a] : f.modes_)
      for (const auto& [nu, b] : g.modes_) {
        auto& slot = acc.slot(mu + nu);
        for (const auto& ta : a.terms())
          for (const auto& tb : b.terms()) {
            CoeffTerm t = mul_terms(ta, tb);
            acc.add(slot, std::move(t));
          }
      }
    r.adopt(std::move(acc.modes));
    return r;
  }

  // d/dphi_i multiplies each mode by (i mu_i); modes with mu_i = 0 drop out.
  FourierFunction differentiate_phi(int site1) const {
    check_site(site1);
    FourierFunction r(n_, real_);
    for (const auto& [mu, c] : modes_) {
      const std::int32_t m = mu.e[site1 - 1];
      if (m == 0) continue;
      r.modes_.emplace(mu, c.scaled(GaussianRational(rat(0), rat(m))));
    }
    return r;
  }

  FourierFunction differentiate_I(int site1) const {
    check_site(site1);
    FourierFunction r(n_, real_);
    for (const auto& [mu, c] : modes_) {
      Coefficient d = c.d_I(site1);
      if (!d.empty()) r.modes_.emplace(mu, std::move(d));
    }
    r.enforce_budget();
    return r;
  }

  // {f, g} = sum_i (df/dphi_i dg/dI_i - df/dI_i dg/dphi_i).
  //
  // A nonzero `order_cap` drops every product term whose total inverse-form
  // power reaches the cap: on D_{L,r,sigma} such terms are O(L^{-cap}), the
  // remainder class of the truncated construction.
  friend FourierFunction poisson_bracket_capped(const FourierFunction& f,
                                                const FourierFunction& g, int order_cap) {
    f.require_same_n(g);
    const int n = f.n_;
    auto den_power = [](const CoeffTerm& t) {
      int p = 0;
      for (const auto& [form, q] : t.dens) p += q;
      return p;
    };
    // Pre-differentiate coefficients w.r.t. every action that can contribute.
    auto dtable = [n](const FourierFunction& h) {
      std::vector<std::vector<Coefficient>> t;
      t.reserve(h.modes_.size());
      for (const auto& [mu, c] : h.modes_) {
        std::vector<Coefficient> row(n);
        for (int i = 1; i <= n; ++i) row[i - 1] = c.d_I(i);
        t.push_back(std::move(row));
      }
      return t;
    };
    const auto dIf = dtable(f);
    const auto dIg = dtable(g);

    Accumulator acc;
    std::size_t fi = 0;
    for (auto itf = f.modes_.begin(); itf != f.modes_.end(); ++itf, ++fi) {
      const auto& [mu, a] = *itf;
      std::size_t gi = 0;
      for (auto itg = g.modes_.begin(); itg != g.modes_.end(); ++itg, ++gi) {
        const auto& [nu, b] = *itg;
        auto& slot = acc.slot(mu + nu);
        auto accumulate = [&](const Coefficient& x, const Coefficient& y,
                              const GaussianRational& scale) {
          if (scale.is_zero()) return;
          for (const auto& tx : x.terms()) {
            const int px = order_cap ? den_power(tx) : 0;
            for (const auto& ty : y.terms()) {
              if (order_cap && px + den_power(ty) >= order_cap) continue;
              CoeffTerm t = mul_terms(tx, ty);
              t.c *= scale;
              acc.add(slot, std::move(t));
            }
          }
        };
        for (int i = 0; i < n; ++i) {
          // (i mu_i a) * dI_i b  -  dI_i a * (i nu_i b)
          if (mu.e[i] != 0 && !dIg[gi][i].empty())
            accumulate(a, dIg[gi][i], GaussianRational(rat(0), rat(mu.e[i])));
          if (nu.e[i] != 0 && !dIf[fi][i].empty())
            accumulate(dIf[fi][i], b, GaussianRational(rat(0), rat(-nu.e[i])));
        }
      }
    }
    FourierFunction r(n, f.real_ && g.real_);
    r.adopt(std::move(acc.modes));
    return r;
  }

  friend FourierFunction poisson_bracket(const FourierFunction& f, const FourierFunction& g) {
    return poisson_bracket_capped(f, g, 0);
  }

  // {phi_i, g} = dg/dI_i: the bracket of a coordinate angle with an algebra
  // element is itself an algebra element.
  friend FourierFunction angle_bracket(int site1, const FourierFunction& g) {
    return g.differentiate_I(site1);
  }

  // Splits into (resonant, non-resonant) parts at site k.
  std::pair<FourierFunction, FourierFunction> split_resonant(int k) const {
    check_site(k);
    FourierFunction res(n_, real_), non(n_, real_);
    for (const auto& [mu, c] : modes_)
      (mu.resonant(k) ? res : non).modes_.emplace(mu, c);
    return {std::move(res), std::move(non)};
  }

  FourierFunction resonant_part(int k) const { return split_resonant(k).first; }
  FourierFunction nonresonant_part(int k) const { return split_resonant(k).second; }

  // Q f = -i sum_{mu_k != 0} f_mu / (I.mu) e^{i mu.phi}. Solves the
  // homological equation {h0, Qf} = -f^NR; resonant modes are dropped.
  FourierFunction apply_Q(int k) const {
    check_site(k);
    FourierFunction r(n_, real_);
    for (const auto& [mu, c] : modes_) {
      if (mu.resonant(k)) continue;
      long scale = 0;
      LinearForm form = LinearForm::canonical(mu.e, k, &scale);
      Coefficient out;
      const GaussianRational factor = GaussianRational(rat(0), rat(-1, scale));
      for (const auto& t : c.terms()) {
        CoeffTerm u = t;
        u.c = t.c * factor;
        auto pos = std::lower_bound(
            u.dens.begin(), u.dens.end(), form,
            [](const auto& entry, const LinearForm& f2) { return entry.first < f2; });
        if (pos != u.dens.end() && pos->first == form)
          pos->second += 1;
        else
          u.dens.insert(pos, {form, 1});
        out.push_raw(std::move(u));
      }
      out.normalize();
      r.modes_.emplace(mu, std::move(out));
    }
    r.enforce_budget();
    return r;
  }

  // sum_{l=l0}^{l1} (w_l / l!) ad_chi^l f, with ad_chi f = {f, chi}.
  // With unit weights and l0 = 0 this is the truncated e^chi f. A nonzero
  // order_cap prunes product terms of total inverse-form power >= cap (the
  // remainder class of the truncation, see poisson_bracket_capped).
  friend FourierFunction lie_series(const FourierFunction& f, const FourierFunction& chi,
                                    int l0, int l1, std::span<const Rational> weights,
                                    int order_cap = 0) {
    if (l0 < 0 || l1 < l0) throw algebra_error("lie_series: bad truncation range");
    if (static_cast<int>(weights.size()) != l1 - l0 + 1)
      throw algebra_error("lie_series: weights length mismatch");
    f.require_same_n(chi);
    FourierFunction sum(f.n_, true);
    FourierFunction cur = f;
    Rational fact = 1;
    if (l0 == 0 && weights[0] != 0) sum = f.scaled(GaussianRational(weights[0]));
    for (int l = 1; l <= l1; ++l) {
      cur = poisson_bracket_capped(cur, chi, order_cap);
      fact *= l;
      if (cur.empty()) break;
      if (l >= l0 && weights[l - l0] != 0)
        sum = sum + cur.scaled(GaussianRational(weights[l - l0] / fact));
    }
    sum.real_ = f.real_ && chi.real_;
    if (sum.empty()) sum.real_ = true;
    return sum;
  }

  friend FourierFunction lie_exp(const FourierFunction& f, const FourierFunction& chi,
                                 int order, int sign = +1, int order_cap = 0) {
    std::vector<Rational> w(order + 1);
    for (int l = 0; l <= order; ++l) w[l] = (sign < 0 && (l & 1)) ? rat(-1) : rat(1);
    return lie_series(f, chi, 0, order, w, order_cap);
  }

  std::complex<double> evaluate(std::span<const std::complex<double>> I,
                                std::span<const std::complex<double>> phi) const {
    if (static_cast<int>(I.size()) != n_ || static_cast<int>(phi.size()) != n_)
      throw dimension_mismatch("evaluate: state length != n");
    std::complex<double> sum = 0;
    const std::complex<double> iu(0.0, 1.0);
    for (const auto& [mu, c] : modes_) {
      std::complex<double> dot = 0;
      for (int i = 0; i < n_; ++i)
        if (mu.e[i]) dot += static_cast<double>(mu.e[i]) * phi[i];
      sum += c.evaluate(I) * std::exp(iu * dot);
    }
    return sum;
  }

  std::complex<double> evaluate_real(std::span<const double> I, std::span<const double> phi) const {
    std::vector<std::complex<double>> ic(I.begin(), I.end()), pc(phi.begin(), phi.end());
    return evaluate(ic, pc);
  }

  // True iff identically zero. Per mode: a 3-point exact-evaluation pre-check
  // short-circuits obvious nonzeros, then the common-denominator normalization
  // decides exactly.
  bool is_zero() const {
    for (const auto& [mu, c] : modes_) {
      bool decided_nonzero = false;
      for (int pt = 0; pt < 3 && !decided_nonzero; ++pt) {
        std::vector<Rational> I(n_);
        for (int i = 0; i < n_; ++i) I[i] = rat(probe_point(pt, i), 64);
        auto v = c.evaluate_exact(I);
        if (v.has_value() && !v->is_zero()) decided_nonzero = true;
      }
      if (decided_nonzero) return false;
      if (!c.is_zero_exact()) return false;
    }
    return true;
  }

  void check_invariants() const {
    for (const auto& [mu, c] : modes_) {
      if (static_cast<int>(mu.e.size()) != n_) throw algebra_error("invariant: mode length");
      if (c.empty()) throw algebra_error("invariant: empty coefficient stored");
      const CoeffTerm* prev = nullptr;
      for (const auto& t : c.terms()) {
        if (t.c.is_zero()) throw algebra_error("invariant: zero term kept");
        if (static_cast<int>(t.mono.size()) != n_) throw algebra_error("invariant: mono length");
        for (auto m : t.mono)
          if (m < 0) throw algebra_error("invariant: negative monomial power");
        for (std::size_t d = 0; d < t.dens.size(); ++d) {
          if (t.dens[d].second <= 0) throw algebra_error("invariant: nonpositive denominator power");
          if (d && !(t.dens[d - 1].first < t.dens[d].first))
            throw algebra_error("invariant: denominators unsorted/duplicated");
        }
        if (prev && compare_term_key(*prev, t) >= 0)
          throw algebra_error("invariant: terms unsorted/unmerged");
        prev = &t;
      }
    }
    if (real_) {
      for (const auto& [mu, c] : modes_) {
        const Coefficient* opp = mode(-mu);
        if (!opp) throw algebra_error("invariant: reality (missing conjugate mode)");
        Coefficient diff = c + (-opp->conj());
        if (!diff.empty()) throw algebra_error("invariant: reality (coefficient mismatch)");
      }
    }
  }

 private:
  static long probe_point(int pt, int i) {
    static constexpr long primes[] = {193, 317, 439, 577, 709, 829, 967, 1087,
                                      1223, 1361, 1499, 1621, 1777, 1901, 2029, 2143};
    return primes[(i + 5 * pt) % (sizeof(primes) / sizeof(primes[0]))] + 7 * pt;
  }

  void require_same_n(const FourierFunction& g) const {
    if (n_ != g.n_) throw dimension_mismatch("chain size mismatch");
  }
  void check_site(int site1) const {
    if (site1 < 1 || site1 > n_) throw algebra_error("site index out of range");
  }

  // Shared accumulation map for products, with the term budget enforced while
  // inserting so a combinatorial blowup fails before exhausting memory.
  struct Accumulator {
    std::map<FreqVector, std::map<CoeffTerm, GaussianRational, TermKeyLess>> modes;
    std::size_t entries = 0;
    std::size_t cap = term_budget();

    std::map<CoeffTerm, GaussianRational, TermKeyLess>& slot(const FreqVector& mu) {
      return modes[mu];
    }
    void add(std::map<CoeffTerm, GaussianRational, TermKeyLess>& s, CoeffTerm t) {
      auto [it, fresh] = s.emplace(t, t.c);
      if (!fresh) {
        it->second += t.c;
      } else if (++entries > cap) {
        throw term_budget_error("term budget exceeded (" + std::to_string(cap) +
                                " CoeffTerms) during accumulation");
      }
    }
  };

  void adopt(std::map<FreqVector, std::map<CoeffTerm, GaussianRational, TermKeyLess>> acc) {
    for (auto& [mu, slot] : acc) {
      Coefficient c;
      for (auto& [key, val] : slot) {
        if (val.is_zero()) continue;
        CoeffTerm t = key;
        t.c = val;
        c.push_raw(std::move(t));
      }
      if (!c.empty()) modes_.emplace(mu, std::move(c));
    }
    enforce_budget();
  }

  void enforce_budget() const {
    const std::size_t cap = term_budget();
    std::size_t total = 0;
    for (const auto& [mu, c] : modes_) {
      total += c.size();
      if (total > cap)
        throw term_budget_error("term budget exceeded (" + std::to_string(cap) + " CoeffTerms)");
    }
  }

  int n_;
  bool real_;
  ModeMap modes_;
};

#ifdef ROTORFORGE_VERIFY
#define ROTORFORGE_CHECK(f) (f).check_invariants()
#else
#define ROTORFORGE_CHECK(f) ((void)0)
#endif

}  // namespace rotorforge

#endif  // ROTORFORGE_TRIGPOLY_HPP
