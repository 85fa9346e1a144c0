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

#ifndef ROTORFORGE_RATIONAL_HPP
#define ROTORFORGE_RATIONAL_HPP

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rotorforge {

// Exact rational scalar. mpq_class keeps values canonical (gcd 1, positive
// denominator) as long as they are produced by arithmetic or by rat() below.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p", "p/q", with optional sign. Throws on malformed input.
inline Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  try {
    mpz_class num(std::string(s.substr(0, slash)), 10);
    mpz_class den = slash == std::string_view::npos
                        ? mpz_class(1)
                        : mpz_class(std::string(s.substr(slash + 1)), 10);
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational: '" + std::string(s) + "'");
  }
}

// Always emits an explicit denominator ("3/1", "-1/2"), the serialized form.
inline std::string to_string_frac(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational pow_rational(const Rational& base, unsigned e) {
  Rational r = 1;
  Rational b = base;
  for (unsigned k = e; k; k >>= 1) {
    if (k & 1) r *= b;
    if (k > 1) b *= b;
  }
  return r;
}

inline std::size_t hash_mpz(const mpz_class& z) {
  const mpz_srcptr p = z.get_mpz_t();
  std::size_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ull;
  };
  mix(static_cast<std::uint64_t>(mpz_sgn(p)));
  const std::size_t n = mpz_size(p);
  for (std::size_t i = 0; i < n; ++i) mix(mpz_getlimbn(p, i));
  return h;
}

inline std::size_t hash_rational(const Rational& q) {
  return hash_mpz(q.get_num()) * 1000003u ^ hash_mpz(q.get_den());
}

// Exact complex number a + bi with rational a, b.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussianRational conj() const { return {re, -im}; }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  // |re| + |im|: a cheap exact upper bound of the modulus.
  Rational abs_bound() const { return abs(re) + abs(im); }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator*(const GaussianRational& a, const Rational& s) {
    return {a.re * s, a.im * s};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n2 = b.re * b.re + b.im * b.im;
    if (n2 == 0) throw std::domain_error("GaussianRational: division by zero");
    return {(a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2};
  }
  GaussianRational& operator+=(const GaussianRational& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  // Multiply by i^e, e >= 0.
  GaussianRational times_i_pow(unsigned e) const {
    switch (e & 3u) {
      case 0: return *this;
      case 1: return {-im, re};
      case 2: return {-re, -im};
      default: return {im, -re};
    }
  }
};

inline GaussianRational grat(long nre, long dre, long nim = 0, long dim = 1) {
  return {rat(nre, dre), rat(nim, dim)};
}

}  // namespace rotorforge

#endif  // ROTORFORGE_RATIONAL_HPP
