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

#ifndef ROTORFORGE_TRIGPOLY_IO_HPP
#define ROTORFORGE_TRIGPOLY_IO_HPP

// Line-oriented text format for FourierFunction, one mode per line:
//
//   begin fourier n=3 real=1
//   mu=(0,-1,1) ; -1/2 + 0/1 i * I^(0,0,0) / [(0,-1,1)^2]
//   end fourier
//
// Terms after the mode are ';'-separated; rationals are exact p/q. The writer
// emits canonical order (modes lexicographic, terms in key order), so
// serialize/parse round-trips are bit-exact.

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "rotorforge/trigpoly.hpp"

namespace rotorforge {

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace io_detail {

inline std::string intvec_str(const IntVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s + ")";
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  bool eat_word(std::string_view w) {
    skip_ws();
    if (s_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }
  long integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected integer");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }
  Rational rational() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ == start) fail("expected rational");
    return parse_rational(s_.substr(start, pos_ - start));
  }
  IntVec intvec() {
    expect('(');
    IntVec v;
    if (!eat(')')) {
      v.push_back(static_cast<std::int32_t>(integer()));
      while (eat(',')) v.push_back(static_cast<std::int32_t>(integer()));
      expect(')');
    }
    return v;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw parse_error(why + " at column " + std::to_string(pos_ + 1) + " in: " +
                      std::string(s_));
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace io_detail

inline std::string serialize_term(const CoeffTerm& t) {
  std::string s = to_string_frac(t.c.re) + " + " + to_string_frac(t.c.im) + " i * I^" +
                  io_detail::intvec_str(t.mono);
  if (!t.dens.empty()) {
    s += " / [";
    for (std::size_t i = 0; i < t.dens.size(); ++i) {
      if (i) s += ' ';
      s += t.dens[i].first.str() + "^" + std::to_string(t.dens[i].second);
    }
    s += ']';
  }
  return s;
}

inline void serialize(const FourierFunction& f, std::ostream& os) {
  os << "begin fourier n=" << f.n() << " real=" << (f.real_flagged() ? 1 : 0) << "\n";
  for (const auto& [mu, c] : f.modes()) {
    os << "mu=" << io_detail::intvec_str(mu.e);
    for (const auto& t : c.terms()) os << " ; " << serialize_term(t);
    os << "\n";
  }
  os << "end fourier\n";
}

inline std::string serialize(const FourierFunction& f) {
  std::ostringstream os;
  serialize(f, os);
  return os.str();
}

inline FourierFunction parse_fourier(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw parse_error("empty input");
  io_detail::Cursor head(line);
  if (!head.eat_word("begin fourier")) head.fail("expected 'begin fourier'");
  if (!head.eat_word("n=")) head.fail("expected 'n='");
  const int n = static_cast<int>(head.integer());
  if (n < 1) throw parse_error("n must be positive");
  if (!head.eat_word("real=")) head.fail("expected 'real='");
  const bool real = head.integer() != 0;

  FourierFunction f(n, real);
  while (std::getline(is, line)) {
    io_detail::Cursor cur(line);
    if (cur.eat_word("end fourier")) return f;
    if (!cur.eat_word("mu=")) cur.fail("expected 'mu=' or 'end fourier'");
    IntVec mu = cur.intvec();
    if (static_cast<int>(mu.size()) != n) cur.fail("mode length != n");
    Coefficient c;
    while (cur.eat(';')) {
      CoeffTerm t;
      t.c.re = cur.rational();
      cur.expect('+');
      t.c.im = cur.rational();
      if (!cur.eat_word("i")) cur.fail("expected 'i'");
      cur.expect('*');
      if (!cur.eat_word("I^")) cur.fail("expected 'I^'");
      t.mono = cur.intvec();
      if (static_cast<int>(t.mono.size()) != n) cur.fail("monomial length != n");
      if (cur.eat('/')) {
        cur.expect('[');
        while (!cur.eat(']')) {
          IntVec form = cur.intvec();
          if (static_cast<int>(form.size()) != n) cur.fail("form length != n");
          cur.expect('^');
          long p = cur.integer();
          if (p <= 0) cur.fail("denominator power must be positive");
          t.dens.emplace_back(LinearForm(std::move(form)), static_cast<std::int32_t>(p));
        }
      }
      c.push_raw(std::move(t));
    }
    if (!cur.at_end()) cur.fail("trailing garbage");
    c.normalize();
    f.set_mode(FreqVector(std::move(mu)), std::move(c));
  }
  throw parse_error("missing 'end fourier'");
}

inline FourierFunction parse_fourier(const std::string& text) {
  std::istringstream is(text);
  return parse_fourier(is);
}

}  // namespace rotorforge

#endif  // ROTORFORGE_TRIGPOLY_IO_HPP
