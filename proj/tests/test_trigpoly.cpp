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

#include <doctest.h>

#include <complex>

#include "rotorforge/domain.hpp"
#include "rotorforge/trigpoly.hpp"
#include "rotorforge/trigpoly_io.hpp"

using namespace rotorforge;

namespace {

// cos(phi_j - phi_i), 1-based sites
FourierFunction cos_bond(int n, int i, int j) {
  IntVec mu(n, 0);
  mu[i - 1] = -1;
  mu[j - 1] = 1;
  return FourierFunction::cosine(n, FreqVector(mu));
}
FourierFunction sin_bond(int n, int i, int j) {
  IntVec mu(n, 0);
  mu[i - 1] = -1;
  mu[j - 1] = 1;
  return FourierFunction::sine(n, FreqVector(mu));
}

std::complex<double> eval(const FourierFunction& f, std::vector<double> I,
                          std::vector<double> phi) {
  std::vector<std::complex<double>> ic(I.begin(), I.end()), pc(phi.begin(), phi.end());
  return f.evaluate(ic, pc);
}

// inverse linear form (nu . I)^{-1} as a bare function
FourierFunction inv_form(int n, IntVec nu) {
  Coefficient c;
  CoeffTerm t;
  t.c = GaussianRational(rat(1));
  t.mono = IntVec(n, 0);
  t.dens.emplace_back(LinearForm(std::move(nu)), 1);
  c.push_raw(std::move(t));
  c.normalize();
  FourierFunction f(n, true);
  f.set_mode(FreqVector(IntVec(n, 0)), std::move(c));
  return f;
}

}  // namespace

TEST_SUITE("trigpoly") {
  TEST_CASE("add: identity, doubling, cancellation") {
    FourierFunction f = cos_bond(2, 1, 2);
    CHECK((f + FourierFunction::zero(2) - f).is_zero());
    FourierFunction two = f + f;
    CHECK(eval(two, {0, 0}, {0.3, 1.1}).real() ==
          doctest::Approx(2 * std::cos(0.8)).epsilon(1e-14));
    CHECK((f + (-f)).is_zero());
  }

  TEST_CASE("mul: product-to-sum identity") {
    FourierFunction c = cos_bond(2, 1, 2);
    FourierFunction prod = c * c;  // cos^2 = 1/2 + cos(2 theta)/2
    IntVec mu2{-2, 2};
    FourierFunction expect =
        FourierFunction::constant(2, GaussianRational(rat(1, 2))) +
        FourierFunction::cosine(2, FreqVector(mu2)).scaled(GaussianRational(rat(1, 2)));
    CHECK((prod - expect).is_zero());
    CHECK((c * FourierFunction::constant(2, GaussianRational(rat(1))) - c).is_zero());
  }

  TEST_CASE("mul: I1 times its inverse is 1 despite different representations") {
    FourierFunction i1 = FourierFunction::action_monomial(2, IntVec{1, 0}, rat(1));
    FourierFunction prod = i1 * inv_form(2, IntVec{1, 0});
    CHECK((prod - FourierFunction::constant(2, GaussianRational(rat(1)))).is_zero());
  }

  TEST_CASE("differentiate_phi") {
    // d/dphi_1 cos(phi2-phi1) = sin(phi2-phi1)
    CHECK((cos_bond(2, 1, 2).differentiate_phi(1) - sin_bond(2, 1, 2)).is_zero());
    // resonant functions are annihilated by d/dphi_k
    CHECK(cos_bond(3, 1, 2).differentiate_phi(3).is_zero());
    CHECK_THROWS_AS(cos_bond(2, 1, 2).differentiate_phi(4), algebra_error);
  }

  TEST_CASE("differentiate_I") {
    FourierFunction h0 = FourierFunction::h0(2);
    FourierFunction i1 = FourierFunction::action_monomial(2, IntVec{1, 0}, rat(1));
    CHECK((h0.differentiate_I(1) - i1).is_zero());
    // d/dI2 (I2-I1)^{-1} = -(I2-I1)^{-2}
    FourierFunction inv = inv_form(2, IntVec{-1, 1});
    FourierFunction d = inv.differentiate_I(2);
    CHECK(eval(d, {1, 3}, {0, 0}).real() == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(cos_bond(3, 1, 2).differentiate_I(3).is_zero());
  }

  TEST_CASE("poisson bracket: antisymmetry and the hand-computed cases") {
    FourierFunction f = cos_bond(2, 1, 2);
    CHECK(poisson_bracket(f, f).is_zero());
    // {I1, cos(phi2-phi1)} = -d/dphi1 cos = -sin
    FourierFunction i1 = FourierFunction::action_monomial(2, IntVec{1, 0}, rat(1));
    CHECK((poisson_bracket(i1, f) + sin_bond(2, 1, 2)).is_zero());
    // {h0, chi0} = -f0_NR for the two-rotator cosine chain
    FourierFunction f0 = f.scaled(GaussianRational(rat(-1)));
    FourierFunction chi0 = f0.apply_Q(2);
    CHECK((poisson_bracket(FourierFunction::h0(2), chi0) + f0).is_zero());
  }

  TEST_CASE("angle_bracket is d/dI") {
    FourierFunction h0 = FourierFunction::h0(2);
    CHECK((angle_bracket(1, h0) -
           FourierFunction::action_monomial(2, IntVec{1, 0}, rat(1))).is_zero());
    CHECK(angle_bracket(2, cos_bond(2, 1, 2)).is_zero());
    // {phi_2, (I2-I1)^{-1} sin theta} = -(I2-I1)^{-2} sin theta
    FourierFunction g = inv_form(2, IntVec{-1, 1}) * sin_bond(2, 1, 2);
    FourierFunction expect =
        (inv_form(2, IntVec{-1, 1}) * inv_form(2, IntVec{-1, 1}) * sin_bond(2, 1, 2))
            .scaled(GaussianRational(rat(-1)));
    CHECK((angle_bracket(2, g) - expect).is_zero());
  }

  TEST_CASE("split_resonant partitions and is idempotent") {
    FourierFunction f = cos_bond(3, 1, 2) + cos_bond(3, 2, 3);
    auto [res, non] = f.split_resonant(3);
    CHECK((res - cos_bond(3, 1, 2)).is_zero());
    CHECK((non - cos_bond(3, 2, 3)).is_zero());
    CHECK((res + non - f).is_zero());
    CHECK(res.split_resonant(3).second.is_zero());
    CHECK(non.split_resonant(3).first.is_zero());
  }

  TEST_CASE("apply_Q closed forms and the homological identity") {
    // Q cos(theta) = sin(theta)/(I_k - I_{k-1}) for theta = phi_k - phi_{k-1}
    FourierFunction qc = cos_bond(2, 1, 2).apply_Q(2);
    FourierFunction expect = inv_form(2, IntVec{-1, 1}) * sin_bond(2, 1, 2);
    CHECK((qc - expect).is_zero());
    // Q sin(theta) = -cos(theta)/(I_k - I_{k-1})
    FourierFunction qs = sin_bond(2, 1, 2).apply_Q(2);
    FourierFunction expect2 =
        (inv_form(2, IntVec{-1, 1}) * cos_bond(2, 1, 2)).scaled(GaussianRational(rat(-1)));
    CHECK((qs - expect2).is_zero());
    // Q of a resonant function vanishes
    CHECK(cos_bond(3, 1, 2).apply_Q(3).is_zero());

    // sum_i I_i d/dphi_i (Qf) = f^NR, exactly, for a messier f
    FourierFunction f = cos_bond(3, 1, 2) + sin_bond(3, 2, 3) * cos_bond(3, 1, 3) +
                        cos_bond(3, 2, 3).scaled(grat(1, 3));
    FourierFunction qf = f.apply_Q(3);
    FourierFunction lhs(3, true);
    for (int i = 1; i <= 3; ++i) {
      IntVec pw(3, 0);
      pw[i - 1] = 1;
      lhs = lhs + FourierFunction::action_monomial(3, pw, rat(1)) * qf.differentiate_phi(i);
    }
    CHECK((lhs - f.nonresonant_part(3)).is_zero());
    // real in, real out
    CHECK(qf.real_flagged());
    qf.check_invariants();
  }

  TEST_CASE("lie_series") {
    FourierFunction f = cos_bond(2, 1, 2);
    std::vector<Rational> ones{rat(1), rat(1), rat(1)};
    CHECK((lie_series(f, FourierFunction::zero(2), 0, 2, ones) - f).is_zero());
    // first correction of e^chi h0 equals -f0_NR
    FourierFunction f0 = f.scaled(GaussianRational(rat(-1)));
    FourierFunction chi = f0.apply_Q(2);
    std::vector<Rational> w1{rat(1)};
    FourierFunction corr = lie_series(FourierFunction::h0(2), chi, 1, 1, w1);
    CHECK((corr + f0).is_zero());
  }

  TEST_CASE("evaluate") {
    FourierFunction h0 = FourierFunction::h0(3);
    CHECK(eval(h0, {0, 0, 7}, {0.1, 0.2, 0.3}).real() == doctest::Approx(24.5));
    CHECK(std::abs(eval(cos_bond(2, 1, 2), {0, 0}, {0, M_PI / 2})) < 1e-15);
    // chi0 of the two-rotator chain at I=(0,L): -1/L
    FourierFunction chi0 = cos_bond(2, 1, 2).scaled(GaussianRational(rat(-1))).apply_Q(2);
    CHECK(eval(chi0, {0, 5}, {0, M_PI / 2}).real() == doctest::Approx(-0.2).epsilon(1e-14));
    // vanishing denominator reports the offending form
    CHECK_THROWS_WITH_AS(static_cast<void>(eval(chi0, {3, 3}, {0, 0})),
                         doctest::Contains("(-1,1)"), denominator_error);
    // reality of evaluation at real points
    auto v = eval(chi0, {0.3, 9}, {1.2, 2.1});
    CHECK(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v.real())));
  }

  TEST_CASE("is_zero distinguishes zero from nonzero") {
    CHECK_FALSE(cos_bond(2, 1, 2).is_zero());
    // representation-level zero needing common denominators:
    // 1/(I1) - I2/(I1 I2)
    FourierFunction a = inv_form(2, IntVec{1, 0});
    FourierFunction b = FourierFunction::action_monomial(2, IntVec{0, 1}, rat(1)) *
                        inv_form(2, IntVec{1, 0}) * inv_form(2, IntVec{0, 1});
    CHECK((a - b).is_zero());
    CHECK_FALSE((a + b).is_zero());
  }

  TEST_CASE("term budget fails loudly") {
    const std::size_t before = term_budget();
    set_term_budget(8);
    FourierFunction big(3, true);
    for (int m = 1; m <= 3; ++m) {
      IntVec mu(3, 0);
      mu[0] = m;
      mu[2] = 1;
      big = big + FourierFunction::cosine(3, FreqVector(mu));
    }
    CHECK_THROWS_AS(static_cast<void>(big * big), term_budget_error);
    set_term_budget(before);
  }

  TEST_CASE("serialization round-trips bit-exactly") {
    FourierFunction chi = cos_bond(3, 2, 3).scaled(grat(-3, 7, 1, 5)).apply_Q(3) +
                          FourierFunction::h0(3).scaled(GaussianRational(rat(2, 9)));
    const std::string text = serialize(chi);
    FourierFunction back = parse_fourier(text);
    CHECK(serialize(back) == text);
    CHECK((back - chi).is_zero());
    CHECK(back.real_flagged() == chi.real_flagged());
    CHECK_THROWS_AS(parse_fourier("begin fourier n=2 real=1\nmu=(1)\nend fourier"),
                    parse_error);
  }

  TEST_CASE("sup norm estimate") {
    // constants are exact
    FourierFunction c = FourierFunction::constant(2, grat(-3, 4));
    DomainSpec dom(10.0, 0.05, 0.5, 2);
    CHECK(sup_norm_estimate(c, dom, 16) == doctest::Approx(0.75));
    // |cos| on the strip approaches cosh(2 sigma) from below
    double est = sup_norm_estimate(cos_bond(2, 1, 2), dom, 4000);
    CHECK(est <= std::cosh(1.0) + 1e-9);
    CHECK(est > 0.95 * std::cosh(1.0));
    double est_small = sup_norm_estimate(cos_bond(2, 1, 2), dom, 200);
    CHECK(est_small <= est);  // monotone in budget
    // radius guard
    FourierFunction chi = cos_bond(2, 1, 2).apply_Q(2);
    CHECK_THROWS_AS(static_cast<void>(sup_norm_estimate(chi, DomainSpec(10, 0.4, 0.5, 2), 8)),
                    domain_error);
    CHECK_THROWS_AS(DomainSpec(10, 0.1, 1.5, 2), domain_error);
  }
}
