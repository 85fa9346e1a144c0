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

// Property checks on seeded random functions: the structural identities the
// whole construction leans on.

#include <doctest.h>

#include "rotorforge/experiments.hpp"
#include "rotorforge/trigpoly_io.hpp"

using namespace rotorforge;

namespace {

struct Gen {
  SplitMix rng{0xfeedface2026ull};
  FourierFunction operator()(int n, bool with_mono = true) {
    return random_trig(rng, n, 2, 2, with_mono);
  }
};

}  // namespace

TEST_SUITE("algebra properties") {
  TEST_CASE("poisson antisymmetry on random functions") {
    Gen gen;
    for (int s = 0; s < 12; ++s) {
      const int n = 2 + s % 3;
      FourierFunction f = gen(n), g = gen(n);
      CHECK((poisson_bracket(f, g) + poisson_bracket(g, f)).is_zero());
    }
  }

  TEST_CASE("jacobi identity on a seeded set") {
    Gen gen;
    for (int s = 0; s < 6; ++s) {
      const int n = 2 + s % 2;
      FourierFunction f = gen(n), g = gen(n), h = gen(n, false);
      FourierFunction cyc = poisson_bracket(poisson_bracket(f, g), h) +
                            poisson_bracket(poisson_bracket(g, h), f) +
                            poisson_bracket(poisson_bracket(h, f), g);
      CHECK(cyc.is_zero());
    }
  }

  TEST_CASE("leibniz rule") {
    Gen gen;
    for (int s = 0; s < 6; ++s) {
      const int n = 2 + s % 2;
      FourierFunction f = gen(n), g = gen(n), h = gen(n);
      FourierFunction lhs = poisson_bracket(f * g, h);
      FourierFunction rhs = f * poisson_bracket(g, h) + poisson_bracket(f, h) * g;
      CHECK((lhs - rhs).is_zero());
    }
  }

  TEST_CASE("homological identity for every random finite-mode f") {
    Gen gen;
    for (int s = 0; s < 10; ++s) {
      const int n = 2 + s % 3;
      const int k = 2 + s % (n - 1 > 0 ? n - 1 : 1);
      FourierFunction f = gen(n);
      FourierFunction qf = f.apply_Q(k);
      CHECK(qf.resonant_part(k).is_zero());
      CHECK((poisson_bracket(FourierFunction::h0(n), qf) + f.nonresonant_part(k)).is_zero());
      // Q annihilates resonant parts
      CHECK(f.resonant_part(k).apply_Q(k).is_zero());
    }
  }

  TEST_CASE("operations preserve reality, numerically too") {
    Gen gen;
    SplitMix rng(0x77411ull);
    for (int s = 0; s < 8; ++s) {
      const int n = 2 + s % 3;
      FourierFunction f = gen(n), g = gen(n);
      FourierFunction ops[] = {f + g, f * g, f.differentiate_phi(1), f.differentiate_I(n),
                               poisson_bracket(f, g), f.apply_Q(2)};
      std::vector<double> I(n), phi(n);
      for (int i = 0; i < n; ++i) {
        I[i] = 3 * rng.symmetric();
        phi[i] = 2 * M_PI * rng.uniform();
      }
      for (const auto& h : ops) {
        CHECK(h.real_flagged());
        h.check_invariants();
        std::vector<std::complex<double>> ic(I.begin(), I.end()), pc(phi.begin(), phi.end());
        try {
          auto v = h.evaluate(ic, pc);
          CHECK(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v.real())));
        } catch (const denominator_error&) {
          // random action point hit a form kernel; fine
        }
      }
    }
  }

  TEST_CASE("evaluation is a homomorphism at seeded points") {
    Gen gen;
    SplitMix rng(0xabc123ull);
    int tested = 0;
    for (int s = 0; s < 25 && tested < 100; ++s) {
      const int n = 2 + s % 3;
      FourierFunction f = gen(n), g = gen(n);
      for (int p = 0; p < 5; ++p) {
        std::vector<std::complex<double>> I(n), phi(n);
        for (int i = 0; i < n; ++i) {
          I[i] = {3 * rng.symmetric(), 0.2 * rng.symmetric()};
          phi[i] = {2 * M_PI * rng.uniform(), 0.3 * rng.symmetric()};
        }
        const auto fg_sum = (f + g).evaluate(I, phi);
        const auto fg_mul = (f * g).evaluate(I, phi);
        const auto fv = f.evaluate(I, phi), gv = g.evaluate(I, phi);
        CHECK(std::abs(fg_sum - (fv + gv)) <= 1e-12 * (1 + std::abs(fv + gv)));
        CHECK(std::abs(fg_mul - fv * gv) <= 1e-12 * (1 + std::abs(fv * gv)));
        ++tested;
      }
    }
    CHECK(tested == 100);
  }

  TEST_CASE("serialization round-trip on random functions") {
    Gen gen;
    for (int s = 0; s < 10; ++s) {
      const int n = 2 + s % 3;
      FourierFunction f = gen(n).apply_Q(2) + gen(n);
      const std::string text = serialize(f);
      CHECK(serialize(parse_fourier(text)) == text);
    }
  }

  TEST_CASE("lie series tail scales like L^{l0 (z-1)}") {
    // chi = Q f0 is O(L^-1) (z = -1); the l0 = 2 tail of e^chi f0 must then
    // fit exponent 2 (z-1) = -4. (The three-site chain: the two-rotator one
    // closes after one bracket and its tail vanishes identically.)
    FourierFunction f0 = FourierFunction::cosine(3, FreqVector(IntVec{-1, 1, 0})) +
                         FourierFunction::cosine(3, FreqVector(IntVec{0, -1, 1}));
    f0 = f0.scaled(GaussianRational(rat(-1)));
    FourierFunction chi = f0.apply_Q(3);
    std::vector<Rational> w{rat(1), rat(1), rat(1)};
    FourierFunction tail = lie_series(f0, chi, 2, 4, w);
    REQUIRE_FALSE(tail.is_zero());
    std::vector<std::pair<double, double>> pts;
    for (double L : {10., 20., 40., 80.})
      pts.emplace_back(L, sup_norm_estimate(tail, default_domain(tail, L, 3), 400));
    ScalingFit fit = fit_scaling(pts);
    CHECK(fit.exponent == doctest::Approx(-4.0).epsilon(0.075));  // within +-0.3
  }

  TEST_CASE("appendix inequalities on seeded random functions") {
    ExperimentConfig cfg;
    cfg.chain = ChainSpec::uniform_cosine(3, 3, 1.0);
    cfg.norm_budget = 128;
    BoundsReport rep = appendix_bound_checks(cfg, 40);
    for (const auto& v : rep.violation_details) MESSAGE(v);
    CHECK(rep.violations == 0);
  }
}
