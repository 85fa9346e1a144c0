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

#include <cmath>

#include "rotorforge/chain.hpp"
#include "rotorforge/normal_form.hpp"

using namespace rotorforge;

TEST_SUITE("chain") {
  TEST_CASE("parse_potential presets and harmonic lists") {
    Potential cosine = Potential::parse("cosine");
    REQUIRE(cosine.modes().size() == 1);
    CHECK(cosine.modes().at(1) == grat(-1, 2));
    CHECK(cosine.value(0.0) == doctest::Approx(-1.0));

    // (cos psi - 1)^2/2 = 3/4 - cos psi + cos(2 psi)/4, constant dropped
    Potential dq = Potential::parse("degenerate_quartic");
    REQUIRE(dq.modes().size() == 2);
    CHECK(dq.modes().at(1) == grat(-1, 2));
    CHECK(dq.modes().at(2) == grat(1, 8));
    for (double psi : {0.3, 1.7, 4.0})
      CHECK(dq.value(psi) + 0.75 ==
            doctest::Approx(0.5 * std::pow(std::cos(psi) - 1, 2)).epsilon(1e-14));

    Potential custom = Potential::parse("1: 1/2, 3: -1/4");
    CHECK(custom.modes().at(1) == grat(1, 2));
    CHECK(custom.modes().at(3) == grat(-1, 4));
    for (double psi : {0.0, 0.9, 2.2})
      CHECK(custom.value(psi) ==
            doctest::Approx(std::cos(psi) - std::cos(3 * psi) / 2).epsilon(1e-14));

    CHECK_THROWS_AS(Potential::parse("0: 1/2"), assumption_violation);
    CHECK_THROWS_AS(Potential::parse("1: 1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Potential::parse("1: 1/2, 1: 1/3"), assumption_violation);
    CHECK_THROWS_AS(Potential::parse("nonsense"), assumption_violation);
  }

  TEST_CASE("check_nondegenerate") {
    CHECK(Potential::cosine().check_nondegenerate());
    double witness = -1;
    CHECK_FALSE(Potential::degenerate_quartic().check_nondegenerate(&witness));
    CHECK(std::abs(witness) < 1e-7);  // U' = U'' = 0 at psi = 0
    // regression fixture: cos psi - cos(3 psi)/2 has no common zero
    // (closest approach of (U', U'') to the origin is ~1.03)
    CHECK(Potential::parse("1: 1/2, 3: -1/4").check_nondegenerate());
  }

  TEST_CASE("chain validation") {
    CHECK_THROWS_AS(ChainSpec::uniform_cosine(1, 1, 1.0), assumption_violation);
    CHECK_THROWS_AS(ChainSpec::uniform_cosine(3, 4, 1.0), assumption_violation);
    ChainSpec bad;
    bad.n = 3;
    bad.k = 3;
    bad.gamma = 1;
    bad.potentials = {Potential::degenerate_quartic(), Potential::cosine()};
    CHECK_THROWS_AS(bad.validate(), assumption_violation);
    bad.degenerate_allowed = true;
    CHECK_NOTHROW(bad.validate());
  }

  TEST_CASE("hamiltonian values") {
    ChainSpec c3 = ChainSpec::uniform_cosine(3, 3, 1.0);
    State s{{0, 0, 7}, {0, 0, 0}};
    CHECK(hamiltonian(c3, s) == doctest::Approx(24.5 - 2.0));
    ChainSpec c4 = ChainSpec::uniform_cosine(4, 4, 1.0);
    State rest{{0, 0, 0, 0}, {0, 0, 0, 0}};
    CHECK(hamiltonian(c4, rest) == doctest::Approx(-3.0));
  }

  TEST_CASE("hamiltonian agrees with the exact algebra at seeded states") {
    ChainSpec chain = ChainSpec::uniform_cosine(3, 3, 1.0);
    InitialSplit init = build_initial(chain);
    FourierFunction H = init.h0 + init.f0_R + init.f0_NR;
    std::uint64_t x = 12345;
    auto rnd = [&x]() {
      x ^= x << 13;
      x ^= x >> 7;
      x ^= x << 17;
      return (x >> 11) * 0x1.0p-53;
    };
    for (int p = 0; p < 100; ++p) {
      State s{{6 * rnd() - 3, 6 * rnd() - 3, 6 * rnd() - 3},
              {2 * M_PI * rnd(), 2 * M_PI * rnd(), 2 * M_PI * rnd()}};
      std::vector<std::complex<double>> I(s.I.begin(), s.I.end()), phi(s.phi.begin(), s.phi.end());
      const double ha = hamiltonian(chain, s);
      const double hb = H.evaluate(I, phi).real();
      CHECK(std::abs(ha - hb) <= 1e-12 * std::max(1.0, std::abs(ha)));
    }
  }

  TEST_CASE("forces: sign convention and translation invariance") {
    ChainSpec c2 = ChainSpec::uniform_cosine(2, 2, 1.0);
    State s{{0, 0}, {0, M_PI / 2}};
    auto F = forces(c2, s);
    CHECK(F[0] == doctest::Approx(1.0));   // sin(pi/2)
    CHECK(F[1] == doctest::Approx(-1.0));
    // at the minimum everything rests
    ChainSpec c4 = ChainSpec::uniform_cosine(4, 4, 1.0);
    for (double f : forces(c4, State{{0, 0, 0, 0}, {0, 0, 0, 0}})) CHECK(f == 0.0);
    // sum of forces telescopes to zero (global rotation symmetry)
    std::uint64_t x = 777;
    auto rnd = [&x]() {
      x = x * 6364136223846793005ull + 1442695040888963407ull;
      return (x >> 11) * 0x1.0p-53;
    };
    for (int p = 0; p < 50; ++p) {
      State sp{{0, 0, 0, 0},
               {2 * M_PI * rnd(), 2 * M_PI * rnd(), 2 * M_PI * rnd(), 2 * M_PI * rnd()}};
      auto Fp = forces(c4, sp);
      double sum = 0, scale = 0;
      for (double f : Fp) {
        sum += f;
        scale = std::max(scale, std::abs(f));
      }
      CHECK(std::abs(sum) <= 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale));
    }
  }

  TEST_CASE("forces match central finite differences of H") {
    ChainSpec chain = ChainSpec::uniform_cosine(4, 3, 1.0);
    std::uint64_t x = 424242;
    auto rnd = [&x]() {
      x = x * 6364136223846793005ull + 1442695040888963407ull;
      return (x >> 11) * 0x1.0p-53;
    };
    const double h = 1e-6;
    for (int p = 0; p < 100; ++p) {
      State s{{rnd(), rnd(), rnd(), rnd()},
              {2 * M_PI * rnd(), 2 * M_PI * rnd(), 2 * M_PI * rnd(), 2 * M_PI * rnd()}};
      auto F = forces(chain, s);
      for (int i = 0; i < 4; ++i) {
        State sp = s, sm = s;
        sp.phi[i] += h;
        sm.phi[i] -= h;
        const double dHdphi = (hamiltonian(chain, sp) - hamiltonian(chain, sm)) / (2 * h);
        CHECK(std::abs(F[i] + dHdphi) <= 1e-8);
      }
    }
  }
}
