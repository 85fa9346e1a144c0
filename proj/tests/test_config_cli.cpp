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

#include "rotorforge/config.hpp"

using namespace rotorforge;

TEST_SUITE("config") {
  TEST_CASE("minimal config fills defaults") {
    RunConfig rc = parse_config(
        "[chain]\n"
        "n = 3\n"
        "k = 3\n"
        "gamma = 1\n"
        "potentials = cosine, cosine\n");
    CHECK(rc.chain.n == 3);
    CHECK(rc.chain.gamma == 1.0);
    CHECK(rc.integrator.scheme == Scheme::yoshida4);
    CHECK(rc.integrator.steps_per_fast_period == 64);
    CHECK(rc.experiment_kind == "simulate");
    CHECK(rc.output.dir == "out");
  }

  TEST_CASE("full config with custom potential") {
    RunConfig rc = parse_config(
        "[chain]\n"
        "n = 3\n"
        "k = 2\n"
        "gamma = 0.5\n"
        "potentials = {1: 1/2, 3: -1/4}, cosine\n"
        "[integrator]\n"
        "scheme = strang2\n"
        "steps_per_fast_period = 128\n"
        "t_final = 250\n"
        "[experiment]\n"
        "kind = scaling\n"
        "L_list = 10, 20, 40\n"
        "seeds = 99\n"
        "[output]\n"
        "dir = results\n"
        "formats = csv\n");
    CHECK(rc.chain.k == 2);
    CHECK(rc.chain.potentials[0].modes().at(3) == grat(-1, 4));
    CHECK(rc.integrator.scheme == Scheme::strang2);
    CHECK(rc.experiment.L_list.size() == 3);
    CHECK(rc.experiment.seed == 99);
    CHECK(rc.output.csv);
    CHECK_FALSE(rc.output.json);
  }

  TEST_CASE("errors carry line numbers and field names") {
    // k > n names both fields
    CHECK_THROWS_WITH_AS(
        parse_config("[chain]\nn = 2\nk = 3\ngamma = 1\npotentials = cosine\n"),
        doctest::Contains("k = 3"), config_error);
    // duplicate key reports its line
    CHECK_THROWS_WITH_AS(
        parse_config("[chain]\nn = 2\nn = 3\nk = 2\ngamma = 1\npotentials = cosine\n"),
        doctest::Contains("line 3"), config_error);
    // unknown keys are hard errors
    CHECK_THROWS_WITH_AS(
        parse_config("[chain]\nn = 2\nk = 2\ngamma = 1\npotentials = cosine\nbogus = 1\n"),
        doctest::Contains("bogus"), config_error);
    CHECK_THROWS_AS(parse_config("[chain]\nn = 2\nk = 2\ngamma = one\npotentials = cosine\n"),
                    config_error);
    // scaling requires >= 3 values of L
    CHECK_THROWS_AS(parse_config("[chain]\nn = 2\nk = 2\ngamma = 1\npotentials = cosine\n"
                                 "[experiment]\nkind = scaling\nL_list = 10, 20\n"),
                    config_error);
    // potential count must be n-1
    CHECK_THROWS_WITH_AS(
        parse_config("[chain]\nn = 4\nk = 2\ngamma = 1\npotentials = cosine, cosine\n"),
        doctest::Contains("n-1"), config_error);
  }

  TEST_CASE("config hash is stable across formatting and key order") {
    RunConfig a = parse_config(
        "[chain]\nn = 3\nk = 3\ngamma = 1\npotentials = cosine, cosine\n"
        "[experiment]\nL_list = 10, 20, 40\n");
    RunConfig b = parse_config(
        "[experiment]\n L_list =  10,20,  40\n"
        "[chain]\n gamma =  1\n n=3\n k =3\n potentials =   cosine ,cosine\n");
    CHECK(a.config_hash() == b.config_hash());
    RunConfig c = parse_config(
        "[chain]\nn = 3\nk = 3\ngamma = 2\npotentials = cosine, cosine\n"
        "[experiment]\nL_list = 10, 20, 40\n");
    CHECK(a.config_hash() != c.config_hash());
  }
}
