// Copyright 2026 The weakinv Authors
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

#include "weakinv/config.hpp"

using namespace weakinv;

TEST_CASE("key = value parsing with comments and dotted sections") {
    ConfigMap cfg = ConfigMap::from_string(R"(
# a comment line
kind = gkls-run
grid.t0 = 0       # trailing comment
grid.t1 = 2.5
grid.steps = 250
alphas = 0.5, 1.5, 2.0
flag = true
)");
    CHECK(cfg.get_string("kind", "") == "gkls-run");
    CHECK(cfg.get_double("grid.t0", -1.0) == 0.0);
    CHECK(cfg.get_double("grid.t1", -1.0) == 2.5);
    CHECK(cfg.get_int("grid.steps", 0) == 250);
    CHECK(cfg.get_bool("flag", false));
    const auto alphas = cfg.get_double_list("alphas", {});
    REQUIRE(alphas.size() == 3);
    CHECK(alphas[1] == 1.5);
    cfg.require_all_consumed();
}

TEST_CASE("malformed lines and values are rejected") {
    CHECK_THROWS_AS(ConfigMap::from_string("just a token\n"), ConfigError);
    ConfigMap bad_int = ConfigMap::from_string("steps = 1.5\n");
    CHECK_THROWS_AS(bad_int.get_int("steps", 0), ConfigError);
    ConfigMap bad_bool = ConfigMap::from_string("flag = maybe\n");
    CHECK_THROWS_AS(bad_bool.get_bool("flag", false), ConfigError);
    ConfigMap bad_number = ConfigMap::from_string("x = abc\n");
    CHECK_THROWS_AS(bad_number.get_double("x", 0.0), ConfigError);
}

TEST_CASE("unknown keys are rejected") {
    ConfigMap cfg = ConfigMap::from_string("kind = gkls-run\nunknown_key = 3\n");
    cfg.get_string("kind", "");
    CHECK_THROWS_AS(cfg.require_all_consumed(), ConfigError);
}

TEST_CASE("matrix literals") {
    const ComplexMatrix flip = parse_matrix_literal("0, 1; 1, 0");
    CHECK(flip(0, 1).real() == 1.0);
    CHECK(flip(1, 0).real() == 1.0);
    CHECK(flip(0, 0) == Complex(0.0, 0.0));

    const ComplexMatrix phase = parse_matrix_literal("1, 0; 0, 0:-1");
    CHECK(phase(1, 1) == Complex(0.0, -1.0));

    CHECK_THROWS_AS(parse_matrix_literal("1, 2; 3"), ConfigError);
    CHECK_THROWS_AS(parse_matrix_literal(""), ConfigError);
}

TEST_CASE("override merge order") {
    ConfigMap base = preset_config("dephasing");
    ConfigMap overlay = ConfigMap::from_string("grid.steps = 10\nout = other.csv\n");
    base.merge_override(overlay);
    CHECK(base.get_int("grid.steps", 0) == 10);
    CHECK(base.get_string("out", "") == "other.csv");
    CHECK(base.get_string("kind", "") == "gkls-run");
}

TEST_CASE("presets parse and carry their scenario kind") {
    for (const auto& name : preset_names()) {
        ConfigMap cfg = preset_config(name);
        CHECK_FALSE(cfg.get_string("kind", "").empty());
    }
    CHECK_THROWS_AS(preset_config("no-such-preset"), ConfigError);
}
