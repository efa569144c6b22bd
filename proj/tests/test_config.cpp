//
// Copyright 2026 The binldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "binldp/config.hpp"
#include "binldp/core.hpp"
#include "doctest.h"

namespace {

// The reference experiment shipped in configs/base.json, inlined so the test
// does not depend on the source tree layout.
const char* kBaseJson = R"json({
  "n": 2,
  "d": 10,
  "T": 100,
  "N": 250,
  "power": [10.0, 10.0],
  "G": 4.0,
  "D": 4.0,
  "p": 0.5,
  "delta": 0.01,
  "eps_budget": 4.0,
  "beta": 0.001,
  "seed": 20260819,
  "l_max": 64,
  "m_max": 1048576,
  "samples_per_client": 5000
})json";

}  // namespace

TEST_CASE("parsing the reference config fills every field") {
  const binldp::ExperimentConfig cfg = binldp::parse_config(kBaseJson);
  CHECK(cfg.n == 2);
  CHECK(cfg.d == 10);
  CHECK(cfg.T == 100);
  CHECK(cfg.N == 250);
  REQUIRE(cfg.power.size() == 2);
  CHECK(cfg.power[0] == 10.0);
  CHECK(cfg.power[1] == 10.0);
  CHECK(cfg.G == 4.0);
  CHECK(cfg.D == 4.0);
  CHECK(cfg.p == 0.5);
  CHECK(cfg.delta == 0.01);
  CHECK(cfg.eps_budget == 4.0);
  CHECK(cfg.beta == 0.001);
  CHECK(cfg.seed == 20260819);
  CHECK(cfg.l_max == 64);
  CHECK(cfg.m_max == 1048576);
  CHECK(cfg.samples_per_client == 5000);
  // Optionals left at their unset markers.
  CHECK(cfg.lambda == binldp::kUnset);
  CHECK(cfg.mu == binldp::kUnset);
  CHECK(cfg.b_p == binldp::kUnset);
  CHECK(cfg.c_p == binldp::kUnset);
}

TEST_CASE("unknown keys are rejected by name") {
  std::string text(kBaseJson);
  text.insert(text.rfind('}'), R"(, "epd_budget": 3.0)");
  try {
    binldp::parse_config(text);
    FAIL("expected ValidationError");
  } catch (const binldp::ValidationError& e) {
    bool named = false;
    for (const auto& v : e.violations()) {
      if (v.find("epd_budget") != std::string::npos) named = true;
    }
    CHECK(named);
  }
}

TEST_CASE("missing required keys are rejected by name") {
  // Drop "delta" from the document.
  std::string text(kBaseJson);
  const auto pos = text.find("\"delta\": 0.01,\n");
  REQUIRE(pos != std::string::npos);
  text.erase(pos, std::string("\"delta\": 0.01,\n").size());
  try {
    binldp::parse_config(text);
    FAIL("expected ValidationError");
  } catch (const binldp::ValidationError& e) {
    bool named = false;
    for (const auto& v : e.violations()) {
      if (v.find("delta") != std::string::npos) named = true;
    }
    CHECK(named);
  }
}

TEST_CASE("exactly one of power and snr_db") {
  // Both present: rejected.
  std::string both(kBaseJson);
  both.insert(both.rfind('}'), R"(, "snr_db": 10.0)");
  CHECK_THROWS_AS(binldp::parse_config(both), binldp::ValidationError);

  // snr_db alone: expanded to a full power vector, one entry per client.
  std::string snr_only(kBaseJson);
  const auto pos = snr_only.find("\"power\": [10.0, 10.0],\n");
  REQUIRE(pos != std::string::npos);
  snr_only.erase(pos, std::string("\"power\": [10.0, 10.0],\n").size());
  snr_only.insert(snr_only.rfind('}'), R"(, "snr_db": 10.0)");
  const binldp::ExperimentConfig cfg = binldp::parse_config(snr_only);
  REQUIRE(cfg.power.size() == 2);
  CHECK(cfg.power[0] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(cfg.power[1] == doctest::Approx(10.0).epsilon(1e-12));

  // Neither: rejected.
  std::string neither(kBaseJson);
  const auto pos2 = neither.find("\"power\": [10.0, 10.0],\n");
  REQUIRE(pos2 != std::string::npos);
  neither.erase(pos2, std::string("\"power\": [10.0, 10.0],\n").size());
  CHECK_THROWS_AS(binldp::parse_config(neither), binldp::ValidationError);
}

TEST_CASE("power array length must match n") {
  std::string text(kBaseJson);
  const auto pos = text.find("[10.0, 10.0]");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, std::string("[10.0, 10.0]").size(), "[10.0]");
  CHECK_THROWS_AS(binldp::parse_config(text), binldp::ValidationError);
}

TEST_CASE("an unbounded privacy budget is spelled \"inf\"") {
  std::string text(kBaseJson);
  const auto pos = text.find("\"eps_budget\": 4.0");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, std::string("\"eps_budget\": 4.0").size(),
               "\"eps_budget\": \"inf\"");
  const binldp::ExperimentConfig cfg = binldp::parse_config(text);
  CHECK(std::isinf(cfg.eps_budget));
  CHECK(cfg.eps_budget > 0);

  // The echo round-trips the spelling.
  const std::string echoed = binldp::config_to_json(cfg);
  CHECK(echoed.find("\"inf\"") != std::string::npos);
  const binldp::ExperimentConfig again = binldp::parse_config(echoed);
  CHECK(std::isinf(again.eps_budget));
}

TEST_CASE("lambda and mu are optional but validated when present") {
  std::string text(kBaseJson);
  text.insert(text.rfind('}'), R"(, "lambda": 0.5, "mu": 2.0)");
  const binldp::ExperimentConfig cfg = binldp::parse_config(text);
  CHECK(cfg.lambda == 0.5);
  CHECK(cfg.mu == 2.0);

  std::string bad(kBaseJson);
  bad.insert(bad.rfind('}'), R"(, "lambda": -1.0)");
  CHECK_THROWS_AS(binldp::parse_config(bad), binldp::ValidationError);
}

TEST_CASE("config hash is stable and collision-sensitive") {
  const binldp::ExperimentConfig cfg = binldp::parse_config(kBaseJson);
  // Pinned: output files embed this prefix, so it must not drift across
  // refactors (run artifacts reference their config by it).
  CHECK(binldp::config_hash_hex(cfg) == "2a6f55c2");

  binldp::ExperimentConfig other = cfg;
  other.seed += 1;
  CHECK(binldp::config_hash(other) != binldp::config_hash(cfg));
  other = cfg;
  other.T = 101;
  CHECK(binldp::config_hash(other) != binldp::config_hash(cfg));
}

TEST_CASE("echo round-trips to an identical config") {
  const binldp::ExperimentConfig cfg = binldp::parse_config(kBaseJson);
  const binldp::ExperimentConfig back =
      binldp::parse_config(binldp::config_to_json(cfg));
  CHECK(binldp::config_hash(back) == binldp::config_hash(cfg));
  CHECK(back.power == cfg.power);
  CHECK(back.seed == cfg.seed);
  CHECK(back.m_max == cfg.m_max);
}

TEST_CASE("load_config reads a file and reports a bad path") {
  const std::string path = "test_config_roundtrip.json";
  {
    std::ofstream out(path, std::ios::binary);
    out << kBaseJson;
  }
  const binldp::ExperimentConfig cfg = binldp::load_config(path);
  CHECK(cfg.N == 250);
  std::remove(path.c_str());

  CHECK_THROWS_AS(binldp::load_config("does_not_exist_8531.json"),
                  binldp::ValidationError);
}

TEST_CASE("malformed JSON is a config error, not a crash") {
  CHECK_THROWS_AS(binldp::parse_config("{ not json"), binldp::ValidationError);
  CHECK_THROWS_AS(binldp::parse_config("[1,2,3]"), binldp::ValidationError);
}
