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
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "binldp/core.hpp"
#include "binldp/privacy.hpp"
#include "binldp/quantizer.hpp"
#include "doctest.h"
#include "reference_formulas.hpp"

namespace {

using binldp::BinomialMechanismConfig;
using binldp::MechanismConstants;
using binldp::Rng;
using binldp::StreamId;
using binldp::StreamPurpose;
using binldp::Vec;
using refmath::BigFloat;

StreamId noise_stream(std::uint32_t client, std::uint32_t round) {
  StreamId id;
  id.client = client;
  id.round = round;
  id.purpose = StreamPurpose::kBinomial;
  return id;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

// Fixed evaluation points for the sensitivity formulas, with values frozen
// from a 60-digit computation (independent of both the library and the
// reference_formulas transcription).
struct SensCase {
  int levels;
  double G, D;
  int d;
  double delta;
  double l1, l2;
};
const SensCase kSensCases[] = {
    {2, 4, 4, 10, 0.01, 16.01543999516558438, 8.037395916430992876},
    {3, 4, 4, 10, 0.01, 21.57549193256471398, 11.41246484781923493},
    {4, 2, 1, 5, 0.05, 13.24711850015229258, 7.663835993985849559},
    {8, 4, 4, 10, 0.001, 50.61458818792861641, 26.67538779330491461},
    {16, 1, 2, 100, 0.01, 363.4469596354886447, 89.51837850247863272},
    {32, 4, 4, 10, 0.01, 137.3253663305109328, 65.29460462380293798},
    {5, 10, 10, 1, 0.1, 12.88980335943362108, 10.07088638897694651},
    {9, 4, 8, 50, 0.02, 151.5578178089865372, 50.54835566649562727},
    {17, 4, 4, 10, 0.0001, 95.45804255285456494, 49.13035648461021765},
    {33, 8, 2, 20, 0.005, 64.47112430765750368, 30.20777856282090055},
};

// Fixed evaluation points for the epsilon bound (default constants), same
// provenance.
struct EpsCase {
  int levels;
  long long trials;
  double p, delta, G, D;
  int d;
  double eps;
};
const EpsCase kEpsCases[] = {
    {2, 848, 0.5, 0.01, 4, 4, 10, 2.780622264633029085},
    {2, 1024, 0.5, 0.01, 4, 4, 10, 2.443173057543676414},
    {3, 848, 0.5, 0.01, 4, 4, 10, 3.886602963490953956},
    {17, 8192, 0.5, 0.01, 4, 4, 10, 3.430198714042169079},
    {5, 2048, 0.25, 0.01, 4, 4, 10, 4.281104603527994402},
    {9, 4096, 0.5, 0.001, 4, 4, 10, 4.515326541797367098},
    {64, 38155, 0.5, 0.01, 4, 4, 10, 4.000575160217802689},
    {2, 2048, 0.4, 0.05, 2, 1, 5, 0.8068946905759867751},
    {33, 100000, 0.5, 0.01, 8, 2, 20, 0.6524175651181881825},
    {4, 10000, 0.3, 0.02, 4, 8, 50, 2.02529683612738069},
};

}  // namespace

TEST_CASE("default mechanism constants at p = 1/2 and p = 0.3") {
  const MechanismConstants half = MechanismConstants::defaults(0.5);
  CHECK(rel_err(half.b_p, 1.0 / 3.0) < 1e-15);
  CHECK(rel_err(half.c_p, 2.4748737341529163354) < 1e-15);
  CHECK(rel_err(half.d_p, 2.0 / 3.0) < 1e-15);

  const MechanismConstants skew = MechanismConstants::defaults(0.3);
  CHECK(rel_err(skew.b_p, 0.78666666666666666667) < 1e-15);
  CHECK(rel_err(skew.c_p, 3.2102647865869257608) < 1e-15);
  CHECK(rel_err(skew.d_p, 0.77333333333333333333) < 1e-15);

  // The reference transcription agrees with the same frozen values.
  CHECK(rel_err(double(refmath::b_default(BigFloat(0.3))),
                0.78666666666666666667) < 1e-15);
  CHECK(rel_err(double(refmath::c_default(BigFloat(0.3))),
                3.2102647865869257608) < 1e-15);
  CHECK(rel_err(double(refmath::d_fixed(BigFloat(0.3))),
                0.77333333333333333333) < 1e-15);
}

TEST_CASE("resolve honours overrides and falls back to defaults") {
  const MechanismConstants defaults = MechanismConstants::defaults(0.5);
  const MechanismConstants same = MechanismConstants::resolve(0.5, -1.0, -1.0);
  CHECK(same.b_p == defaults.b_p);
  CHECK(same.c_p == defaults.c_p);
  CHECK(same.d_p == defaults.d_p);

  const MechanismConstants forced = MechanismConstants::resolve(0.5, 0.9, 1.7);
  CHECK(forced.b_p == 0.9);
  CHECK(forced.c_p == 1.7);
  CHECK(forced.d_p == defaults.d_p);  // d_p is never overridable
}

TEST_CASE("worst-case lattice sensitivity in sup norm is levels + 1") {
  for (int l = 2; l <= 32; ++l) {
    CAPTURE(l);
    CHECK(binldp::sensitivity_bounds(l, 4.0, 4.0, 10, 0.01).linf ==
          double(l + 1));
  }
}

TEST_CASE("l1/l2 sensitivities match 60-digit frozen values") {
  for (const SensCase& c : kSensCases) {
    CAPTURE(c.levels);
    CAPTURE(c.d);
    const binldp::SensitivityBounds got =
        binldp::sensitivity_bounds(c.levels, c.G, c.D, c.d, c.delta);
    CHECK(rel_err(got.l1, c.l1) < 1e-12);
    CHECK(rel_err(got.l2, c.l2) < 1e-12);
    CHECK(got.l1 > 0.0);
    CHECK(got.l2 > 0.0);

    // And the 50-digit reference transcription reproduces them too, pinning
    // the transcription itself before it referees anything else.
    const BigFloat r1 = refmath::delta1(c.levels, BigFloat(c.G), BigFloat(c.D),
                                        c.d, BigFloat(c.delta));
    const BigFloat r2 = refmath::delta2(c.levels, BigFloat(c.G), BigFloat(c.D),
                                        c.d, BigFloat(c.delta));
    CHECK(rel_err(double(r1), c.l1) < 1e-15);
    CHECK(rel_err(double(r2), c.l2) < 1e-15);
  }
}

TEST_CASE("epsilon bound matches 60-digit frozen values") {
  for (const EpsCase& c : kEpsCases) {
    CAPTURE(c.levels);
    CAPTURE(c.trials);
    CAPTURE(c.p);
    const MechanismConstants kc = MechanismConstants::defaults(c.p);
    const double got = binldp::epsilon_bound(c.levels, c.trials, c.p, c.delta,
                                             c.G, c.D, c.d, kc);
    CHECK(rel_err(got, c.eps) < 1e-12);
    CHECK(got > 0.0);

    const BigFloat ref = refmath::epsilon_default_consts(
        c.levels, c.trials, BigFloat(c.p), BigFloat(c.delta), BigFloat(c.G),
        BigFloat(c.D), c.d);
    CHECK(rel_err(double(ref), c.eps) < 1e-15);
  }
}

TEST_CASE("validity gate: both arms, exact boundary") {
  // Log arm binding: at d = 10, delta = 0.01 the threshold is
  // 23 ln(10^4) = 211.8378...; with p = 1/2 that is m >= 848.
  const binldp::GateCheck below = binldp::check_gate(847, 0.5, 3, 4.0, 10, 0.01);
  CHECK_FALSE(below.ok);
  CHECK(below.binding == std::string("log"));
  CHECK(rel_err(below.log_arm, 211.83782855545220293) < 1e-12);
  CHECK(below.lhs == doctest::Approx(211.75).epsilon(1e-12));

  const binldp::GateCheck at = binldp::check_gate(848, 0.5, 3, 4.0, 10, 0.01);
  CHECK(at.ok);
  CHECK(at.lhs == doctest::Approx(212.0).epsilon(1e-12));

  // Quantizer arm binding: (levels^2 - 1) / G = (1023^2 - 1) / 40 = 26163.2,
  // so with p = 1/2 the smallest valid m is ceil(4 * 26163.2) = 104653.
  const binldp::GateCheck q_ok =
      binldp::check_gate(104653, 0.5, 1023, 40.0, 2, 0.01);
  CHECK(q_ok.ok);
  CHECK(q_ok.step_arm == doctest::Approx(26163.2).epsilon(1e-12));
  const binldp::GateCheck q_no =
      binldp::check_gate(104652, 0.5, 1023, 40.0, 2, 0.01);
  CHECK_FALSE(q_no.ok);
  CHECK(q_no.binding == std::string("step"));
}

TEST_CASE("below the gate the accountant refuses to produce an epsilon") {
  const MechanismConstants kc = MechanismConstants::defaults(0.5);
  try {
    binldp::epsilon_bound(3, 847, 0.5, 0.01, 4.0, 4.0, 10, kc);
    FAIL("expected AccountantError");
  } catch (const binldp::AccountantError& e) {
    CHECK_FALSE(e.gate().ok);
    CHECK(e.gate().binding == std::string("log"));
  }
}

TEST_CASE("epsilon is strictly decreasing in trials") {
  const MechanismConstants kc = MechanismConstants::defaults(0.5);
  for (int l = 2; l <= 16; ++l) {
    double prev = std::numeric_limits<double>::infinity();
    // Two decades of m above the gate minimum.
    for (long long m = 1024; m <= 102400; m = m * 3 / 2) {
      const double eps =
          binldp::epsilon_bound(l, m, 0.5, 0.01, 4.0, 4.0, 10, kc);
      CAPTURE(l);
      CAPTURE(m);
      REQUIRE(eps < prev);
      prev = eps;
    }
  }
}

TEST_CASE("epsilon is nondecreasing in levels at fixed trials") {
  const MechanismConstants kc = MechanismConstants::defaults(0.5);
  for (long long m : {1024LL, 4096LL, 16384LL}) {
    double prev = 0.0;
    for (int l = 2; l <= 16; ++l) {
      const double eps =
          binldp::epsilon_bound(l, m, 0.5, 0.01, 4.0, 4.0, 10, kc);
      CAPTURE(l);
      CAPTURE(m);
      REQUIRE(eps >= prev);
      prev = eps;
    }
  }
}

TEST_CASE("binomial sampler: bounds, determinism, argument checks") {
  Rng rng(5, noise_stream(0, 0));
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t k = binldp::sample_binomial(10, 0.3, rng);
    REQUIRE(k <= 10);
  }
  // Same stream, same draws.
  Rng a(5, noise_stream(1, 2)), b(5, noise_stream(1, 2));
  for (int i = 0; i < 100; ++i) {
    REQUIRE(binldp::sample_binomial(64, 0.5, a) ==
            binldp::sample_binomial(64, 0.5, b));
  }
  CHECK_THROWS_AS(binldp::sample_binomial(0, 0.5, rng),
                  binldp::ValidationError);
  CHECK_THROWS_AS(binldp::sample_binomial(4, 0.0, rng),
                  binldp::ValidationError);
  CHECK_THROWS_AS(binldp::sample_binomial(4, 1.0, rng),
                  binldp::ValidationError);
}

TEST_CASE("binomial sampler matches binomial moments on both paths") {
  // p = 1/2 exercises the popcount path, p = 0.3 the Bernoulli-sum path.
  struct Law {
    long long m;
    double p;
  };
  int stream = 0;
  for (const Law law : {Law{64, 0.5}, Law{10, 0.3}, Law{333, 0.7}}) {
    const int kDraws = 100000;
    Rng rng(17, noise_stream(0, static_cast<std::uint32_t>(stream++)));
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      const double k =
          static_cast<double>(binldp::sample_binomial(law.m, law.p, rng));
      sum += k;
      sq += k * k;
    }
    const double mean = sum / kDraws;
    const double var = sq / kDraws - mean * mean;
    const double want_mean = double(law.m) * law.p;
    const double want_var = double(law.m) * law.p * (1.0 - law.p);
    CAPTURE(law.m);
    CAPTURE(law.p);
    CHECK(std::abs(mean - want_mean) < 5.0 * std::sqrt(want_var / kDraws));
    CHECK(rel_err(var, want_var) < 0.05);
  }
}

TEST_CASE("noise application is the exact lattice shift") {
  BinomialMechanismConfig mc;
  mc.trials = 10;
  mc.p = 0.3;
  mc.step = 0.5;
  const Vec q = {1.0, -2.0, 0.0};
  const std::vector<std::uint64_t> counts = {3, 0, 10};
  const Vec out = binldp::apply_binomial_noise(q, counts, mc);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == doctest::Approx(1.0 + 0.5 * (3.0 - 3.0)).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(-2.0 + 0.5 * (0.0 - 3.0)).epsilon(1e-15));
  CHECK(out[2] == doctest::Approx(0.0 + 0.5 * (10.0 - 3.0)).epsilon(1e-15));
}

TEST_CASE("perturb output stays on the shifted lattice") {
  BinomialMechanismConfig mc;
  mc.trials = 37;
  mc.p = 0.3;  // non-integer m p makes lattice offsets visible
  mc.step = 0.25;
  const Vec q = {0.75, -1.5, 0.0, 2.0};
  for (std::uint32_t round = 0; round < 50; ++round) {
    const Vec out = binldp::perturb(q, mc, 23, noise_stream(0, round));
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double k = (out[j] - q[j]) / mc.step + double(mc.trials) * mc.p;
      CAPTURE(round);
      CAPTURE(j);
      REQUIRE(std::abs(k - std::round(k)) < 1e-9);
      REQUIRE(std::round(k) >= 0.0);
      REQUIRE(std::round(k) <= double(mc.trials));
    }
  }
}

TEST_CASE("perturb is unbiased with the promised variance") {
  BinomialMechanismConfig mc;
  mc.trials = 64;
  mc.p = 0.5;
  mc.step = 0.125;
  const Vec q = {0.5, -0.25};
  const int kResamples = 100000;
  std::vector<double> sum(q.size(), 0.0), sq(q.size(), 0.0);
  for (int k = 0; k < kResamples; ++k) {
    const Vec out =
        binldp::perturb(q, mc, 71, noise_stream(0, static_cast<std::uint32_t>(k)));
    for (std::size_t j = 0; j < q.size(); ++j) {
      sum[j] += out[j];
      sq[j] += out[j] * out[j];
    }
  }
  const double want_var =
      mc.step * mc.step * double(mc.trials) * mc.p * (1.0 - mc.p);
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double mean = sum[j] / kResamples;
    const double var = sq[j] / kResamples - mean * mean;
    CAPTURE(j);
    // 3 sigma band on the mean, 5% relative on the variance (both from the
    // module's stated Monte-Carlo tolerances).
    CHECK(std::abs(mean - q[j]) < 3.0 * std::sqrt(want_var / kResamples));
    CHECK(rel_err(var, want_var) < 0.05);
  }
}

TEST_CASE("perturb coordinates use keyed substreams") {
  BinomialMechanismConfig mc;
  mc.trials = 16;
  mc.p = 0.5;
  mc.step = 1.0;
  const Vec q = {0.0, 1.0, 2.0, 3.0};
  const Vec full = binldp::perturb(q, mc, 13, noise_stream(2, 9));
  const Vec head =
      binldp::perturb(Vec(q.begin(), q.begin() + 2), mc, 13, noise_stream(2, 9));
  CHECK(head[0] == full[0]);
  CHECK(head[1] == full[1]);
}

TEST_CASE("accountant aggregates the worst client and poisons below-gate") {
  const MechanismConstants kc = MechanismConstants::defaults(0.5);

  const binldp::PrivacyReport ok = binldp::accountant(
      {2, 3}, {1024, 848}, 0.5, 0.01, 4.0, 4.0, 10, kc);
  CHECK(ok.gate_ok);
  CHECK(ok.delta_total == doctest::Approx(0.02).epsilon(1e-15));
  REQUIRE(ok.per_client_epsilon.size() == 2);
  CHECK(rel_err(ok.per_client_epsilon[0], 2.443173057543676414) < 1e-12);
  CHECK(rel_err(ok.per_client_epsilon[1], 3.886602963490953956) < 1e-12);
  CHECK(ok.epsilon == ok.per_client_epsilon[1]);  // max over clients
  REQUIRE(ok.gates.size() == 2);
  CHECK(ok.gates[0].ok);
  CHECK(ok.gates[1].ok);

  const binldp::PrivacyReport bad = binldp::accountant(
      {2, 3}, {1024, 847}, 0.5, 0.01, 4.0, 4.0, 10, kc);
  CHECK_FALSE(bad.gate_ok);
  CHECK(std::isnan(bad.epsilon));
  CHECK(std::isnan(bad.per_client_epsilon[1]));
  CHECK_FALSE(std::isnan(bad.per_client_epsilon[0]));

  CHECK_THROWS_AS(binldp::accountant({2}, {}, 0.5, 0.01, 4.0, 4.0, 10, kc),
                  binldp::ValidationError);
}
