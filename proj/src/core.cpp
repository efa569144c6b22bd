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

#include "binldp/core.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace binldp {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

// Odd constants decorrelating the key fields; any fixed odd values work, the
// mixer below does the real scrambling.
constexpr std::uint64_t kClientSalt = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kRoundSalt = 0x8CB92BA72F3D8DD7ULL;
constexpr std::uint64_t kPurposeSalt = 0xEB44ACCAB455D165ULL;

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

std::uint64_t Rng::mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

Rng::Rng(std::uint64_t seed, StreamId id) {
  std::uint64_t s = mix(seed + kGamma);
  s = mix(s ^ (static_cast<std::uint64_t>(id.client) + kClientSalt));
  s = mix(s ^ (static_cast<std::uint64_t>(id.round) + kRoundSalt));
  s = mix(s ^ (static_cast<std::uint64_t>(id.purpose) + kPurposeSalt));
  base_ = state_ = s;
}

Rng Rng::substream(std::uint64_t i) const {
  // (i + 1) * kGamma is injective in i (kGamma is odd), so distinct indices
  // always key distinct substreams.
  return Rng(mix(base_ + (i + 1) * kGamma));
}

std::uint64_t Rng::bits() {
  state_ += kGamma;
  return mix(state_);
}

double Rng::uniform() {
  return static_cast<double>(bits() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();  // in [0, 1), so 1 - u1 in (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double theta = kTwoPi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

double draw_uniform(std::uint64_t seed, StreamId id) {
  Rng rng(seed, id);
  return rng.uniform();
}

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

void require(std::vector<std::string>& out, bool ok, const std::string& msg) {
  if (!ok) out.push_back(msg);
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

void validate_experiment_config(const ExperimentConfig& cfg) {
  std::vector<std::string> v;
  require(v, cfg.n >= 1, "n: need >= 1 client, got " + std::to_string(cfg.n));
  // The rate region enumerates all 2^n - 1 client subsets; past ~20 clients
  // that blows up, so we refuse early with a clear message.
  require(v, cfg.n <= 20,
          "n: at most 20 clients supported (rate region enumerates 2^n - 1 "
          "subsets), got " +
              std::to_string(cfg.n));
  require(v, cfg.d >= 1, "d: need >= 1, got " + std::to_string(cfg.d));
  require(v, cfg.T >= 1, "T: need >= 1 round, got " + std::to_string(cfg.T));
  require(v, cfg.N >= 1,
          "N: need >= 1 channel use per round, got " + std::to_string(cfg.N));
  require(v, static_cast<int>(cfg.power.size()) == cfg.n,
          "power: need exactly n = " + std::to_string(cfg.n) +
              " entries, got " + std::to_string(cfg.power.size()));
  for (std::size_t i = 0; i < cfg.power.size(); ++i) {
    require(v, finite_positive(cfg.power[i]),
            "power[" + std::to_string(i) + "]: need finite > 0, got " +
                fmt_double(cfg.power[i]));
  }
  require(v, finite_positive(cfg.G),
          "G: need finite > 0, got " + fmt_double(cfg.G));
  require(v, finite_positive(cfg.D),
          "D: need finite > 0, got " + fmt_double(cfg.D));
  require(v, std::isfinite(cfg.p) && cfg.p > 0.0 && cfg.p < 1.0,
          "p: need 0 < p < 1, got " + fmt_double(cfg.p));
  require(v, std::isfinite(cfg.delta) && cfg.delta > 0.0 && cfg.delta < 1.0,
          "delta: need 0 < delta < 1, got " + fmt_double(cfg.delta));
  require(v, !std::isnan(cfg.eps_budget) && cfg.eps_budget > 0.0,
          "eps_budget: need > 0 (may be inf), got " +
              fmt_double(cfg.eps_budget));
  require(v, finite_positive(cfg.beta),
          "beta: need finite > 0, got " + fmt_double(cfg.beta));
  require(v, cfg.lambda == kUnset || finite_positive(cfg.lambda),
          "lambda: need finite > 0 when set, got " + fmt_double(cfg.lambda));
  require(v, cfg.mu == kUnset || finite_positive(cfg.mu),
          "mu: need finite > 0 when set, got " + fmt_double(cfg.mu));
  require(v, cfg.b_p == kUnset || (std::isfinite(cfg.b_p) && cfg.b_p >= 0.0),
          "b_p: need finite >= 0 when set, got " + fmt_double(cfg.b_p));
  require(v, cfg.c_p == kUnset || (std::isfinite(cfg.c_p) && cfg.c_p >= 0.0),
          "c_p: need finite >= 0 when set, got " + fmt_double(cfg.c_p));
  require(v, cfg.l_max >= 2,
          "l_max: need >= 2, got " + std::to_string(cfg.l_max));
  require(v, cfg.m_max >= 1,
          "m_max: need >= 1, got " + std::to_string(cfg.m_max));
  require(v, cfg.samples_per_client >= 1,
          "samples_per_client: need >= 1, got " +
              std::to_string(cfg.samples_per_client));
  if (!v.empty()) {
    std::string what = "invalid experiment config (" +
                       std::to_string(v.size()) + " violation" +
                       (v.size() == 1 ? "" : "s") + "):";
    for (const auto& item : v) what += "\n  - " + item;
    throw ValidationError(what, std::move(v));
  }
}

double snr_db_to_power(double snr_db) {
  if (!std::isfinite(snr_db)) {
    throw ValidationError("snr_db must be finite, got " + fmt_double(snr_db));
  }
  return std::pow(10.0, snr_db / 10.0);
}

double power_to_snr_db(double power) {
  if (!finite_positive(power)) {
    throw ValidationError("power must be finite > 0, got " +
                          fmt_double(power));
  }
  return 10.0 * std::log10(power);
}

}  // namespace binldp
