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

#include "binldp/privacy.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace binldp {
namespace {

void check_p(double p) {
  if (!(std::isfinite(p) && p > 0.0 && p < 1.0)) {
    throw ValidationError("p: need 0 < p < 1, got " + std::to_string(p));
  }
}

void check_trials(long long trials) {
  if (trials < 1) {
    throw ValidationError("trials: need >= 1, got " + std::to_string(trials));
  }
}

void check_sensitivity_args(int levels, double G, double D, int d,
                            double delta) {
  std::vector<std::string> v;
  if (levels < 2) v.push_back("levels: need >= 2, got " + std::to_string(levels));
  if (!(std::isfinite(G) && G > 0.0))
    v.push_back("G: need finite > 0, got " + std::to_string(G));
  if (!(std::isfinite(D) && D > 0.0))
    v.push_back("D: need finite > 0, got " + std::to_string(D));
  if (d < 1) v.push_back("d: need >= 1, got " + std::to_string(d));
  if (!(std::isfinite(delta) && delta > 0.0 && delta < 1.0))
    v.push_back("delta: need 0 < delta < 1, got " + std::to_string(delta));
  if (!v.empty()) throw ValidationError("invalid sensitivity arguments", v);
}

}  // namespace

MechanismConstants MechanismConstants::defaults(double p) {
  check_p(p);
  const double q = 1.0 - p;
  const double sq = p * p + q * q;
  MechanismConstants kc;
  kc.b_p = (2.0 / 3.0) * sq + std::abs(1.0 - 2.0 * p);
  kc.c_p = std::sqrt(2.0) *
           (3.0 * p * p * p + 3.0 * q * q * q + 2.0 * p * p + 2.0 * q * q);
  kc.d_p = (4.0 / 3.0) * sq;
  return kc;
}

MechanismConstants MechanismConstants::resolve(double p, double b_override,
                                               double c_override) {
  MechanismConstants kc = defaults(p);
  if (b_override >= 0.0) kc.b_p = b_override;
  if (c_override >= 0.0) kc.c_p = c_override;
  return kc;
}

std::uint64_t sample_binomial(long long trials, double p, Rng& rng) {
  check_trials(trials);
  check_p(p);
  std::uint64_t count = 0;
  if (p == 0.5) {
    // Each bit of a generator word is an unbiased coin, so the number of
    // successes in 64 trials is the popcount of one raw word. This path is
    // pure integer arithmetic: exact in law and bit-stable everywhere.
    long long full = trials / 64;
    const int rem = static_cast<int>(trials % 64);
    for (long long w = 0; w < full; ++w) {
      count += static_cast<std::uint64_t>(std::popcount(rng.bits()));
    }
    if (rem > 0) {
      const std::uint64_t mask = (1ULL << rem) - 1ULL;
      count += static_cast<std::uint64_t>(std::popcount(rng.bits() & mask));
    }
    return count;
  }
  for (long long k = 0; k < trials; ++k) {
    if (rng.uniform() < p) ++count;
  }
  return count;
}

Vec apply_binomial_noise(const Vec& q, const std::vector<std::uint64_t>& counts,
                         const BinomialMechanismConfig& mc) {
  check_trials(mc.trials);
  check_p(mc.p);
  if (!(std::isfinite(mc.step) && mc.step > 0.0)) {
    throw ValidationError("step: need finite > 0, got " +
                          std::to_string(mc.step));
  }
  if (q.size() != counts.size()) {
    throw ValidationError("coordinate/count size mismatch: " +
                          std::to_string(q.size()) + " vs " +
                          std::to_string(counts.size()));
  }
  const double mean = static_cast<double>(mc.trials) * mc.p;
  Vec out(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    out[j] = q[j] + mc.step * (static_cast<double>(counts[j]) - mean);
  }
  return out;
}

Vec perturb(const Vec& q, const BinomialMechanismConfig& mc, std::uint64_t seed,
            StreamId id) {
  Rng parent(seed, id);
  std::vector<std::uint64_t> counts(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    Rng sub = parent.substream(j);
    counts[j] = sample_binomial(mc.trials, mc.p, sub);
  }
  return apply_binomial_noise(q, counts, mc);
}

SensitivityBounds sensitivity_bounds(int levels, double G, double D, int d,
                                     double delta) {
  check_sensitivity_args(levels, G, D, d, delta);
  const double span = static_cast<double>(levels - 1);
  const double root_d = std::sqrt(static_cast<double>(d));
  const double log_tail = std::log(2.0 / delta);

  SensitivityBounds sens;
  sens.linf = static_cast<double>(levels) + 1.0;
  const double linear = root_d * D / G * span;
  const double cross = 2.0 * root_d * D * log_tail / G * span;
  sens.l1 = linear + std::sqrt(cross) + (4.0 / 3.0) * log_tail;
  sens.l2 = D / G * span + std::sqrt(sens.l1 + cross);
  return sens;
}

GateCheck check_gate(long long trials, double p, int levels, double G, int d,
                     double delta) {
  check_trials(trials);
  check_p(p);
  check_sensitivity_args(levels, G, 1.0, d, delta);
  GateCheck gate;
  gate.lhs = static_cast<double>(trials) * p * (1.0 - p);
  gate.log_arm = 23.0 * std::log(10.0 * static_cast<double>(d) / delta);
  gate.step_arm =
      (static_cast<double>(levels) * static_cast<double>(levels) - 1.0) / G;
  const bool log_binds = gate.log_arm >= gate.step_arm;
  gate.binding = log_binds ? "log" : "step";
  gate.ok = gate.lhs >= (log_binds ? gate.log_arm : gate.step_arm);
  return gate;
}

double epsilon_formula(const SensitivityBounds& sens, long long trials,
                       double p, double delta, int d,
                       const MechanismConstants& kc) {
  check_trials(trials);
  check_p(p);
  if (!(std::isfinite(delta) && delta > 0.0 && delta < 1.0)) {
    throw ValidationError("delta: need 0 < delta < 1, got " +
                          std::to_string(delta));
  }
  if (d < 1) throw ValidationError("d: need >= 1, got " + std::to_string(d));
  const double v = static_cast<double>(trials) * p * (1.0 - p);
  const double gauss_term =
      sens.l2 * std::sqrt(2.0 * std::log(1.25 / delta)) / std::sqrt(v);
  const double moment_term =
      (sens.l2 * kc.c_p * std::sqrt(2.0 * std::log(10.0 / delta)) +
       sens.l1 * kc.b_p) /
      (v * (1.0 - delta / 10.0));
  const double tail_term =
      ((2.0 / 3.0) * sens.linf * std::log(1.25 / delta) +
       sens.linf * kc.d_p * std::log(20.0 * static_cast<double>(d) / delta) *
           std::log(10.0 / delta)) /
      v;
  return gauss_term + moment_term + tail_term;
}

double epsilon_bound(int levels, long long trials, double p, double delta,
                     double G, double D, int d, const MechanismConstants& kc) {
  const GateCheck gate = check_gate(trials, p, levels, G, d, delta);
  if (!gate.ok) {
    throw AccountantError(
        "validity gate failed: trials * p * (1-p) = " +
            std::to_string(gate.lhs) + " < max(" + std::to_string(gate.log_arm) +
            " [log arm], " + std::to_string(gate.step_arm) +
            " [step arm]); the closed-form bound does not apply",
        gate);
  }
  const SensitivityBounds sens = sensitivity_bounds(levels, G, D, d, delta);
  return epsilon_formula(sens, trials, p, delta, d, kc);
}

PrivacyReport accountant(const std::vector<int>& levels,
                         const std::vector<long long>& trials, double p,
                         double delta, double G, double D, int d,
                         const MechanismConstants& kc) {
  if (levels.empty() || levels.size() != trials.size()) {
    throw ValidationError(
        "levels/trials must be nonempty and equally sized, got " +
        std::to_string(levels.size()) + " vs " + std::to_string(trials.size()));
  }
  PrivacyReport report;
  report.delta_total = 2.0 * delta;
  report.gate_ok = true;
  report.epsilon = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const GateCheck gate = check_gate(trials[i], p, levels[i], G, d, delta);
    report.gates.push_back(gate);
    if (!gate.ok) {
      // No valid epsilon exists below the gate; poison the aggregate.
      report.gate_ok = false;
      report.per_client_epsilon.push_back(
          std::numeric_limits<double>::quiet_NaN());
      report.epsilon = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const SensitivityBounds sens =
        sensitivity_bounds(levels[i], G, D, d, delta);
    const double eps = epsilon_formula(sens, trials[i], p, delta, d, kc);
    report.per_client_epsilon.push_back(eps);
    if (report.gate_ok) report.epsilon = std::max(report.epsilon, eps);
  }
  return report;
}

}  // namespace binldp
