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

#ifndef BINLDP_PRIVACY_HPP_
#define BINLDP_PRIVACY_HPP_

#include <cstdint>

#include "binldp/core.hpp"
#include "binldp/quantizer.hpp"

namespace binldp {

// Binomial noise layer: each transmitted coordinate is
//   q + step * (Binomial(trials, p) - trials * p).
struct BinomialMechanismConfig {
  long long trials = 0;  // m >= 1
  double p = 0.0;        // 0 < p < 1
  double step = 0.0;     // lattice step s > 0 (the quantizer grid spacing)
};

// Constants of the closed-form epsilon bound. b_p and c_p are configurable
// (the analysis leaves them as externally supplied constants); d_p is fixed
// by the derivation. Defaults:
//   b_p = (2/3)(p^2 + (1-p)^2) + |1 - 2p|
//   c_p = sqrt(2) (3p^3 + 3(1-p)^3 + 2p^2 + 2(1-p)^2)
//   d_p = (4/3)(p^2 + (1-p)^2)
struct MechanismConstants {
  double b_p = 0.0;
  double c_p = 0.0;
  double d_p = 0.0;

  static MechanismConstants defaults(double p);
  // Defaults, with b_p/c_p replaced by overrides when >= 0.
  static MechanismConstants resolve(double p, double b_override,
                                    double c_override);
};

// Worst-case sensitivities of one client's quantized contribution, in lattice
// units, for a gradient bounded by |g_j| <= G and ||g||_2 <= D.
struct SensitivityBounds {
  double linf = 0.0;  // levels + 1
  double l1 = 0.0;
  double l2 = 0.0;
};

// Validity condition of the epsilon bound:
//   trials * p * (1-p) >= max(23 ln(10 d / delta), (levels^2 - 1) / G)
// (the second arm equals 2 * linf / step on the quantizer grid).
struct GateCheck {
  bool ok = false;
  double lhs = 0.0;       // trials * p * (1-p)
  double log_arm = 0.0;   // 23 ln(10 d / delta)
  double step_arm = 0.0;  // (levels^2 - 1) / G
  // "log" or "step": the binding (largest) arm; when !ok, the side that the
  // lhs fails against.
  const char* binding = "";
};

// Thrown by epsilon_bound when the gate fails: the closed-form accountant is
// not valid below the gate, so no epsilon is produced.
class AccountantError : public std::runtime_error {
 public:
  AccountantError(const std::string& what, GateCheck gate)
      : std::runtime_error(what), gate_(gate) {}
  const GateCheck& gate() const { return gate_; }

 private:
  GateCheck gate_;
};

// Per-round privacy summary over all clients.
struct PrivacyReport {
  double epsilon = 0.0;      // max over clients
  double delta_total = 0.0;  // 2 * delta (quantizer tail + mechanism tail)
  bool gate_ok = false;
  std::vector<double> per_client_epsilon;
  std::vector<GateCheck> gates;
};

// Exact Binomial(trials, p) sample. p = 1/2 uses a popcount over `trials`
// raw bits (each bit of the generator word is an unbiased coin); other p sum
// `trials` Bernoulli comparisons. Both paths are exact in law and consume the
// stream deterministically. Throws unless trials >= 1 and 0 < p < 1.
std::uint64_t sample_binomial(long long trials, double p, Rng& rng);

// Deterministic core of the mechanism: applies given noise counts,
//   out_j = q_j + step * (counts_j - trials * p).
Vec apply_binomial_noise(const Vec& q, const std::vector<std::uint64_t>& counts,
                         const BinomialMechanismConfig& mc);

// Samples counts per coordinate from substreams of (seed, id) and applies
// them. Coordinate j uses keyed substream j.
Vec perturb(const Vec& q, const BinomialMechanismConfig& mc, std::uint64_t seed,
            StreamId id);

// Closed-form sensitivity bounds; levels >= 2, G > 0, D > 0, d >= 1,
// 0 < delta < 1.
SensitivityBounds sensitivity_bounds(int levels, double G, double D, int d,
                                     double delta);

GateCheck check_gate(long long trials, double p, int levels, double G, int d,
                     double delta);

// Raw right-hand side of the epsilon bound (no gate enforcement — only
// meaningful above the gate; exposed for analysis and tests):
//   eps = l2 sqrt(2 ln(1.25/delta)) / sqrt(v)
//       + (l2 c_p sqrt(2 ln(10/delta)) + l1 b_p) / (v (1 - delta/10))
//       + ((2/3) linf ln(1.25/delta) + linf d_p ln(20d/delta) ln(10/delta)) / v
// with v = trials * p * (1-p).
double epsilon_formula(const SensitivityBounds& sens, long long trials,
                       double p, double delta, int d,
                       const MechanismConstants& kc);

// Gate-checked epsilon bound for one client. Throws AccountantError (carrying
// the gate diagnostics) when the validity condition fails.
double epsilon_bound(int levels, long long trials, double p, double delta,
                     double G, double D, int d, const MechanismConstants& kc);

// Report over a whole allocation (per-client levels/trials pairs).
PrivacyReport accountant(const std::vector<int>& levels,
                         const std::vector<long long>& trials, double p,
                         double delta, double G, double D, int d,
                         const MechanismConstants& kc);

}  // namespace binldp

#endif  // BINLDP_PRIVACY_HPP_
