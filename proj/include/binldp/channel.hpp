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

#ifndef BINLDP_CHANNEL_HPP_
#define BINLDP_CHANNEL_HPP_

#include <cstdint>
#include <vector>

#include "binldp/core.hpp"

namespace binldp {

// Gaussian multiple-access channel with unit noise power: N uses per round,
// per-client transmit powers P_i (linear scale).
struct ChannelConfig {
  int uses_per_round = 0;     // N >= 1
  std::vector<double> power;  // P_i > 0
};

// Sum capacity of a client subset, bits per channel use:
//   C_S = (1/2) log2(1 + sum_{i in S} P_i).
// Throws on an empty subset or nonpositive power.
double capacity(const std::vector<double>& subset_powers);

// Per-round rate demand of one client, bits per channel use:
//   R = d * log2(levels + trials) / N.
double rate_of(int levels, long long trials, int d, int N);

// One subset row of the feasibility report.
struct SubsetSlack {
  std::uint32_t mask = 0;  // bit i set => client i in the subset
  double rate_sum = 0.0;   // sum of member rates
  double cap = 0.0;        // C_S
  double slack = 0.0;      // cap - rate_sum (negative => violated)
};

struct FeasibilityReport {
  bool feasible = false;
  std::vector<SubsetSlack> subsets;  // all 2^n - 1 nonempty subsets
  // Masks with the smallest slack (ties included); the binding constraints
  // when feasible, the violated ones when not.
  std::vector<std::uint32_t> tightest;
};

// Checks the whole rate region: sum_{i in S} R_i <= C_S for every nonempty
// subset S. Rates are per-client demands aligned with ch.power.
FeasibilityReport feasible(const ChannelConfig& ch,
                           const std::vector<double>& rates);

// Convenience: rates computed from per-client (levels, trials).
FeasibilityReport feasible(const ChannelConfig& ch,
                           const std::vector<int>& levels,
                           const std::vector<long long>& trials, int d);

}  // namespace binldp

#endif  // BINLDP_CHANNEL_HPP_
