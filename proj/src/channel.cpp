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

#include "binldp/channel.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace binldp {
namespace {

constexpr int kMaxClients = 20;  // 2^n - 1 subsets are enumerated

void check_channel(const ChannelConfig& ch) {
  std::vector<std::string> v;
  if (ch.uses_per_round < 1) {
    v.push_back("uses_per_round: need >= 1, got " +
                std::to_string(ch.uses_per_round));
  }
  if (ch.power.empty() ||
      static_cast<int>(ch.power.size()) > kMaxClients) {
    v.push_back("power: need 1.." + std::to_string(kMaxClients) +
                " entries, got " + std::to_string(ch.power.size()));
  }
  for (std::size_t i = 0; i < ch.power.size(); ++i) {
    if (!(std::isfinite(ch.power[i]) && ch.power[i] > 0.0)) {
      v.push_back("power[" + std::to_string(i) + "]: need finite > 0, got " +
                  std::to_string(ch.power[i]));
    }
  }
  if (!v.empty()) throw ValidationError("invalid channel config", v);
}

}  // namespace

double capacity(const std::vector<double>& subset_powers) {
  if (subset_powers.empty()) {
    throw ValidationError("capacity of an empty client subset is undefined");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < subset_powers.size(); ++i) {
    if (!(std::isfinite(subset_powers[i]) && subset_powers[i] > 0.0)) {
      throw ValidationError("power[" + std::to_string(i) +
                            "]: need finite > 0, got " +
                            std::to_string(subset_powers[i]));
    }
    total += subset_powers[i];
  }
  return 0.5 * std::log2(1.0 + total);
}

double rate_of(int levels, long long trials, int d, int N) {
  std::vector<std::string> v;
  if (levels < 2) v.push_back("levels: need >= 2, got " + std::to_string(levels));
  if (trials < 1) v.push_back("trials: need >= 1, got " + std::to_string(trials));
  if (d < 1) v.push_back("d: need >= 1, got " + std::to_string(d));
  if (N < 1) v.push_back("N: need >= 1, got " + std::to_string(N));
  if (!v.empty()) throw ValidationError("invalid rate arguments", v);
  return static_cast<double>(d) *
         std::log2(static_cast<double>(levels) + static_cast<double>(trials)) /
         static_cast<double>(N);
}

FeasibilityReport feasible(const ChannelConfig& ch,
                           const std::vector<double>& rates) {
  check_channel(ch);
  const int n = static_cast<int>(ch.power.size());
  if (rates.size() != ch.power.size()) {
    throw ValidationError("rates: need exactly " + std::to_string(n) +
                          " entries, got " + std::to_string(rates.size()));
  }
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(std::isfinite(rates[i]) && rates[i] >= 0.0)) {
      throw ValidationError("rates[" + std::to_string(i) +
                            "]: need finite >= 0, got " +
                            std::to_string(rates[i]));
    }
  }

  FeasibilityReport report;
  report.feasible = true;
  report.subsets.reserve((1u << n) - 1u);
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    SubsetSlack row;
    row.mask = mask;
    double power_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        row.rate_sum += rates[i];
        power_sum += ch.power[i];
      }
    }
    row.cap = 0.5 * std::log2(1.0 + power_sum);
    row.slack = row.cap - row.rate_sum;
    if (row.slack < 0.0) report.feasible = false;
    min_slack = std::min(min_slack, row.slack);
    report.subsets.push_back(row);
  }
  for (const SubsetSlack& row : report.subsets) {
    if (row.slack == min_slack) report.tightest.push_back(row.mask);
  }
  return report;
}

FeasibilityReport feasible(const ChannelConfig& ch,
                           const std::vector<int>& levels,
                           const std::vector<long long>& trials, int d) {
  if (levels.size() != ch.power.size() || trials.size() != ch.power.size()) {
    throw ValidationError(
        "levels/trials: need exactly " + std::to_string(ch.power.size()) +
        " entries, got " + std::to_string(levels.size()) + " and " +
        std::to_string(trials.size()));
  }
  std::vector<double> rates(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    rates[i] = rate_of(levels[i], trials[i], d, ch.uses_per_round);
  }
  return feasible(ch, rates);
}

}  // namespace binldp
