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

// Naive full-enumeration reference for the allocation problem, built on the
// independent formula transcriptions in reference_formulas.hpp. Every tuple
// (l_1, m_1[, l_2, m_2]) is visited in lexicographic order; per-client
// privacy verdicts, rate footprints, and objective terms are precomputed per
// (l, m) — memoization, not pruning: no tuple is skipped. Strict improvement
// keeps the first minimizer found, which is exactly the lexicographically
// smallest argmin, so agreement with the production solvers also checks
// their tie-break rule.

#ifndef BINLDP_TESTS_NAIVE_ALLOCATOR_HPP_
#define BINLDP_TESTS_NAIVE_ALLOCATOR_HPP_

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "binldp/allocator.hpp"
#include "reference_formulas.hpp"

namespace naive {

struct Result {
  bool feasible = false;
  std::vector<binldp::ClientAllocation> clients;
  double objective = std::numeric_limits<double>::infinity();
};

struct Entry {
  bool priv_ok = false;
  double rate = 0.0;
  double obj = 0.0;
};

// (levels, trials) -> per-client verdicts for one client's grid. Clients
// share (G, D, p, delta, budget), so one table serves any client.
inline std::vector<Entry> client_table(const binldp::AllocationProblem& prob) {
  const double bp = prob.consts.b_p;
  const double cp = prob.consts.c_p;
  const double dp = prob.consts.d_p;
  const int lspan = prob.l_max - 1;
  std::vector<Entry> table(static_cast<std::size_t>(lspan) *
                           static_cast<std::size_t>(prob.m_max));
  for (int l = 2; l <= prob.l_max; ++l) {
    for (long long m = 1; m <= prob.m_max; ++m) {
      Entry& e = table[static_cast<std::size_t>(l - 2) * prob.m_max + (m - 1)];
      const bool gate =
          refmath::gate_ok(m, prob.p, l, prob.G, prob.d, prob.delta);
      double eps = std::numeric_limits<double>::infinity();
      if (gate) {
        eps = refmath::epsilon(l, m, prob.p, prob.delta, prob.G, prob.D,
                               prob.d, bp, cp, dp);
      }
      e.priv_ok = gate && eps <= prob.eps_budget;
      e.rate = refmath::rate<double>(l, m, prob.d, prob.N);
      const double denom = double(l - 1) * double(l - 1);
      e.obj = prob.d * prob.G * prob.G / denom *
              (prob.p * (1.0 - prob.p) * double(m) + 0.25);
    }
  }
  return table;
}

inline Result solve(const binldp::AllocationProblem& prob) {
  if (prob.n != 1 && prob.n != 2) {
    throw std::logic_error("naive::solve handles 1 or 2 clients only");
  }
  const std::vector<Entry> table = client_table(prob);
  const auto entry = [&](int l, long long m) -> const Entry& {
    return table[static_cast<std::size_t>(l - 2) * prob.m_max + (m - 1)];
  };

  Result best;
  if (prob.n == 1) {
    const double cap1 = refmath::capacity(std::vector<double>{prob.power[0]});
    for (int l = 2; l <= prob.l_max; ++l) {
      for (long long m = 1; m <= prob.m_max; ++m) {
        const Entry& a = entry(l, m);
        if (!a.priv_ok || a.rate > cap1) continue;
        if (a.obj < best.objective) {
          best.feasible = true;
          best.objective = a.obj;
          best.clients = {{l, m}};
        }
      }
    }
    return best;
  }

  const double cap1 = refmath::capacity(std::vector<double>{prob.power[0]});
  const double cap2 = refmath::capacity(std::vector<double>{prob.power[1]});
  const double cap12 = refmath::capacity(prob.power);
  for (int l1 = 2; l1 <= prob.l_max; ++l1) {
    for (long long m1 = 1; m1 <= prob.m_max; ++m1) {
      const Entry& a = entry(l1, m1);
      if (!a.priv_ok || a.rate > cap1) continue;
      for (int l2 = 2; l2 <= prob.l_max; ++l2) {
        for (long long m2 = 1; m2 <= prob.m_max; ++m2) {
          const Entry& b = entry(l2, m2);
          if (!b.priv_ok || b.rate > cap2) continue;
          if (a.rate + b.rate > cap12) continue;
          const double obj = a.obj + b.obj;
          if (obj < best.objective) {
            best.feasible = true;
            best.objective = obj;
            best.clients = {{l1, m1}, {l2, m2}};
          }
        }
      }
    }
  }
  return best;
}

}  // namespace naive

#endif  // BINLDP_TESTS_NAIVE_ALLOCATOR_HPP_
