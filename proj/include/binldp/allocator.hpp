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

#ifndef BINLDP_ALLOCATOR_HPP_
#define BINLDP_ALLOCATOR_HPP_

#include <string>
#include <vector>

#include "binldp/channel.hpp"
#include "binldp/privacy.hpp"

namespace binldp {

// Integer program solved per round: choose quantizer levels l_i >= 2 and
// noise trials m_i >= 1 per client to minimize the aggregate mean-squared
// error proxy
//   sum_i d G^2 / (l_i - 1)^2 * (p (1-p) m_i + 1/4)
// subject to, for every client, the epsilon bound <= eps_budget and the
// validity gate, and for every client subset the rate-region constraint
//   sum_{i in S} d log2(l_i + m_i) <= N C_S.
struct AllocationProblem {
  int n = 0;
  int d = 0;
  int N = 0;
  std::vector<double> power;
  double G = 0.0;
  double D = 0.0;
  double p = 0.0;
  double delta = 0.0;
  double eps_budget = 0.0;  // may be +inf (no privacy constraint binding)
  MechanismConstants consts{};
  int l_max = 64;           // search bound on levels
  long long m_max = 1LL << 20;  // search bound on trials
};

struct ClientAllocation {
  int levels = 0;
  long long trials = 0;
};

struct Allocation {
  bool feasible = false;
  std::vector<ClientAllocation> clients;
  double objective = 0.0;
  std::vector<double> per_client_epsilon;
  // When !feasible: which constraint families emptied the search space.
  std::string reason;
};

struct SolveStats {
  long long objective_evals = 0;      // full-objective evaluations
  long long candidates_examined = 0;  // grid points / profiles visited
};

// Objective value of a candidate (requires l_i >= 2; no constraint checks).
double allocation_objective(const AllocationProblem& prob,
                            const std::vector<ClientAllocation>& cand);

struct FeasibilityDiagnosis {
  bool ok = false;
  // Human-readable list of violations in check order: bounds/integrality,
  // per-client gate, per-client epsilon (skipped when that client's gate
  // fails — the accountant is invalid there), rate region.
  std::vector<std::string> violations;
};

FeasibilityDiagnosis is_feasible(const AllocationProblem& prob,
                                 const std::vector<ClientAllocation>& cand);

// Reference solver: enumerates the whole grid {2..l_max} x {1..m_max} per
// client (restricted to nondecreasing (levels, trials) pairs when all clients
// are interchangeable), returning the global minimizer with the
// lexicographically smallest (l_1, m_1, l_2, m_2, ...) tie-break. Intended
// for small instances; throws when the grid is too large to enumerate.
Allocation solve_exhaustive(const AllocationProblem& prob,
                            SolveStats* stats = nullptr);

// Production solver; provably identical output to solve_exhaustive. For each
// level choice the objective is strictly increasing in trials while the
// epsilon bound is strictly decreasing and the rate footprint strictly
// increasing, so the per-level optimum pins trials to
//   max(gate minimum, smallest m with epsilon <= budget)
// (the grid relaxation "trials -> gate minimum" made exact), and level
// choices whose minimal footprint already exceeds the loosest per-client cap
// are pruned before profile enumeration.
Allocation solve_pruned(const AllocationProblem& prob,
                        SolveStats* stats = nullptr);

// True iff some single-coordinate integer move (l_i + 1 or m_i - 1) from
// `alloc` both stays feasible and lowers the objective. A correct optimum
// admits none; exposed for the optimality certificate checks.
bool has_improving_unit_move(const AllocationProblem& prob,
                             const Allocation& alloc);

// Smallest trials satisfying the validity gate at the given levels, or
// m_max + 1 when none exists within the bound.
long long gate_min_trials(const AllocationProblem& prob, int levels);

}  // namespace binldp

#endif  // BINLDP_ALLOCATOR_HPP_
