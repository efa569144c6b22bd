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

#include "binldp/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace binldp {
namespace {

constexpr int kMaxClients = 20;
constexpr int kMaxLevelsBound = 1 << 20;
constexpr long long kMaxTrialsBound = 1LL << 40;
// Largest candidate-tuple space either solver will walk, and largest
// per-client candidate list the exhaustive solver will materialize.
constexpr double kMaxTupleSpace = 2e8;
constexpr double kMaxPerClientGrid = 5e6;

void check_problem(const AllocationProblem& prob) {
  std::vector<std::string> v;
  if (prob.n < 1 || prob.n > kMaxClients) {
    v.push_back("n: need 1.." + std::to_string(kMaxClients) + ", got " +
                std::to_string(prob.n));
  }
  if (static_cast<int>(prob.power.size()) != prob.n) {
    v.push_back("power: need exactly n = " + std::to_string(prob.n) +
                " entries, got " + std::to_string(prob.power.size()));
  }
  for (std::size_t i = 0; i < prob.power.size(); ++i) {
    if (!(std::isfinite(prob.power[i]) && prob.power[i] > 0.0)) {
      v.push_back("power[" + std::to_string(i) + "]: need finite > 0, got " +
                  std::to_string(prob.power[i]));
    }
  }
  if (prob.d < 1) v.push_back("d: need >= 1, got " + std::to_string(prob.d));
  if (prob.N < 1) v.push_back("N: need >= 1, got " + std::to_string(prob.N));
  if (!(std::isfinite(prob.G) && prob.G > 0.0))
    v.push_back("G: need finite > 0, got " + std::to_string(prob.G));
  if (!(std::isfinite(prob.D) && prob.D > 0.0))
    v.push_back("D: need finite > 0, got " + std::to_string(prob.D));
  if (!(std::isfinite(prob.p) && prob.p > 0.0 && prob.p < 1.0))
    v.push_back("p: need 0 < p < 1, got " + std::to_string(prob.p));
  if (!(std::isfinite(prob.delta) && prob.delta > 0.0 && prob.delta < 1.0))
    v.push_back("delta: need 0 < delta < 1, got " + std::to_string(prob.delta));
  if (std::isnan(prob.eps_budget) || prob.eps_budget <= 0.0)
    v.push_back("eps_budget: need > 0 (may be inf), got " +
                std::to_string(prob.eps_budget));
  if (!(std::isfinite(prob.consts.b_p) && prob.consts.b_p >= 0.0))
    v.push_back("consts.b_p: need finite >= 0");
  if (!(std::isfinite(prob.consts.c_p) && prob.consts.c_p >= 0.0))
    v.push_back("consts.c_p: need finite >= 0");
  if (!(std::isfinite(prob.consts.d_p) && prob.consts.d_p > 0.0))
    v.push_back("consts.d_p: need finite > 0");
  if (prob.l_max < 2 || prob.l_max > kMaxLevelsBound)
    v.push_back("l_max: need 2.." + std::to_string(kMaxLevelsBound) +
                ", got " + std::to_string(prob.l_max));
  if (prob.m_max < 1 || prob.m_max > kMaxTrialsBound)
    v.push_back("m_max: need 1.." + std::to_string(kMaxTrialsBound) +
                ", got " + std::to_string(prob.m_max));
  if (!v.empty()) throw ValidationError("invalid allocation problem", v);
}

double unit_objective(const AllocationProblem& prob, int levels,
                      long long trials) {
  const double span = static_cast<double>(levels - 1);
  return static_cast<double>(prob.d) * prob.G * prob.G / (span * span) *
         (prob.p * (1.0 - prob.p) * static_cast<double>(trials) + 0.25);
}

// Same arithmetic as rate_of, as a predicate over the alphabet size l + m.
bool alphabet_fits(const AllocationProblem& prob, long long alphabet,
                   double cap) {
  return static_cast<double>(prob.d) *
             std::log2(static_cast<double>(alphabet)) /
             static_cast<double>(prob.N) <=
         cap;
}

// Largest alphabet l + m that fits the given per-use capacity, clamped to
// l_max + m_max; 2 when even (l, m) = (2, 1) does not fit. Derived from the
// singleton rate constraint, so shrinking the grid to it never discards a
// feasible point.
long long alphabet_cap(const AllocationProblem& prob, double cap) {
  const long long hi_bound =
      static_cast<long long>(prob.l_max) + prob.m_max;
  if (alphabet_fits(prob, hi_bound, cap)) return hi_bound;
  if (!alphabet_fits(prob, 3, cap)) return 2;
  long long lo = 3, hi = hi_bound;  // fits(lo), !fits(hi)
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (alphabet_fits(prob, mid, cap) ? lo : hi) = mid;
  }
  return lo;
}

// Gate left-hand side with the exact arithmetic of check_gate.
double gate_lhs(const AllocationProblem& prob, long long trials) {
  return static_cast<double>(trials) * prob.p * (1.0 - prob.p);
}

double gate_arm(const AllocationProblem& prob, int levels) {
  const double log_arm =
      23.0 * std::log(10.0 * static_cast<double>(prob.d) / prob.delta);
  const double step_arm = (static_cast<double>(levels) *
                               static_cast<double>(levels) -
                           1.0) /
                          prob.G;
  return std::max(log_arm, step_arm);
}

// Per-client candidate grids and tuple enumeration shared by both solvers.
struct Candidate {
  int l = 0;
  long long m = 0;
  double rate = 0.0;      // bits per channel use
  double unit_obj = 0.0;  // this client's objective contribution
  double eps = std::numeric_limits<double>::quiet_NaN();
  bool gate_ok = false;
  bool eps_ok = false;  // gate_ok && eps <= budget
};

struct SearchDiag {
  long long gate_failures = 0;  // candidates below the validity gate
  long long eps_failures = 0;   // gate-valid candidates over the budget
  long long rate_failures = 0;  // tuples rejected by the rate region
  bool rate_emptied_grid = false;
  std::string compose(const char* space) const {
    std::string reason = "no feasible point in the " + std::string(space);
    std::string families;
    if (rate_emptied_grid) {
      families += (families.empty() ? "" : "; ");
      families += "per-client rate caps pruned every candidate";
    }
    if (gate_failures > 0) {
      families += (families.empty() ? "" : "; ");
      families += "validity gate failed at " + std::to_string(gate_failures) +
                  " candidate(s)";
    }
    if (eps_failures > 0) {
      families += (families.empty() ? "" : "; ");
      families += "epsilon exceeded the budget at " +
                  std::to_string(eps_failures) + " candidate(s)";
    }
    if (rate_failures > 0) {
      families += (families.empty() ? "" : "; ");
      families += "rate constraints rejected " + std::to_string(rate_failures) +
                  " candidate(s)";
    }
    if (!families.empty()) reason += ": " + families;
    return reason;
  }
};

bool identical_powers(const AllocationProblem& prob) {
  for (int i = 1; i < prob.n; ++i) {
    if (prob.power[i] != prob.power[0]) return false;
  }
  return true;
}

std::vector<double> subset_capacities(const AllocationProblem& prob) {
  std::vector<double> caps(1u << prob.n, 0.0);
  for (std::uint32_t mask = 1; mask < (1u << prob.n); ++mask) {
    double power_sum = 0.0;
    for (int i = 0; i < prob.n; ++i) {
      if (mask & (1u << i)) power_sum += prob.power[i];
    }
    caps[mask] = 0.5 * std::log2(1.0 + power_sum);
  }
  return caps;
}

// Walks every index tuple over the per-client candidate lists in
// lexicographic (l_1, m_1, l_2, m_2, ...) order — restricted to nondecreasing
// tuples when the lists are shared (interchangeable clients), where the
// lexicographically smallest representative of each profile multiset is the
// nondecreasing one. Tracks the strict minimum, so the first (lex-smallest)
// optimum encountered is kept.
class TupleScan {
 public:
  TupleScan(const AllocationProblem& prob,
            const std::vector<const std::vector<Candidate>*>& lists,
            bool symmetric, const std::vector<double>& caps, SearchDiag* diag,
            SolveStats* stats)
      : prob_(prob),
        lists_(lists),
        symmetric_(symmetric),
        caps_(caps),
        diag_(diag),
        stats_(stats) {}

  void run() {
    std::vector<std::size_t> idx(prob_.n, 0);
    for (const auto* list : lists_) {
      if (list->empty()) return;  // diag already notes the empty grid
    }
    while (true) {
      visit(idx);
      // Odometer increment, least-significant position last; in the
      // symmetric case positions right of the bumped one restart at its new
      // value instead of zero, which enumerates exactly the nondecreasing
      // tuples in lexicographic order.
      int pos = prob_.n - 1;
      while (pos >= 0) {
        if (++idx[pos] < lists_[pos]->size()) break;
        --pos;
      }
      if (pos < 0) return;
      for (int j = pos + 1; j < prob_.n; ++j) {
        idx[j] = symmetric_ ? idx[pos] : 0;
        if (idx[j] >= lists_[j]->size()) return;  // symmetric tail exhausted
      }
    }
  }

  bool found() const { return best_obj_ < std::numeric_limits<double>::infinity(); }
  const std::vector<std::size_t>& best() const { return best_idx_; }

 private:
  void visit(const std::vector<std::size_t>& idx) {
    if (stats_ != nullptr) {
      ++stats_->candidates_examined;
      ++stats_->objective_evals;
    }
    double obj = 0.0;
    bool per_client_ok = true;
    for (int i = 0; i < prob_.n; ++i) {
      const Candidate& c = (*lists_[i])[idx[i]];
      obj += c.unit_obj;
      if (!c.eps_ok) {
        per_client_ok = false;
        if (diag_ != nullptr) {
          if (!c.gate_ok) {
            ++diag_->gate_failures;
          } else {
            ++diag_->eps_failures;
          }
        }
        break;
      }
    }
    if (!per_client_ok) return;
    for (std::uint32_t mask = 1; mask < (1u << prob_.n); ++mask) {
      double rate_sum = 0.0;
      for (int i = 0; i < prob_.n; ++i) {
        if (mask & (1u << i)) rate_sum += (*lists_[i])[idx[i]].rate;
      }
      if (caps_[mask] - rate_sum < 0.0) {
        if (diag_ != nullptr) ++diag_->rate_failures;
        return;
      }
    }
    if (obj < best_obj_) {
      best_obj_ = obj;
      best_idx_ = idx;
    }
  }

  const AllocationProblem& prob_;
  const std::vector<const std::vector<Candidate>*>& lists_;
  const bool symmetric_;
  const std::vector<double>& caps_;
  SearchDiag* diag_;
  SolveStats* stats_;
  double best_obj_ = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_idx_;
};

Allocation finish(const AllocationProblem& prob, const TupleScan& scan,
                  const std::vector<const std::vector<Candidate>*>& lists,
                  const SearchDiag& diag, const char* space) {
  Allocation alloc;
  if (!scan.found()) {
    alloc.feasible = false;
    alloc.objective = std::numeric_limits<double>::infinity();
    alloc.reason = diag.compose(space);
    return alloc;
  }
  alloc.feasible = true;
  for (int i = 0; i < prob.n; ++i) {
    const Candidate& c = (*lists[i])[scan.best()[i]];
    alloc.clients.push_back({c.l, c.m});
    alloc.per_client_epsilon.push_back(c.eps);
  }
  // Recompute left-to-right so exhaustive and pruned report bit-identical
  // objective values regardless of their accumulation order.
  alloc.objective = allocation_objective(prob, alloc.clients);
  return alloc;
}

double tuple_space(const std::vector<std::size_t>& sizes, bool symmetric) {
  if (symmetric) {
    // Multisets of size n over K shared candidates: C(K + n - 1, n).
    const double k = static_cast<double>(sizes[0]);
    double count = 1.0;
    const double n = static_cast<double>(sizes.size());
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      count *= (k + static_cast<double>(j)) / (n - static_cast<double>(j));
      if (count > 1e18) return count;
    }
    return count;
  }
  double count = 1.0;
  for (std::size_t s : sizes) {
    count *= static_cast<double>(s);
    if (count > 1e18) return count;
  }
  return count;
}

}  // namespace

double allocation_objective(const AllocationProblem& prob,
                            const std::vector<ClientAllocation>& cand) {
  check_problem(prob);
  if (static_cast<int>(cand.size()) != prob.n) {
    throw ValidationError("candidate: need exactly n = " +
                          std::to_string(prob.n) + " clients, got " +
                          std::to_string(cand.size()));
  }
  double obj = 0.0;
  for (const ClientAllocation& c : cand) {
    if (c.levels < 2 || c.trials < 1) {
      throw ValidationError("candidate: need levels >= 2 and trials >= 1");
    }
    obj += unit_objective(prob, c.levels, c.trials);
  }
  return obj;
}

FeasibilityDiagnosis is_feasible(const AllocationProblem& prob,
                                 const std::vector<ClientAllocation>& cand) {
  check_problem(prob);
  FeasibilityDiagnosis diag;
  if (static_cast<int>(cand.size()) != prob.n) {
    diag.violations.push_back("candidate: need exactly n = " +
                              std::to_string(prob.n) + " clients, got " +
                              std::to_string(cand.size()));
    return diag;
  }
  for (int i = 0; i < prob.n; ++i) {
    if (cand[i].levels < 2) {
      diag.violations.push_back("client " + std::to_string(i) +
                                ": levels must be >= 2, got " +
                                std::to_string(cand[i].levels));
    }
    if (cand[i].trials < 1) {
      diag.violations.push_back("client " + std::to_string(i) +
                                ": trials must be >= 1, got " +
                                std::to_string(cand[i].trials));
    }
  }
  if (!diag.violations.empty()) return diag;

  for (int i = 0; i < prob.n; ++i) {
    const GateCheck gate = check_gate(cand[i].trials, prob.p, cand[i].levels,
                                      prob.G, prob.d, prob.delta);
    if (!gate.ok) {
      diag.violations.push_back(
          "client " + std::to_string(i) + ": validity gate failed (lhs " +
          std::to_string(gate.lhs) + " < " + gate.binding + " arm " +
          std::to_string(std::max(gate.log_arm, gate.step_arm)) + ")");
      continue;  // epsilon undefined below the gate — skip that check
    }
    const SensitivityBounds sens =
        sensitivity_bounds(cand[i].levels, prob.G, prob.D, prob.d, prob.delta);
    const double eps = epsilon_formula(sens, cand[i].trials, prob.p,
                                       prob.delta, prob.d, prob.consts);
    if (!(eps <= prob.eps_budget)) {
      diag.violations.push_back("client " + std::to_string(i) + ": epsilon " +
                                std::to_string(eps) + " exceeds budget " +
                                std::to_string(prob.eps_budget));
    }
  }

  std::vector<int> levels(prob.n);
  std::vector<long long> trials(prob.n);
  for (int i = 0; i < prob.n; ++i) {
    levels[i] = cand[i].levels;
    trials[i] = cand[i].trials;
  }
  const FeasibilityReport rate =
      feasible(ChannelConfig{prob.N, prob.power}, levels, trials, prob.d);
  if (!rate.feasible) {
    for (const SubsetSlack& row : rate.subsets) {
      if (row.slack < 0.0) {
        diag.violations.push_back(
            "rate region violated for subset mask " + std::to_string(row.mask) +
            ": rate " + std::to_string(row.rate_sum) + " > capacity " +
            std::to_string(row.cap));
      }
    }
  }
  diag.ok = diag.violations.empty();
  return diag;
}

long long gate_min_trials(const AllocationProblem& prob, int levels) {
  check_problem(prob);
  if (levels < 2) {
    throw ValidationError("levels: need >= 2, got " + std::to_string(levels));
  }
  const double arm = gate_arm(prob, levels);
  const double pq = prob.p * (1.0 - prob.p);
  long long m = static_cast<long long>(std::ceil(arm / pq));
  if (m < 1) m = 1;
  // std::ceil works on rounded doubles; fix up against the exact predicate.
  while (m > 1 && gate_lhs(prob, m - 1) >= arm) --m;
  while (m <= prob.m_max && gate_lhs(prob, m) < arm) ++m;
  return m <= prob.m_max ? m : prob.m_max + 1;
}

namespace {

// Smallest trials in [gate_min, m_max] meeting the budget at these levels
// (epsilon is strictly decreasing in trials), or m_max + 1 when none does.
long long budget_min_trials(const AllocationProblem& prob,
                            const SensitivityBounds& sens, long long gate_min,
                            SolveStats* stats) {
  auto eps_at = [&](long long m) {
    if (stats != nullptr) ++stats->candidates_examined;
    return epsilon_formula(sens, m, prob.p, prob.delta, prob.d, prob.consts);
  };
  if (std::isinf(prob.eps_budget)) return gate_min;
  if (eps_at(gate_min) <= prob.eps_budget) return gate_min;
  if (!(eps_at(prob.m_max) <= prob.eps_budget)) return prob.m_max + 1;
  long long lo = gate_min, hi = prob.m_max;  // eps(lo) > budget >= eps(hi)
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (eps_at(mid) <= prob.eps_budget ? hi : lo) = mid;
  }
  return hi;
}

std::vector<Candidate> pruned_candidates(const AllocationProblem& prob,
                                         double singleton_cap,
                                         SearchDiag* diag, SolveStats* stats) {
  std::vector<Candidate> list;
  for (int l = 2; l <= prob.l_max; ++l) {
    const long long gate_min = gate_min_trials(prob, l);
    if (gate_min > prob.m_max) {
      if (diag != nullptr) ++diag->gate_failures;
      continue;
    }
    const SensitivityBounds sens =
        sensitivity_bounds(l, prob.G, prob.D, prob.d, prob.delta);
    const long long m = budget_min_trials(prob, sens, gate_min, stats);
    if (m > prob.m_max) {
      if (diag != nullptr) ++diag->eps_failures;
      continue;
    }
    Candidate c;
    c.l = l;
    c.m = m;
    c.rate = rate_of(l, m, prob.d, prob.N);
    if (c.rate > singleton_cap) {  // cannot fit even alone
      if (diag != nullptr) ++diag->rate_failures;
      continue;
    }
    c.unit_obj = unit_objective(prob, l, m);
    c.eps = epsilon_formula(sens, m, prob.p, prob.delta, prob.d, prob.consts);
    c.gate_ok = true;
    c.eps_ok = c.eps <= prob.eps_budget || std::isinf(prob.eps_budget);
    if (!c.eps_ok) continue;  // only when even m_max cannot meet the budget
    list.push_back(c);
  }
  return list;
}

std::vector<Candidate> exhaustive_candidates(const AllocationProblem& prob,
                                             long long alphabet,
                                             SolveStats* stats) {
  std::vector<Candidate> list;
  const int l_hi = static_cast<int>(
      std::min<long long>(prob.l_max, alphabet - 1));
  for (int l = 2; l <= l_hi; ++l) {
    const double arm = gate_arm(prob, l);
    const SensitivityBounds sens =
        sensitivity_bounds(l, prob.G, prob.D, prob.d, prob.delta);
    const long long m_hi =
        std::min<long long>(prob.m_max, alphabet - static_cast<long long>(l));
    for (long long m = 1; m <= m_hi; ++m) {
      if (stats != nullptr) ++stats->candidates_examined;
      Candidate c;
      c.l = l;
      c.m = m;
      c.rate = rate_of(l, m, prob.d, prob.N);
      c.unit_obj = unit_objective(prob, l, m);
      c.gate_ok = gate_lhs(prob, m) >= arm;
      if (c.gate_ok) {
        c.eps =
            epsilon_formula(sens, m, prob.p, prob.delta, prob.d, prob.consts);
        c.eps_ok = c.eps <= prob.eps_budget;
      }
      list.push_back(c);
    }
  }
  return list;
}

}  // namespace

Allocation solve_exhaustive(const AllocationProblem& prob, SolveStats* stats) {
  check_problem(prob);
  SearchDiag diag;
  const bool symmetric = identical_powers(prob);
  const std::vector<double> caps = subset_capacities(prob);

  std::vector<long long> alphabets(prob.n);
  std::vector<std::size_t> grid_sizes(prob.n);
  for (int i = 0; i < prob.n; ++i) {
    alphabets[i] = alphabet_cap(prob, caps[1u << i]);
    if (alphabets[i] < 3) diag.rate_emptied_grid = true;
    double count = 0.0;
    const long long l_hi = std::min<long long>(prob.l_max, alphabets[i] - 1);
    for (long long l = 2; l <= l_hi; ++l) {
      count += static_cast<double>(std::min<long long>(prob.m_max,
                                                       alphabets[i] - l));
    }
    if (count > kMaxPerClientGrid) {
      throw ValidationError(
          "exhaustive grid too large: client " + std::to_string(i) + " has " +
          std::to_string(static_cast<long long>(count)) +
          " candidates (cap " +
          std::to_string(static_cast<long long>(kMaxPerClientGrid)) +
          "); use solve_pruned");
    }
    grid_sizes[i] = static_cast<std::size_t>(count);
  }
  if (tuple_space(grid_sizes, symmetric) > kMaxTupleSpace) {
    throw ValidationError(
        "exhaustive tuple space too large; use solve_pruned");
  }

  std::vector<std::vector<Candidate>> grids;
  if (symmetric) {
    grids.push_back(exhaustive_candidates(prob, alphabets[0], stats));
  } else {
    for (int i = 0; i < prob.n; ++i) {
      grids.push_back(exhaustive_candidates(prob, alphabets[i], stats));
    }
  }
  std::vector<const std::vector<Candidate>*> lists(prob.n);
  for (int i = 0; i < prob.n; ++i) {
    lists[i] = symmetric ? &grids[0] : &grids[i];
  }

  TupleScan scan(prob, lists, symmetric, caps, &diag, stats);
  scan.run();
  return finish(prob, scan, lists, diag, "search grid");
}

Allocation solve_pruned(const AllocationProblem& prob, SolveStats* stats) {
  check_problem(prob);
  SearchDiag diag;
  const bool symmetric = identical_powers(prob);
  const std::vector<double> caps = subset_capacities(prob);

  // For each level the optimum pins trials to max(gate minimum, budget
  // minimum): the objective strictly increases in trials while epsilon
  // strictly decreases and the rate footprint strictly increases, so any
  // feasible tuple with larger trials is strictly worse and any with smaller
  // trials is infeasible. Enumeration then only has to cover level profiles.
  std::vector<std::vector<Candidate>> grids;
  if (symmetric) {
    grids.push_back(pruned_candidates(prob, caps[1u << 0], &diag, stats));
  } else {
    for (int i = 0; i < prob.n; ++i) {
      grids.push_back(pruned_candidates(prob, caps[1u << i], &diag, stats));
    }
  }
  std::vector<const std::vector<Candidate>*> lists(prob.n);
  std::vector<std::size_t> grid_sizes(prob.n);
  for (int i = 0; i < prob.n; ++i) {
    lists[i] = symmetric ? &grids[0] : &grids[i];
    grid_sizes[i] = lists[i]->size();
    if (lists[i]->empty() && diag.gate_failures == 0 &&
        diag.eps_failures == 0) {
      diag.rate_emptied_grid = true;  // singleton caps removed every level
    }
  }
  if (tuple_space(grid_sizes, symmetric) > kMaxTupleSpace) {
    throw ValidationError("profile space too large for enumeration");
  }

  TupleScan scan(prob, lists, symmetric, caps, &diag, stats);
  scan.run();
  return finish(prob, scan, lists, diag, "pruned profile space");
}

bool has_improving_unit_move(const AllocationProblem& prob,
                             const Allocation& alloc) {
  check_problem(prob);
  if (!alloc.feasible || static_cast<int>(alloc.clients.size()) != prob.n) {
    throw ValidationError(
        "unit-move certificate needs a feasible allocation with n clients");
  }
  const double base = allocation_objective(prob, alloc.clients);
  for (int i = 0; i < prob.n; ++i) {
    // Only levels+1 and trials-1 can lower the objective (it is strictly
    // decreasing in levels and strictly increasing in trials).
    std::vector<ClientAllocation> cand = alloc.clients;
    cand[i].levels += 1;
    if (is_feasible(prob, cand).ok &&
        allocation_objective(prob, cand) < base) {
      return true;
    }
    cand = alloc.clients;
    if (cand[i].trials >= 2) {
      cand[i].trials -= 1;
      if (is_feasible(prob, cand).ok &&
          allocation_objective(prob, cand) < base) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace binldp
