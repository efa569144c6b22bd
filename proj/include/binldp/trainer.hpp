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

#ifndef BINLDP_TRAINER_HPP_
#define BINLDP_TRAINER_HPP_

#include <Eigen/Dense>

#include "binldp/allocator.hpp"
#include "binldp/core.hpp"
#include "binldp/privacy.hpp"

namespace binldp {

// One client's local dataset: features X (d x K, one column per sample) and
// labels y (K).
struct ClientData {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

// i.i.d. standard-normal samples: each record is a (d+1)-vector whose first d
// coordinates form the feature column and whose last is the label. Client i
// draws its sizes[i] records from stream (seed, client=i, round=0, data).
std::vector<ClientData> synthesize_data(int n, int d,
                                        const std::vector<int>& sizes,
                                        std::uint64_t seed);

// Global ridge objective over all clients' samples:
//   (1/|data|) sum_k (w^T x_k - y_k)^2 + (beta/2) ||w||^2.
double ridge_loss(const std::vector<ClientData>& data, const Vec& w,
                  double beta);

// One client's local gradient:
//   (1/K) sum_k [ 2 (w^T x_k - y_k) x_k + beta w ].
Vec local_gradient(const ClientData& client, const Vec& w, double beta);

// l2 rescale to norm <= D, then coordinate clamp to [-G, G] (in that order).
// Sets *changed when any value moved.
Vec clip_gradient(const Vec& g, double D, double G, bool* changed = nullptr);

// Exact minimizer of the global ridge objective via the normal equations
//   (2 X X^T / |data| + beta I) w = 2 X y / |data|.
Vec ridge_closed_form(const std::vector<ClientData>& data, double beta);

// Largest eigenvalue of the objective's Hessian 2 X X^T / |data| + beta I;
// the smoothness constant used by the convergence bound when not supplied.
double hessian_largest_eigenvalue(const std::vector<ClientData>& data,
                                  double beta);

// Aggregate mean-squared-error budget of the mechanism per round:
//   (d / n^2) sum_i s_i^2 (1/4 + m_i p (1 - p)),  s_i = 2G / (l_i - 1).
double mse_bound_value(const std::vector<ClientAllocation>& alloc, int n,
                       int d, double G, double p);

// Closed-form deviation bound after T rounds of 1/(lambda t) steps:
//   (2 mu / (lambda^2 T^2)) * sum_t [ sum_i d G_t^2 / (n^2 (l_i - 1)^2)
//                                     * (p (1-p) m_i + 1/4) + D_t^2 ].
// G_t / D_t are per-round clip schedules (constant vectors in the provided
// experiments); T = G_t.size() = D_t.size().
double convergence_bound(const std::vector<double>& G_t,
                         const std::vector<double>& D_t,
                         const std::vector<ClientAllocation>& alloc, int n,
                         int d, double p, double lambda, double mu);

struct RoundRecord {
  int t = 0;
  double loss = 0.0;           // global ridge loss at the post-update iterate
  double gap = 0.0;            // loss - loss at the closed-form optimum
  double grad_norm = 0.0;      // ||(1/n) sum_i clip(g_i)||_2
  double mse_empirical = 0.0;  // ||g_hat - (1/n) sum_i clip(g_i)||^2, this round
  double mse_bound = 0.0;      // closed-form per-round budget (constant)
  double epsilon = 0.0;        // accountant value for the round's mechanism
  double gamma = 0.0;          // step size 1 / (lambda t)
  bool clipped = false;        // whether any client's gradient was clipped
};

struct RoundOutcome {
  Vec w;
  RoundRecord record;
};

// One synchronized round at iterate w (1-based round index t): local
// gradients, clip, quantize (stream purpose kQuantize), binomial noise
// (kBinomial), error-free aggregation, gradient step with gamma = 1/(lambda t).
RoundOutcome run_round(const Vec& w, int t, const std::vector<ClientData>& data,
                       const std::vector<ClientAllocation>& alloc,
                       const ExperimentConfig& cfg, double lambda,
                       double loss_opt, double epsilon);

struct RunResult {
  std::vector<RoundRecord> rounds;
  Vec w_final;
  double final_loss = 0.0;
  double final_gap = 0.0;
  double loss_at_optimum = 0.0;
  double lambda_used = 0.0;
  double mu_used = 0.0;
  bool any_clipping = false;
  double bound_value = 0.0;  // convergence_bound for this run's parameters
  PrivacyReport privacy;
  std::vector<ClientAllocation> allocation;
};

// Full deterministic training run for a fixed feasible allocation. Verifies
// rate feasibility up front and asserts it each round; synthesizes data,
// resolves lambda (= beta when unset) and mu (Hessian estimate when unset),
// and iterates run_round for cfg.T rounds from w = 0.
RunResult run_training(const ExperimentConfig& cfg,
                       const std::vector<ClientAllocation>& alloc);

struct MseEstimate {
  double mean = 0.0;
  double stderr_mean = 0.0;  // std of the mean estimate
  int resamples = 0;
  bool low_sample_warning = false;  // resamples < 100
};

// Monte-Carlo estimate of E||g_hat - g||^2 at a frozen iterate w: the clipped
// per-client gradients are fixed, the mechanism (quantize + noise) is
// resampled; resample k uses round index k in the stream keys.
MseEstimate empirical_mse(const Vec& w, const std::vector<ClientData>& data,
                          const std::vector<ClientAllocation>& alloc,
                          const ExperimentConfig& cfg, int resamples,
                          std::uint64_t seed);

// Allocation problem induced by an experiment config.
AllocationProblem problem_from_config(const ExperimentConfig& cfg);

}  // namespace binldp

#endif  // BINLDP_TRAINER_HPP_
