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

#include "binldp/trainer.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace binldp {
namespace {

Eigen::VectorXd to_eigen(const Vec& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

Vec from_eigen(const Eigen::VectorXd& v) {
  return Vec(v.data(), v.data() + v.size());
}

void check_data(const std::vector<ClientData>& data, std::size_t dim) {
  if (data.empty()) throw ValidationError("need at least one client dataset");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].X.cols() < 1 || data[i].X.cols() != data[i].y.size()) {
      throw ValidationError("client " + std::to_string(i) +
                            ": need >= 1 sample and matching labels");
    }
    if (static_cast<std::size_t>(data[i].X.rows()) != dim) {
      throw ValidationError(
          "client " + std::to_string(i) + ": feature dimension " +
          std::to_string(data[i].X.rows()) + " does not match model size " +
          std::to_string(dim));
    }
  }
}

long long total_samples(const std::vector<ClientData>& data) {
  long long total = 0;
  for (const ClientData& c : data) total += c.X.cols();
  return total;
}

// Hessian of the global ridge objective, 2 X X^T / |data| + beta I.
Eigen::MatrixXd global_hessian(const std::vector<ClientData>& data,
                               double beta) {
  const Eigen::Index d = data.front().X.rows();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
  for (const ClientData& c : data) H += c.X * c.X.transpose();
  H *= 2.0 / static_cast<double>(total_samples(data));
  H += beta * Eigen::MatrixXd::Identity(d, d);
  return H;
}

void check_allocation_shape(const std::vector<ClientAllocation>& alloc,
                            std::size_t n) {
  if (alloc.size() != n) {
    throw ValidationError("allocation: need exactly " + std::to_string(n) +
                          " clients, got " + std::to_string(alloc.size()));
  }
  for (std::size_t i = 0; i < alloc.size(); ++i) {
    if (alloc[i].levels < 2 || alloc[i].trials < 1) {
      throw ValidationError("allocation: client " + std::to_string(i) +
                            " needs levels >= 2 and trials >= 1");
    }
  }
}

// One mechanism pass over all clients at frozen clipped gradients: quantize
// with round-index `round`, perturb, aggregate. Returns the received mean.
Eigen::VectorXd mechanism_pass(const std::vector<Vec>& clipped,
                               const std::vector<ClientAllocation>& alloc,
                               const ExperimentConfig& cfg, std::uint64_t seed,
                               std::uint32_t round) {
  const std::size_t n = clipped.size();
  Eigen::VectorXd recv_sum = Eigen::VectorXd::Zero(cfg.d);
  for (std::size_t i = 0; i < n; ++i) {
    const QuantizerConfig qc{cfg.G, alloc[i].levels};
    const double step = quant_step(qc);
    const std::uint32_t client = static_cast<std::uint32_t>(i);
    const Vec q = quantize_vector(clipped[i], qc, seed,
                                  {client, round, StreamPurpose::kQuantize});
    const Vec x = perturb(q, {alloc[i].trials, cfg.p, step}, seed,
                          {client, round, StreamPurpose::kBinomial});
    recv_sum += to_eigen(x);
  }
  return recv_sum / static_cast<double>(n);
}

}  // namespace

std::vector<ClientData> synthesize_data(int n, int d,
                                        const std::vector<int>& sizes,
                                        std::uint64_t seed) {
  if (n < 1 || d < 1) {
    throw ValidationError("need n >= 1 and d >= 1, got n = " +
                          std::to_string(n) + ", d = " + std::to_string(d));
  }
  if (static_cast<int>(sizes.size()) != n) {
    throw ValidationError("sizes: need exactly n = " + std::to_string(n) +
                          " entries, got " + std::to_string(sizes.size()));
  }
  std::vector<ClientData> data(n);
  for (int i = 0; i < n; ++i) {
    if (sizes[i] < 1) {
      throw ValidationError("sizes[" + std::to_string(i) +
                            "]: need >= 1, got " + std::to_string(sizes[i]));
    }
    Rng stream(seed, {static_cast<std::uint32_t>(i), 0, StreamPurpose::kData});
    data[i].X.resize(d, sizes[i]);
    data[i].y.resize(sizes[i]);
    for (int k = 0; k < sizes[i]; ++k) {
      Rng record = stream.substream(static_cast<std::uint64_t>(k));
      for (int j = 0; j < d; ++j) data[i].X(j, k) = record.normal();
      data[i].y(k) = record.normal();
    }
  }
  return data;
}

double ridge_loss(const std::vector<ClientData>& data, const Vec& w,
                  double beta) {
  check_data(data, w.size());
  const Eigen::VectorXd wv = to_eigen(w);
  double sum_sq = 0.0;
  for (const ClientData& c : data) {
    sum_sq += (c.X.transpose() * wv - c.y).squaredNorm();
  }
  return sum_sq / static_cast<double>(total_samples(data)) +
         0.5 * beta * wv.squaredNorm();
}

Vec local_gradient(const ClientData& client, const Vec& w, double beta) {
  check_data({client}, w.size());
  const Eigen::VectorXd wv = to_eigen(w);
  const Eigen::VectorXd resid = client.X.transpose() * wv - client.y;
  const Eigen::VectorXd g =
      (2.0 / static_cast<double>(client.X.cols())) * (client.X * resid) +
      beta * wv;
  return from_eigen(g);
}

Vec clip_gradient(const Vec& g, double D, double G, bool* changed) {
  if (!(std::isfinite(D) && D > 0.0 && std::isfinite(G) && G > 0.0)) {
    throw ValidationError("clip bounds: need finite D > 0 and G > 0");
  }
  double norm_sq = 0.0;
  for (double x : g) {
    if (!std::isfinite(x)) throw ValidationError("clip input must be finite");
    norm_sq += x * x;
  }
  const double norm = std::sqrt(norm_sq);
  const double scale = norm > D ? D / norm : 1.0;
  Vec out(g.size());
  bool any = false;
  for (std::size_t j = 0; j < g.size(); ++j) {
    double x = g[j] * scale;
    x = std::min(G, std::max(-G, x));
    out[j] = x;
    any = any || (x != g[j]);
  }
  if (changed != nullptr) *changed = any;
  return out;
}

Vec ridge_closed_form(const std::vector<ClientData>& data, double beta) {
  if (data.empty()) throw ValidationError("need at least one client dataset");
  check_data(data, static_cast<std::size_t>(data.front().X.rows()));
  if (!(std::isfinite(beta) && beta > 0.0)) {
    throw ValidationError("beta: need finite > 0, got " + std::to_string(beta));
  }
  const Eigen::Index d = data.front().X.rows();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  for (const ClientData& c : data) b += c.X * c.y;
  b *= 2.0 / static_cast<double>(total_samples(data));
  // The system matrix is positive definite for beta > 0, so LLT applies.
  return from_eigen(global_hessian(data, beta).llt().solve(b));
}

double hessian_largest_eigenvalue(const std::vector<ClientData>& data,
                                  double beta) {
  if (data.empty()) throw ValidationError("need at least one client dataset");
  check_data(data, static_cast<std::size_t>(data.front().X.rows()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      global_hessian(data, beta), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

double mse_bound_value(const std::vector<ClientAllocation>& alloc, int n,
                       int d, double G, double p) {
  if (n < 1 || d < 1 || !(std::isfinite(G) && G > 0.0) ||
      !(std::isfinite(p) && p > 0.0 && p < 1.0)) {
    throw ValidationError("mse bound: need n, d >= 1, G > 0, 0 < p < 1");
  }
  check_allocation_shape(alloc, static_cast<std::size_t>(n));
  double sum = 0.0;
  for (const ClientAllocation& c : alloc) {
    const double step = 2.0 * G / static_cast<double>(c.levels - 1);
    sum += step * step *
           (0.25 + static_cast<double>(c.trials) * p * (1.0 - p));
  }
  return static_cast<double>(d) / (static_cast<double>(n) * n) * sum;
}

double convergence_bound(const std::vector<double>& G_t,
                         const std::vector<double>& D_t,
                         const std::vector<ClientAllocation>& alloc, int n,
                         int d, double p, double lambda, double mu) {
  if (G_t.empty() || G_t.size() != D_t.size()) {
    throw ValidationError(
        "need nonempty per-round schedules of equal length");
  }
  if (n < 1 || d < 1 || !(std::isfinite(p) && p > 0.0 && p < 1.0) ||
      !(std::isfinite(lambda) && lambda > 0.0) ||
      !(std::isfinite(mu) && mu > 0.0)) {
    throw ValidationError(
        "convergence bound: need n, d >= 1, 0 < p < 1, lambda > 0, mu > 0");
  }
  check_allocation_shape(alloc, static_cast<std::size_t>(n));
  const double T = static_cast<double>(G_t.size());
  double total = 0.0;
  for (std::size_t t = 0; t < G_t.size(); ++t) {
    if (!(std::isfinite(G_t[t]) && G_t[t] > 0.0) ||
        !(std::isfinite(D_t[t]) && D_t[t] > 0.0)) {
      throw ValidationError("schedules must be finite and positive");
    }
    double quant = 0.0;
    for (const ClientAllocation& c : alloc) {
      const double span = static_cast<double>(c.levels - 1);
      quant += static_cast<double>(d) * G_t[t] * G_t[t] /
               (static_cast<double>(n) * n * span * span) *
               (p * (1.0 - p) * static_cast<double>(c.trials) + 0.25);
    }
    total += quant + D_t[t] * D_t[t];
  }
  return 2.0 * mu / (lambda * lambda * T * T) * total;
}

RoundOutcome run_round(const Vec& w, int t, const std::vector<ClientData>& data,
                       const std::vector<ClientAllocation>& alloc,
                       const ExperimentConfig& cfg, double lambda,
                       double loss_opt, double epsilon) {
  if (t < 1) throw ValidationError("round index t must be >= 1");
  if (static_cast<int>(w.size()) != cfg.d) {
    throw ValidationError("model size does not match config d");
  }
  check_data(data, w.size());
  check_allocation_shape(alloc, data.size());
  const std::size_t n = data.size();

  bool any_clipped = false;
  std::vector<Vec> clipped(n);
  Eigen::VectorXd true_sum = Eigen::VectorXd::Zero(cfg.d);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec g = local_gradient(data[i], w, cfg.beta);
    bool changed = false;
    clipped[i] = clip_gradient(g, cfg.D, cfg.G, &changed);
    any_clipped = any_clipped || changed;
    true_sum += to_eigen(clipped[i]);
  }
  const Eigen::VectorXd g_true = true_sum / static_cast<double>(n);
  const Eigen::VectorXd g_hat =
      mechanism_pass(clipped, alloc, cfg, cfg.seed,
                     static_cast<std::uint32_t>(t));

  const double gamma = 1.0 / (lambda * static_cast<double>(t));
  const Eigen::VectorXd w_next = to_eigen(w) - gamma * g_hat;

  RoundOutcome out;
  out.w = from_eigen(w_next);
  out.record.t = t;
  out.record.loss = ridge_loss(data, out.w, cfg.beta);
  out.record.gap = out.record.loss - loss_opt;
  out.record.grad_norm = g_true.norm();
  out.record.mse_empirical = (g_hat - g_true).squaredNorm();
  out.record.mse_bound = mse_bound_value(alloc, static_cast<int>(n), cfg.d,
                                         cfg.G, cfg.p);
  out.record.epsilon = epsilon;
  out.record.gamma = gamma;
  out.record.clipped = any_clipped;
  return out;
}

RunResult run_training(const ExperimentConfig& cfg,
                       const std::vector<ClientAllocation>& alloc) {
  validate_experiment_config(cfg);
  check_allocation_shape(alloc, static_cast<std::size_t>(cfg.n));

  std::vector<int> levels(cfg.n);
  std::vector<long long> trials(cfg.n);
  for (int i = 0; i < cfg.n; ++i) {
    levels[i] = alloc[i].levels;
    trials[i] = alloc[i].trials;
  }
  const ChannelConfig ch{cfg.N, cfg.power};
  if (!feasible(ch, levels, trials, cfg.d).feasible) {
    throw ValidationError(
        "allocation is rate-infeasible for the channel; aborting the run");
  }

  const MechanismConstants consts =
      MechanismConstants::resolve(cfg.p, cfg.b_p, cfg.c_p);
  const PrivacyReport privacy = accountant(levels, trials, cfg.p, cfg.delta,
                                           cfg.G, cfg.D, cfg.d, consts);
  if (!privacy.gate_ok) {
    for (const GateCheck& gate : privacy.gates) {
      if (!gate.ok) {
        throw AccountantError(
            "allocation fails the validity gate; no epsilon can be reported",
            gate);
      }
    }
  }

  const std::vector<ClientData> data = synthesize_data(
      cfg.n, cfg.d, std::vector<int>(cfg.n, cfg.samples_per_client), cfg.seed);
  const Vec w_star = ridge_closed_form(data, cfg.beta);
  const double loss_opt = ridge_loss(data, w_star, cfg.beta);
  const double lambda = cfg.lambda == kUnset ? cfg.beta : cfg.lambda;
  const double mu = cfg.mu == kUnset ? hessian_largest_eigenvalue(data, cfg.beta)
                                     : cfg.mu;

  RunResult result;
  result.loss_at_optimum = loss_opt;
  result.lambda_used = lambda;
  result.mu_used = mu;
  result.privacy = privacy;
  result.allocation = alloc;
  result.any_clipping = false;
  result.rounds.reserve(cfg.T);

  Vec w(cfg.d, 0.0);
  for (int t = 1; t <= cfg.T; ++t) {
    // The allocation and channel are time-invariant; re-assert anyway so a
    // broken invariant cannot silently corrupt a long run.
    if (!feasible(ch, levels, trials, cfg.d).feasible) {
      throw ValidationError("allocation became rate-infeasible mid-run");
    }
    RoundOutcome outcome =
        run_round(w, t, data, alloc, cfg, lambda, loss_opt, privacy.epsilon);
    w = std::move(outcome.w);
    result.any_clipping = result.any_clipping || outcome.record.clipped;
    result.rounds.push_back(outcome.record);
  }

  result.w_final = w;
  result.final_loss = result.rounds.back().loss;
  result.final_gap = result.rounds.back().gap;
  result.bound_value = convergence_bound(
      std::vector<double>(cfg.T, cfg.G), std::vector<double>(cfg.T, cfg.D),
      alloc, cfg.n, cfg.d, cfg.p, lambda, mu);
  return result;
}

MseEstimate empirical_mse(const Vec& w, const std::vector<ClientData>& data,
                          const std::vector<ClientAllocation>& alloc,
                          const ExperimentConfig& cfg, int resamples,
                          std::uint64_t seed) {
  if (resamples < 1) {
    throw ValidationError("resamples: need >= 1, got " +
                          std::to_string(resamples));
  }
  check_data(data, w.size());
  check_allocation_shape(alloc, data.size());
  const std::size_t n = data.size();

  std::vector<Vec> clipped(n);
  Eigen::VectorXd true_sum = Eigen::VectorXd::Zero(cfg.d);
  for (std::size_t i = 0; i < n; ++i) {
    clipped[i] = clip_gradient(local_gradient(data[i], w, cfg.beta), cfg.D,
                               cfg.G, nullptr);
    true_sum += to_eigen(clipped[i]);
  }
  const Eigen::VectorXd g_true = true_sum / static_cast<double>(n);

  double mean = 0.0;
  double m2 = 0.0;  // Welford accumulator
  for (int k = 0; k < resamples; ++k) {
    const Eigen::VectorXd g_hat = mechanism_pass(
        clipped, alloc, cfg, seed, static_cast<std::uint32_t>(k));
    const double err = (g_hat - g_true).squaredNorm();
    const double delta1 = err - mean;
    mean += delta1 / static_cast<double>(k + 1);
    m2 += delta1 * (err - mean);
  }

  MseEstimate est;
  est.mean = mean;
  est.resamples = resamples;
  est.stderr_mean =
      resamples >= 2
          ? std::sqrt(m2 / (static_cast<double>(resamples) - 1.0) /
                      static_cast<double>(resamples))
          : 0.0;
  est.low_sample_warning = resamples < 100;
  return est;
}

AllocationProblem problem_from_config(const ExperimentConfig& cfg) {
  validate_experiment_config(cfg);
  AllocationProblem prob;
  prob.n = cfg.n;
  prob.d = cfg.d;
  prob.N = cfg.N;
  prob.power = cfg.power;
  prob.G = cfg.G;
  prob.D = cfg.D;
  prob.p = cfg.p;
  prob.delta = cfg.delta;
  prob.eps_budget = cfg.eps_budget;
  prob.consts = MechanismConstants::resolve(cfg.p, cfg.b_p, cfg.c_p);
  prob.l_max = cfg.l_max;
  prob.m_max = cfg.m_max;
  return prob;
}

}  // namespace binldp
