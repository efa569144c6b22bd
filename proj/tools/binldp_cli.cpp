// Copyright 2026 The binldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// binldp — command-line driver for the private-quantized-aggregation
// simulator.
//
// Subcommands:
//   train     Solve the rate/noise allocation for a config, run the full
//             training loop, and write into --out:
//               run_<hash>_seed<seed>.csv      per-round metrics
//               summary_<hash>_seed<seed>.json run summary (loss, privacy,
//                                              allocation, channel slack)
//               config_<hash>.json             resolved config echo
//   sweep     Re-run training across one axis (snr_db | eps_budget | rounds),
//             re-solving the allocation at every point. Each point runs
//             --repeats times with seeds derived from (base seed, axis
//             index, repeat index). Writes sweep_points.csv (long format,
//             one row per run, failures recorded in place) and
//             sweep_summary.csv (median / quartiles per axis value).
//   allocate  Solve the allocation only; print levels, trials, objective,
//             epsilon, and per-subset rate slack, and write a one-row
//             allocate_<hash>.csv.
//   selftest  Fast invariant checks over the whole pipeline (quantizer
//             unbiasedness, mechanism moments, accountant gate, solver
//             agreement, run determinism). Prints one line per check.
//
// Exit codes: 0 ok, 1 config error, 2 infeasible, 3 runtime failure.
//
// Examples:
//   binldp train    --config configs/base.json --out runs/
//   binldp sweep    --config configs/base.json --axis snr_db \
//                   --values 0,5,10 --repeats 20 --out sweeps/snr/
//   binldp allocate --config configs/base.json
//   binldp selftest
//
// Every CSV row carries the config hash and the seed that produced it, so
// any figure built from these files can be regenerated from its own
// metadata.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <locale>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "binldp/allocator.hpp"
#include "binldp/channel.hpp"
#include "binldp/config.hpp"
#include "binldp/core.hpp"
#include "binldp/privacy.hpp"
#include "binldp/quantizer.hpp"
#include "binldp/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitRuntimeFailure = 3;

// Full-precision, locale-independent float formatting. Two runs of the same
// configuration must produce byte-identical CSV files, so every number that
// reaches a file goes through here.
std::string fmt(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt(long long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

// Joins per-client values into a single unquoted CSV field.
template <typename T>
std::string join_bar(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += '|';
    out += fmt(xs[i]);
  }
  return out;
}

// Keeps free-text messages CSV-safe without quoting rules.
std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string subset_name(std::uint32_t mask, char sep = ',') {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i) {
    if (mask & (1u << i)) {
      if (!first) out += sep;
      out += std::to_string(i);
      first = false;
    }
  }
  out += '}';
  return out;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

// Linear-interpolation quantile of a pre-sorted sample (the convention most
// plotting stacks default to), so the summary CSV matches what a user would
// recompute from the points file.
double quantile_sorted(const std::vector<double>& xs, double q) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] + (xs[hi] - xs[lo]) * frac;
}

std::vector<int> alloc_levels(const binldp::Allocation& a) {
  std::vector<int> out;
  out.reserve(a.clients.size());
  for (const auto& c : a.clients) out.push_back(c.levels);
  return out;
}

std::vector<long long> alloc_trials(const binldp::Allocation& a) {
  std::vector<long long> out;
  out.reserve(a.clients.size());
  for (const auto& c : a.clients) out.push_back(c.trials);
  return out;
}

json channel_json(const binldp::ExperimentConfig& cfg,
                  const binldp::Allocation& alloc) {
  binldp::ChannelConfig ch{cfg.N, cfg.power};
  const auto report =
      binldp::feasible(ch, alloc_levels(alloc), alloc_trials(alloc), cfg.d);
  json j;
  j["uses_per_round"] = cfg.N;
  j["power"] = cfg.power;
  json snr = json::array();
  for (double p : cfg.power) snr.push_back(binldp::power_to_snr_db(p));
  j["snr_db"] = snr;
  json rates = json::array();
  for (const auto& c : alloc.clients)
    rates.push_back(binldp::rate_of(c.levels, c.trials, cfg.d, cfg.N));
  j["rates"] = rates;
  j["feasible"] = report.feasible;
  json subsets = json::array();
  for (const auto& s : report.subsets) {
    json e;
    e["clients"] = subset_name(s.mask);
    e["rate_sum"] = s.rate_sum;
    e["cap"] = s.cap;
    e["slack"] = s.slack;
    subsets.push_back(e);
  }
  j["subsets"] = subsets;
  return j;
}

// ---------------------------------------------------------------------------
// train

int cmd_train(const std::string& config_path, const std::string& out_dir,
              bool seed_set, std::uint64_t seed_override) {
  binldp::ExperimentConfig cfg = binldp::load_config(config_path);
  if (seed_set) cfg.seed = seed_override;

  const auto prob = binldp::problem_from_config(cfg);
  binldp::SolveStats stats;
  const auto alloc = binldp::solve_pruned(prob, &stats);
  if (!alloc.feasible) {
    std::cerr << "infeasible: " << alloc.reason << "\n";
    return kExitInfeasible;
  }

  const auto result = binldp::run_training(cfg, alloc.clients);
  const std::string hash = binldp::config_hash_hex(cfg);
  const std::string seed_str = std::to_string(cfg.seed);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  // Per-round metrics. One file per run; name embeds config hash and seed.
  {
    std::string csv =
        "t,loss,gap_to_optimum,grad_norm,mse_empirical,mse_bound,epsilon,"
        "gamma_t,config_hash,seed\n";
    for (const auto& r : result.rounds) {
      csv += fmt(r.t) + ',' + fmt(r.loss) + ',' + fmt(r.gap) + ',' +
             fmt(r.grad_norm) + ',' + fmt(r.mse_empirical) + ',' +
             fmt(r.mse_bound) + ',' + fmt(r.epsilon) + ',' + fmt(r.gamma) +
             ',' + hash + ',' + seed_str + '\n';
    }
    write_text_file(dir / ("run_" + hash + "_seed" + seed_str + ".csv"), csv);
  }

  // Run summary.
  {
    json j;
    j["config_hash"] = hash;
    j["seed"] = cfg.seed;
    j["rounds"] = cfg.T;
    j["final_loss"] = result.final_loss;
    j["final_gap"] = result.final_gap;
    j["loss_at_optimum"] = result.loss_at_optimum;
    j["lambda"] = result.lambda_used;
    j["mu"] = result.mu_used;
    j["any_clipping"] = result.any_clipping;
    j["convergence_bound"] = result.bound_value;
    j["allocation"] = {{"levels", alloc_levels(alloc)},
                       {"trials", alloc_trials(alloc)},
                       {"objective", alloc.objective},
                       {"per_client_epsilon", alloc.per_client_epsilon},
                       {"profiles_examined", stats.objective_evals}};
    j["privacy"] = {{"epsilon", result.privacy.epsilon},
                    {"delta_total", result.privacy.delta_total},
                    {"gate_ok", result.privacy.gate_ok},
                    {"per_client_epsilon", result.privacy.per_client_epsilon}};
    j["channel"] = channel_json(cfg, alloc);
    write_text_file(dir / ("summary_" + hash + "_seed" + seed_str + ".json"),
                    j.dump(2) + "\n");
  }

  // Resolved config echo (defaults and derived constants filled in).
  write_text_file(dir / ("config_" + hash + ".json"),
                  binldp::config_to_json(cfg));

  std::cout << "run " << hash << " seed " << seed_str << "\n"
            << "  allocation: levels=" << join_bar(alloc_levels(alloc))
            << " trials=" << join_bar(alloc_trials(alloc))
            << " objective=" << fmt(alloc.objective) << "\n"
            << "  privacy: epsilon=" << fmt(result.privacy.epsilon)
            << " delta_total=" << fmt(result.privacy.delta_total) << "\n"
            << "  final loss " << fmt(result.final_loss) << " (gap "
            << fmt(result.final_gap) << ") after " << cfg.T << " rounds\n"
            << "  wrote " << (dir / ("run_" + hash + "_seed" + seed_str +
                                     ".csv")).string()
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// allocate

int cmd_allocate(const std::string& config_path, const std::string& out_dir,
                 bool seed_set, std::uint64_t seed_override) {
  binldp::ExperimentConfig cfg = binldp::load_config(config_path);
  if (seed_set) cfg.seed = seed_override;

  const auto prob = binldp::problem_from_config(cfg);
  binldp::SolveStats stats;
  const auto alloc = binldp::solve_pruned(prob, &stats);
  const std::string hash = binldp::config_hash_hex(cfg);

  std::string csv =
      "config_hash,seed,feasible,levels,trials,objective,per_client_epsilon,"
      "subset_clients,subset_slacks,message\n";

  if (!alloc.feasible) {
    std::cout << "allocation: infeasible\n  reason: " << alloc.reason << "\n";
    csv += hash + ',' + std::to_string(cfg.seed) + ",0,,,,,,," +
           sanitize(alloc.reason) + '\n';
    fs::create_directories(out_dir);
    write_text_file(fs::path(out_dir) / ("allocate_" + hash + ".csv"), csv);
    return kExitInfeasible;
  }

  binldp::ChannelConfig ch{cfg.N, cfg.power};
  const auto report =
      binldp::feasible(ch, alloc_levels(alloc), alloc_trials(alloc), cfg.d);

  std::cout << "allocation: feasible\n";
  for (std::size_t i = 0; i < alloc.clients.size(); ++i) {
    std::cout << "  client " << i << ": levels=" << alloc.clients[i].levels
              << " trials=" << alloc.clients[i].trials
              << " epsilon=" << fmt(alloc.per_client_epsilon[i]) << " rate="
              << fmt(binldp::rate_of(alloc.clients[i].levels,
                                     alloc.clients[i].trials, cfg.d, cfg.N))
              << "\n";
  }
  std::cout << "  objective: " << fmt(alloc.objective) << "\n";
  for (const auto& s : report.subsets) {
    std::cout << "  subset " << subset_name(s.mask)
              << ": rate=" << fmt(s.rate_sum) << " cap=" << fmt(s.cap)
              << " slack=" << fmt(s.slack) << "\n";
  }
  std::cout << "  profiles examined: " << stats.objective_evals << "\n";

  std::vector<std::string> names;
  std::vector<double> slacks;
  for (const auto& s : report.subsets) {
    names.push_back(subset_name(s.mask, ';'));
    slacks.push_back(s.slack);
  }
  std::string name_field;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) name_field += '|';
    name_field += names[i];
  }
  csv += hash + ',' + std::to_string(cfg.seed) + ",1," +
         join_bar(alloc_levels(alloc)) + ',' + join_bar(alloc_trials(alloc)) +
         ',' + fmt(alloc.objective) + ',' +
         join_bar(alloc.per_client_epsilon) + ',' + name_field + ',' +
         join_bar(slacks) + ",\n";
  fs::create_directories(out_dir);
  write_text_file(fs::path(out_dir) / ("allocate_" + hash + ".csv"), csv);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepPoint {
  std::size_t axis_index = 0;
  int repeat = 0;
  double value = 0.0;
};

struct PointResult {
  std::string status = "ok";  // ok | config_error | infeasible | runtime_failure
  std::string message;
  std::string hash;
  std::uint64_t seed = 0;
  std::vector<int> levels;
  std::vector<long long> trials;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double objective = std::numeric_limits<double>::quiet_NaN();
  double final_loss = std::numeric_limits<double>::quiet_NaN();
  double final_gap = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
};

// Applies one axis override. Throws ValidationError for values the axis
// cannot take (recorded per-row by the caller; the sweep keeps going).
void apply_axis(binldp::ExperimentConfig& cfg, const std::string& axis,
                double value) {
  if (axis == "snr_db") {
    cfg.power.assign(static_cast<std::size_t>(cfg.n),
                     binldp::snr_db_to_power(value));
  } else if (axis == "eps_budget") {
    cfg.eps_budget = value;
  } else {  // rounds
    if (!(value > 0) || value != std::floor(value) || value > 1e9) {
      throw binldp::ValidationError(
          "rounds axis value must be a positive integer",
          {"rounds=" + fmt(value)});
    }
    cfg.T = static_cast<int>(value);
  }
}

PointResult run_point(const binldp::ExperimentConfig& base,
                      const std::string& axis, const SweepPoint& pt) {
  PointResult res;
  // Per-point seed: keyed stream derivation from (base seed, axis index,
  // repeat index) — deterministic regardless of worker scheduling.
  res.seed =
      binldp::Rng(base.seed,
                  binldp::StreamId{static_cast<std::uint32_t>(pt.axis_index),
                                   static_cast<std::uint32_t>(pt.repeat),
                                   binldp::StreamPurpose::kData})
          .bits();
  try {
    binldp::ExperimentConfig cfg = base;
    apply_axis(cfg, axis, pt.value);
    cfg.seed = res.seed;
    binldp::validate_experiment_config(cfg);
    res.hash = binldp::config_hash_hex(cfg);

    const auto prob = binldp::problem_from_config(cfg);
    const auto alloc = binldp::solve_pruned(prob);
    if (!alloc.feasible) {
      res.status = "infeasible";
      res.message = sanitize(alloc.reason);
      return res;
    }
    res.levels = alloc_levels(alloc);
    res.trials = alloc_trials(alloc);
    res.objective = alloc.objective;

    const auto result = binldp::run_training(cfg, alloc.clients);
    res.epsilon = result.privacy.epsilon;
    res.final_loss = result.final_loss;
    res.final_gap = result.final_gap;
    res.bound = result.bound_value;
  } catch (const binldp::AccountantError& e) {
    res.status = "infeasible";
    res.message = sanitize(e.what());
  } catch (const binldp::ValidationError& e) {
    res.status = "config_error";
    res.message = sanitize(e.what());
  } catch (const std::exception& e) {
    res.status = "runtime_failure";
    res.message = sanitize(e.what());
  }
  return res;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& axis, const std::vector<double>& values,
              int repeats, bool seed_set, std::uint64_t seed_override) {
  binldp::ExperimentConfig base = binldp::load_config(config_path);
  if (seed_set) base.seed = seed_override;
  if (axis != "snr_db" && axis != "eps_budget" && axis != "rounds") {
    throw binldp::ValidationError(
        "unknown sweep axis (expected snr_db, eps_budget, or rounds)",
        {"axis=" + axis});
  }
  if (values.empty()) {
    throw binldp::ValidationError("sweep needs at least one axis value",
                                  {"values=[]"});
  }
  if (repeats < 1) {
    throw binldp::ValidationError("repeats must be >= 1",
                                  {"repeats=" + std::to_string(repeats)});
  }

  std::vector<SweepPoint> points;
  for (std::size_t ai = 0; ai < values.size(); ++ai) {
    for (int rep = 0; rep < repeats; ++rep) {
      points.push_back(SweepPoint{ai, rep, values[ai]});
    }
  }
  std::vector<PointResult> results(points.size());

  // Worker pool. Every point is self-contained (own config, own derived
  // seed), so scheduling cannot affect any output byte.
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers = std::max(
      1u, std::min(hw == 0 ? 1u : hw, static_cast<unsigned>(points.size())));
  std::atomic<std::size_t> next{0};
  auto run_worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) break;
      results[i] = run_point(base, axis, points[i]);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_worker);
  for (auto& t : pool) t.join();

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  // Long-format points file: one row per run, deterministic order
  // (axis value, then repeat).
  {
    std::string csv =
        "axis,value,repeat,seed,config_hash,status,levels,trials,objective,"
        "epsilon,final_loss,final_gap,convergence_bound,message\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& pt = points[i];
      const auto& r = results[i];
      csv += axis + ',' + fmt(pt.value) + ',' + fmt(pt.repeat) + ',' +
             fmt(r.seed) + ',' + r.hash + ',' + r.status + ',' +
             join_bar(r.levels) + ',' + join_bar(r.trials) + ',' +
             fmt(r.objective) + ',' + fmt(r.epsilon) + ',' +
             fmt(r.final_loss) + ',' + fmt(r.final_gap) + ',' + fmt(r.bound) +
             ',' + r.message + '\n';
    }
    write_text_file(dir / "sweep_points.csv", csv);
  }

  // Median / quartile aggregation per axis value, over successful repeats.
  {
    std::string csv =
        "axis,value,seed,config_hash,repeats,ok_count,median_final_loss,"
        "q1_final_loss,q3_final_loss,median_final_gap,median_epsilon\n";
    const std::string base_hash = binldp::config_hash_hex(base);
    for (std::size_t ai = 0; ai < values.size(); ++ai) {
      std::vector<double> losses, gaps, epss;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].axis_index != ai || results[i].status != "ok") continue;
        losses.push_back(results[i].final_loss);
        gaps.push_back(results[i].final_gap);
        epss.push_back(results[i].epsilon);
      }
      std::sort(losses.begin(), losses.end());
      std::sort(gaps.begin(), gaps.end());
      std::sort(epss.begin(), epss.end());
      csv += axis + ',' + fmt(values[ai]) + ',' + fmt(base.seed) + ',' +
             base_hash + ',' + fmt(repeats) + ',' +
             fmt(static_cast<int>(losses.size())) + ',' +
             fmt(quantile_sorted(losses, 0.5)) + ',' +
             fmt(quantile_sorted(losses, 0.25)) + ',' +
             fmt(quantile_sorted(losses, 0.75)) + ',' +
             fmt(quantile_sorted(gaps, 0.5)) + ',' +
             fmt(quantile_sorted(epss, 0.5)) + '\n';
    }
    write_text_file(dir / "sweep_summary.csv", csv);
  }

  write_text_file(dir / ("config_" + binldp::config_hash_hex(base) + ".json"),
                  binldp::config_to_json(base));

  std::size_t ok = 0;
  for (const auto& r : results) ok += (r.status == "ok");
  std::cout << "sweep " << axis << " over " << values.size() << " value(s) x "
            << repeats << " repeat(s): " << ok << "/" << results.size()
            << " runs ok\n"
            << "  wrote " << (dir / "sweep_points.csv").string() << ", "
            << (dir / "sweep_summary.csv").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// selftest

struct SelfTest {
  int failures = 0;
  void check(const std::string& name, bool ok, const std::string& detail = "") {
    if (ok) {
      std::cout << "ok - " << name << "\n";
    } else {
      ++failures;
      std::cout << "FAIL - " << name
                << (detail.empty() ? "" : " (" + detail + ")") << "\n";
    }
  }
};

int cmd_selftest() {
  SelfTest st;

  // Quantizer: output confined to the bracketing grid points, empirical mean
  // near the exact two-point expectation.
  try {
    binldp::QuantizerConfig qc{4.0, 5};  // grid -4,-2,0,2,4; step 2
    const double g = 1.3;
    const double expect = 1.3;  // unbiasedness: E[Q(g)] = g
    binldp::Rng rng(123, {0, 0, binldp::StreamPurpose::kQuantize});
    const int n = 40000;
    double sum = 0.0;
    bool support_ok = true;
    for (int i = 0; i < n; ++i) {
      binldp::Rng sub = rng.substream(static_cast<std::uint64_t>(i));
      const double q = binldp::quantize_element(g, qc, sub);
      support_ok = support_ok && (q == 0.0 || q == 2.0);
      sum += q;
    }
    const double mean = sum / n;
    const double up = (g - 0.0) / 2.0;
    const double sigma = std::sqrt(up * (1 - up)) * 2.0 / std::sqrt(double(n));
    st.check("quantizer support on bracketing grid points", support_ok);
    st.check("quantizer unbiased within 5 sigma",
             std::abs(mean - expect) < 5 * sigma,
             "mean=" + fmt(mean));
  } catch (const std::exception& e) {
    st.check("quantizer", false, e.what());
  }

  // Binomial sampler: support and mean at p = 1/2 (popcount path).
  try {
    binldp::Rng rng(321, {0, 0, binldp::StreamPurpose::kBinomial});
    const long long m = 1000;
    const int n = 40000;
    double sum = 0.0;
    bool support_ok = true;
    for (int i = 0; i < n; ++i) {
      binldp::Rng sub = rng.substream(static_cast<std::uint64_t>(i));
      const auto k = binldp::sample_binomial(m, 0.5, sub);
      support_ok = support_ok && k <= static_cast<std::uint64_t>(m);
      sum += static_cast<double>(k);
    }
    const double mean = sum / n;
    const double sigma = std::sqrt(m * 0.25 / n);
    st.check("binomial sampler support", support_ok);
    st.check("binomial sampler mean within 5 sigma",
             std::abs(mean - 500.0) < 5 * sigma, "mean=" + fmt(mean));
  } catch (const std::exception& e) {
    st.check("binomial sampler", false, e.what());
  }

  // Accountant: gate boundary and monotonicity of the bound in the trial
  // count.
  try {
    const auto g_lo = binldp::check_gate(847, 0.5, 3, 4.0, 10, 0.01);
    const auto g_hi = binldp::check_gate(848, 0.5, 3, 4.0, 10, 0.01);
    st.check("accountant gate boundary", !g_lo.ok && g_hi.ok);
    const auto consts = binldp::MechanismConstants::defaults(0.5);
    double prev = std::numeric_limits<double>::infinity();
    bool mono = true;
    for (long long m : {1024LL, 2048LL, 4096LL, 8192LL}) {
      const double e =
          binldp::epsilon_bound(3, m, 0.5, 0.01, 4.0, 4.0, 10, consts);
      mono = mono && (e < prev);
      prev = e;
    }
    st.check("epsilon bound strictly decreasing in trials", mono);
  } catch (const std::exception& e) {
    st.check("accountant", false, e.what());
  }

  // Channel: capacity closed form and rate arithmetic.
  try {
    const double c1 = binldp::capacity({10.0});
    const double c2 = binldp::capacity({10.0, 10.0});
    st.check("capacity closed form",
             std::abs(c1 - 0.5 * std::log2(11.0)) < 1e-15 &&
                 std::abs(c2 - 0.5 * std::log2(21.0)) < 1e-15);
    st.check("rate arithmetic", binldp::rate_of(2, 2, 1, 1) == 2.0);
  } catch (const std::exception& e) {
    st.check("channel", false, e.what());
  }

  // Allocator: exhaustive and pruned solvers agree on a small instance.
  try {
    binldp::AllocationProblem prob;
    prob.n = 1;
    prob.d = 1;
    prob.N = 30;
    prob.power = {50.0};
    prob.G = 4.0;
    prob.D = 4.0;
    prob.p = 0.5;
    prob.delta = 0.6;
    prob.eps_budget = 10.0;
    prob.consts = binldp::MechanismConstants::defaults(0.5);
    prob.l_max = 6;
    prob.m_max = 1200;
    const auto ex = binldp::solve_exhaustive(prob);
    const auto pr = binldp::solve_pruned(prob);
    bool same = (ex.feasible == pr.feasible) && ex.feasible &&
                ex.objective == pr.objective &&
                ex.clients.size() == pr.clients.size();
    for (std::size_t i = 0; same && i < ex.clients.size(); ++i) {
      same = ex.clients[i].levels == pr.clients[i].levels &&
             ex.clients[i].trials == pr.clients[i].trials;
    }
    st.check("solvers agree on small instance", same);
  } catch (const std::exception& e) {
    st.check("allocator", false, e.what());
  }

  // End to end: two runs of one configuration are bit-identical.
  try {
    binldp::ExperimentConfig cfg;
    cfg.n = 2;
    cfg.d = 2;
    cfg.T = 3;
    cfg.N = 60;
    cfg.power = {10.0, 10.0};
    cfg.G = 4.0;
    cfg.D = 4.0;
    cfg.p = 0.5;
    cfg.delta = 0.6;
    cfg.eps_budget = std::numeric_limits<double>::infinity();
    cfg.beta = 1.0;
    cfg.seed = 7;
    cfg.l_max = 8;
    cfg.m_max = 2048;
    cfg.samples_per_client = 100;
    binldp::validate_experiment_config(cfg);
    const auto alloc = binldp::solve_pruned(binldp::problem_from_config(cfg));
    st.check("micro allocation feasible", alloc.feasible, alloc.reason);
    if (alloc.feasible) {
      const auto r1 = binldp::run_training(cfg, alloc.clients);
      const auto r2 = binldp::run_training(cfg, alloc.clients);
      bool same = r1.final_loss == r2.final_loss &&
                  r1.final_gap == r2.final_gap &&
                  r1.rounds.size() == r2.rounds.size();
      for (std::size_t i = 0; same && i < r1.rounds.size(); ++i) {
        same = r1.rounds[i].loss == r2.rounds[i].loss &&
               r1.rounds[i].mse_empirical == r2.rounds[i].mse_empirical;
      }
      st.check("training run deterministic", same);
    }
  } catch (const std::exception& e) {
    st.check("determinism", false, e.what());
  }

  if (st.failures == 0) {
    std::cout << "selftest: all checks passed\n";
    return kExitOk;
  }
  std::cout << "selftest: " << st.failures << " check(s) failed\n";
  return kExitRuntimeFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "binldp — private quantized aggregation over a shared Gaussian channel: "
      "allocation solving, training runs, experiment sweeps"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string axis;
  std::vector<double> values;
  int repeats = 1;
  std::uint64_t seed_override = 0;

  auto* train = app.add_subcommand("train", "solve allocation, run training");
  train->add_option("--config", config_path, "config JSON path")->required();
  train->add_option("--out", out_dir, "output directory (default .)");
  auto* train_seed =
      train->add_option("--seed", seed_override, "override the config seed");

  auto* sweep =
      app.add_subcommand("sweep", "re-run training across one config axis");
  sweep->add_option("--config", config_path, "config JSON path")->required();
  sweep->add_option("--out", out_dir, "output directory (default .)");
  sweep->add_option("--axis", axis, "snr_db | eps_budget | rounds")
      ->required();
  sweep->add_option("--values", values, "axis values, comma separated")
      ->required()
      ->delimiter(',');
  sweep->add_option("--repeats", repeats, "seeds per point (default 1)");
  auto* sweep_seed =
      sweep->add_option("--seed", seed_override, "override the base seed");

  auto* allocate =
      app.add_subcommand("allocate", "solve the allocation and print it");
  allocate->add_option("--config", config_path, "config JSON path")
      ->required();
  allocate->add_option("--out", out_dir, "output directory (default .)");
  auto* alloc_seed = allocate->add_option("--seed", seed_override,
                                          "override the config seed");

  app.add_subcommand("selftest", "run fast pipeline invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (app.got_subcommand("train")) {
      return cmd_train(config_path, out_dir, train_seed->count() > 0,
                       seed_override);
    }
    if (app.got_subcommand("sweep")) {
      return cmd_sweep(config_path, out_dir, axis, values, repeats,
                       sweep_seed->count() > 0, seed_override);
    }
    if (app.got_subcommand("allocate")) {
      return cmd_allocate(config_path, out_dir, alloc_seed->count() > 0,
                          seed_override);
    }
    return cmd_selftest();
  } catch (const binldp::AccountantError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const binldp::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeFailure;
  }
}
