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

// Python bindings for the binldp core: quantizer, binomial mechanism and
// accountant, channel feasibility, allocation solvers, and the training
// loop. The python layer is a thin mirror of the C++ API — all semantics
// (stream keying, gate checks, solver tie-breaks) live in the core library
// so both front ends are bit-identical.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "binldp/allocator.hpp"
#include "binldp/channel.hpp"
#include "binldp/config.hpp"
#include "binldp/core.hpp"
#include "binldp/privacy.hpp"
#include "binldp/quantizer.hpp"
#include "binldp/trainer.hpp"

namespace py = pybind11;
using namespace binldp;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Private quantized gradient aggregation over a shared Gaussian "
      "channel: deterministic simulator and allocation toolkit";

  // -------------------------------------------------------------- exceptions
  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<AccountantError>(m, "AccountantError",
                                          PyExc_ValueError);

  // -------------------------------------------------------------------- core
  py::enum_<StreamPurpose>(m, "StreamPurpose")
      .value("DATA", StreamPurpose::kData)
      .value("QUANTIZE", StreamPurpose::kQuantize)
      .value("BINOMIAL", StreamPurpose::kBinomial);

  py::class_<StreamId>(m, "StreamId")
      .def(py::init([](std::uint32_t client, std::uint32_t round,
                       StreamPurpose purpose) {
             return StreamId{client, round, purpose};
           }),
           py::arg("client"), py::arg("round"), py::arg("purpose"))
      .def_readwrite("client", &StreamId::client)
      .def_readwrite("round", &StreamId::round)
      .def_readwrite("purpose", &StreamId::purpose);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t, StreamId>(), py::arg("seed"),
           py::arg("id"))
      .def("substream", &Rng::substream, py::arg("i"))
      .def("bits", &Rng::bits)
      .def("uniform", &Rng::uniform)
      .def("normal", &Rng::normal);

  m.def("draw_uniform", &draw_uniform, py::arg("seed"), py::arg("id"),
        "First uniform draw of the keyed stream (seed, id).");
  m.def("snr_db_to_power", &snr_db_to_power, py::arg("snr_db"));
  m.def("power_to_snr_db", &power_to_snr_db, py::arg("power"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("n", &ExperimentConfig::n)
      .def_readwrite("d", &ExperimentConfig::d)
      .def_readwrite("T", &ExperimentConfig::T)
      .def_readwrite("N", &ExperimentConfig::N)
      .def_readwrite("power", &ExperimentConfig::power)
      .def_readwrite("G", &ExperimentConfig::G)
      .def_readwrite("D", &ExperimentConfig::D)
      .def_readwrite("p", &ExperimentConfig::p)
      .def_readwrite("delta", &ExperimentConfig::delta)
      .def_readwrite("eps_budget", &ExperimentConfig::eps_budget)
      .def_readwrite("beta", &ExperimentConfig::beta)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("lambda_", &ExperimentConfig::lambda)
      .def_readwrite("mu", &ExperimentConfig::mu)
      .def_readwrite("b_p", &ExperimentConfig::b_p)
      .def_readwrite("c_p", &ExperimentConfig::c_p)
      .def_readwrite("l_max", &ExperimentConfig::l_max)
      .def_readwrite("m_max", &ExperimentConfig::m_max)
      .def_readwrite("samples_per_client",
                     &ExperimentConfig::samples_per_client);

  m.def("validate_experiment_config", &validate_experiment_config,
        py::arg("cfg"));

  // ------------------------------------------------------------------ config
  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", &parse_config, py::arg("json_text"));
  m.def("config_to_json", &config_to_json, py::arg("cfg"));
  m.def("config_hash_hex", &config_hash_hex, py::arg("cfg"));

  // --------------------------------------------------------------- quantizer
  py::class_<QuantizerConfig>(m, "QuantizerConfig")
      .def(py::init([](double G, int levels) {
             return QuantizerConfig{G, levels};
           }),
           py::arg("G"), py::arg("levels"))
      .def_readwrite("G", &QuantizerConfig::G)
      .def_readwrite("levels", &QuantizerConfig::levels);

  m.def("quant_step", &quant_step, py::arg("qc"));
  m.def("bin_value", &bin_value, py::arg("qc"), py::arg("r"));
  m.def("quantize_element", &quantize_element, py::arg("g"), py::arg("qc"),
        py::arg("rng"));
  m.def("quantize_vector", &quantize_vector, py::arg("g"), py::arg("qc"),
        py::arg("seed"), py::arg("id"));
  m.def("grid_index", &grid_index, py::arg("qc"), py::arg("q"));

  // ----------------------------------------------------------------- privacy
  py::class_<BinomialMechanismConfig>(m, "BinomialMechanismConfig")
      .def(py::init([](long long trials, double p, double step) {
             return BinomialMechanismConfig{trials, p, step};
           }),
           py::arg("trials"), py::arg("p"), py::arg("step"))
      .def_readwrite("trials", &BinomialMechanismConfig::trials)
      .def_readwrite("p", &BinomialMechanismConfig::p)
      .def_readwrite("step", &BinomialMechanismConfig::step);

  py::class_<MechanismConstants>(m, "MechanismConstants")
      .def_static("defaults", &MechanismConstants::defaults, py::arg("p"))
      .def_static("resolve", &MechanismConstants::resolve, py::arg("p"),
                  py::arg("b_override"), py::arg("c_override"))
      .def_readwrite("b_p", &MechanismConstants::b_p)
      .def_readwrite("c_p", &MechanismConstants::c_p)
      .def_readwrite("d_p", &MechanismConstants::d_p);

  py::class_<SensitivityBounds>(m, "SensitivityBounds")
      .def_readonly("linf", &SensitivityBounds::linf)
      .def_readonly("l1", &SensitivityBounds::l1)
      .def_readonly("l2", &SensitivityBounds::l2);

  py::class_<GateCheck>(m, "GateCheck")
      .def_readonly("ok", &GateCheck::ok)
      .def_readonly("lhs", &GateCheck::lhs)
      .def_readonly("log_arm", &GateCheck::log_arm)
      .def_readonly("step_arm", &GateCheck::step_arm)
      .def_readonly("binding", &GateCheck::binding);

  py::class_<PrivacyReport>(m, "PrivacyReport")
      .def_readonly("epsilon", &PrivacyReport::epsilon)
      .def_readonly("delta_total", &PrivacyReport::delta_total)
      .def_readonly("gate_ok", &PrivacyReport::gate_ok)
      .def_readonly("per_client_epsilon", &PrivacyReport::per_client_epsilon);

  m.def(
      "sample_binomial",
      [](long long trials, double p, Rng& rng) {
        return sample_binomial(trials, p, rng);
      },
      py::arg("trials"), py::arg("p"), py::arg("rng"));
  m.def("apply_binomial_noise", &apply_binomial_noise, py::arg("q"),
        py::arg("counts"), py::arg("mc"));
  m.def("perturb", &perturb, py::arg("q"), py::arg("mc"), py::arg("seed"),
        py::arg("id"));
  m.def("sensitivity_bounds", &sensitivity_bounds, py::arg("levels"),
        py::arg("G"), py::arg("D"), py::arg("d"), py::arg("delta"));
  m.def("check_gate", &check_gate, py::arg("trials"), py::arg("p"),
        py::arg("levels"), py::arg("G"), py::arg("d"), py::arg("delta"));
  m.def("epsilon_formula", &epsilon_formula, py::arg("sens"),
        py::arg("trials"), py::arg("p"), py::arg("delta"), py::arg("d"),
        py::arg("kc"));
  m.def("epsilon_bound", &epsilon_bound, py::arg("levels"), py::arg("trials"),
        py::arg("p"), py::arg("delta"), py::arg("G"), py::arg("D"),
        py::arg("d"), py::arg("kc"));
  m.def("accountant", &accountant, py::arg("levels"), py::arg("trials"),
        py::arg("p"), py::arg("delta"), py::arg("G"), py::arg("D"),
        py::arg("d"), py::arg("kc"));

  // ----------------------------------------------------------------- channel
  py::class_<ChannelConfig>(m, "ChannelConfig")
      .def(py::init([](int uses_per_round, std::vector<double> power) {
             return ChannelConfig{uses_per_round, std::move(power)};
           }),
           py::arg("uses_per_round"), py::arg("power"))
      .def_readwrite("uses_per_round", &ChannelConfig::uses_per_round)
      .def_readwrite("power", &ChannelConfig::power);

  py::class_<SubsetSlack>(m, "SubsetSlack")
      .def_readonly("mask", &SubsetSlack::mask)
      .def_readonly("rate_sum", &SubsetSlack::rate_sum)
      .def_readonly("cap", &SubsetSlack::cap)
      .def_readonly("slack", &SubsetSlack::slack);

  py::class_<FeasibilityReport>(m, "FeasibilityReport")
      .def_readonly("feasible", &FeasibilityReport::feasible)
      .def_readonly("subsets", &FeasibilityReport::subsets)
      .def_readonly("tightest", &FeasibilityReport::tightest);

  m.def("capacity", &capacity, py::arg("subset_powers"));
  m.def("rate_of", &rate_of, py::arg("levels"), py::arg("trials"),
        py::arg("d"), py::arg("N"));
  m.def(
      "feasible",
      [](const ChannelConfig& ch, const std::vector<int>& levels,
         const std::vector<long long>& trials, int d) {
        return feasible(ch, levels, trials, d);
      },
      py::arg("channel"), py::arg("levels"), py::arg("trials"), py::arg("d"));

  // --------------------------------------------------------------- allocator
  py::class_<ClientAllocation>(m, "ClientAllocation")
      .def(py::init([](int levels, long long trials) {
             return ClientAllocation{levels, trials};
           }),
           py::arg("levels"), py::arg("trials"))
      .def_readwrite("levels", &ClientAllocation::levels)
      .def_readwrite("trials", &ClientAllocation::trials);

  py::class_<AllocationProblem>(m, "AllocationProblem")
      .def(py::init<>())
      .def_readwrite("n", &AllocationProblem::n)
      .def_readwrite("d", &AllocationProblem::d)
      .def_readwrite("N", &AllocationProblem::N)
      .def_readwrite("power", &AllocationProblem::power)
      .def_readwrite("G", &AllocationProblem::G)
      .def_readwrite("D", &AllocationProblem::D)
      .def_readwrite("p", &AllocationProblem::p)
      .def_readwrite("delta", &AllocationProblem::delta)
      .def_readwrite("eps_budget", &AllocationProblem::eps_budget)
      .def_readwrite("consts", &AllocationProblem::consts)
      .def_readwrite("l_max", &AllocationProblem::l_max)
      .def_readwrite("m_max", &AllocationProblem::m_max);

  py::class_<Allocation>(m, "Allocation")
      .def_readonly("feasible", &Allocation::feasible)
      .def_readonly("clients", &Allocation::clients)
      .def_readonly("objective", &Allocation::objective)
      .def_readonly("per_client_epsilon", &Allocation::per_client_epsilon)
      .def_readonly("reason", &Allocation::reason);

  py::class_<SolveStats>(m, "SolveStats")
      .def(py::init<>())
      .def_readonly("objective_evals", &SolveStats::objective_evals)
      .def_readonly("candidates_examined", &SolveStats::candidates_examined);

  py::class_<FeasibilityDiagnosis>(m, "FeasibilityDiagnosis")
      .def_readonly("ok", &FeasibilityDiagnosis::ok)
      .def_readonly("violations", &FeasibilityDiagnosis::violations);

  m.def("allocation_objective", &allocation_objective, py::arg("problem"),
        py::arg("clients"));
  m.def("is_feasible", &is_feasible, py::arg("problem"), py::arg("clients"));
  m.def(
      "solve_exhaustive",
      [](const AllocationProblem& prob) {
        SolveStats stats;
        auto a = solve_exhaustive(prob, &stats);
        return py::make_tuple(a, stats);
      },
      py::arg("problem"));
  m.def(
      "solve_pruned",
      [](const AllocationProblem& prob) {
        SolveStats stats;
        auto a = solve_pruned(prob, &stats);
        return py::make_tuple(a, stats);
      },
      py::arg("problem"));
  m.def("has_improving_unit_move", &has_improving_unit_move,
        py::arg("problem"), py::arg("allocation"));
  m.def("gate_min_trials", &gate_min_trials, py::arg("problem"),
        py::arg("levels"));

  // ----------------------------------------------------------------- trainer
  py::class_<ClientData>(m, "ClientData")
      .def_readwrite("X", &ClientData::X)
      .def_readwrite("y", &ClientData::y);

  py::class_<RoundRecord>(m, "RoundRecord")
      .def_readonly("t", &RoundRecord::t)
      .def_readonly("loss", &RoundRecord::loss)
      .def_readonly("gap", &RoundRecord::gap)
      .def_readonly("grad_norm", &RoundRecord::grad_norm)
      .def_readonly("mse_empirical", &RoundRecord::mse_empirical)
      .def_readonly("mse_bound", &RoundRecord::mse_bound)
      .def_readonly("epsilon", &RoundRecord::epsilon)
      .def_readonly("gamma", &RoundRecord::gamma)
      .def_readonly("clipped", &RoundRecord::clipped);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("rounds", &RunResult::rounds)
      .def_readonly("w_final", &RunResult::w_final)
      .def_readonly("final_loss", &RunResult::final_loss)
      .def_readonly("final_gap", &RunResult::final_gap)
      .def_readonly("loss_at_optimum", &RunResult::loss_at_optimum)
      .def_readonly("lambda_used", &RunResult::lambda_used)
      .def_readonly("mu_used", &RunResult::mu_used)
      .def_readonly("any_clipping", &RunResult::any_clipping)
      .def_readonly("bound_value", &RunResult::bound_value)
      .def_readonly("privacy", &RunResult::privacy)
      .def_readonly("allocation", &RunResult::allocation);

  py::class_<MseEstimate>(m, "MseEstimate")
      .def_readonly("mean", &MseEstimate::mean)
      .def_readonly("stderr_mean", &MseEstimate::stderr_mean)
      .def_readonly("resamples", &MseEstimate::resamples)
      .def_readonly("low_sample_warning", &MseEstimate::low_sample_warning);

  m.def("synthesize_data", &synthesize_data, py::arg("n"), py::arg("d"),
        py::arg("sizes"), py::arg("seed"));
  m.def("ridge_loss", &ridge_loss, py::arg("data"), py::arg("w"),
        py::arg("beta"));
  m.def("local_gradient", &local_gradient, py::arg("client"), py::arg("w"),
        py::arg("beta"));
  m.def(
      "clip_gradient",
      [](const Vec& g, double D, double G) {
        bool changed = false;
        Vec out = clip_gradient(g, D, G, &changed);
        return py::make_tuple(out, changed);
      },
      py::arg("g"), py::arg("D"), py::arg("G"));
  m.def("ridge_closed_form", &ridge_closed_form, py::arg("data"),
        py::arg("beta"));
  m.def("hessian_largest_eigenvalue", &hessian_largest_eigenvalue,
        py::arg("data"), py::arg("beta"));
  m.def("mse_bound_value", &mse_bound_value, py::arg("alloc"), py::arg("n"),
        py::arg("d"), py::arg("G"), py::arg("p"));
  m.def("convergence_bound", &convergence_bound, py::arg("G_t"),
        py::arg("D_t"), py::arg("alloc"), py::arg("n"), py::arg("d"),
        py::arg("p"), py::arg("lambda_"), py::arg("mu"));
  m.def("run_training", &run_training, py::arg("cfg"), py::arg("alloc"));
  m.def("empirical_mse", &empirical_mse, py::arg("w"), py::arg("data"),
        py::arg("alloc"), py::arg("cfg"), py::arg("resamples"),
        py::arg("seed"));
  m.def("problem_from_config", &problem_from_config, py::arg("cfg"));
}
