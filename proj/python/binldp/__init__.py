# Copyright 2026 The binldp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Private quantized gradient aggregation over a shared Gaussian channel.

Thin python mirror of the C++ core: multi-level stochastic quantization,
binomial-noise privacy mechanism with a closed-form (epsilon, delta)
accountant, channel rate feasibility, exact integer allocation solvers, and
the deterministic federated training loop. All randomness flows through
keyed counter streams, so results are bit-identical across runs, platforms,
and the C++/python front ends.
"""

from ._core import (  # noqa: F401
    AccountantError,
    Allocation,
    AllocationProblem,
    BinomialMechanismConfig,
    ChannelConfig,
    ClientAllocation,
    ClientData,
    ExperimentConfig,
    FeasibilityDiagnosis,
    FeasibilityReport,
    GateCheck,
    MechanismConstants,
    MseEstimate,
    PrivacyReport,
    QuantizerConfig,
    Rng,
    RoundRecord,
    RunResult,
    SensitivityBounds,
    SolveStats,
    StreamId,
    StreamPurpose,
    SubsetSlack,
    ValidationError,
    accountant,
    allocation_objective,
    apply_binomial_noise,
    bin_value,
    capacity,
    check_gate,
    clip_gradient,
    config_hash_hex,
    config_to_json,
    convergence_bound,
    draw_uniform,
    empirical_mse,
    epsilon_bound,
    epsilon_formula,
    feasible,
    gate_min_trials,
    grid_index,
    has_improving_unit_move,
    hessian_largest_eigenvalue,
    is_feasible,
    load_config,
    local_gradient,
    mse_bound_value,
    parse_config,
    perturb,
    power_to_snr_db,
    problem_from_config,
    quant_step,
    quantize_element,
    quantize_vector,
    ridge_closed_form,
    ridge_loss,
    run_training,
    sample_binomial,
    sensitivity_bounds,
    snr_db_to_power,
    solve_exhaustive,
    solve_pruned,
    synthesize_data,
    validate_experiment_config,
)

__version__ = "0.1.0"
