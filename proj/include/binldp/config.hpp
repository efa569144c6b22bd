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

#ifndef BINLDP_CONFIG_HPP_
#define BINLDP_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "binldp/core.hpp"

namespace binldp {

// Parses a JSON experiment config. Required keys: n, d, T, N, G, D, p, delta,
// eps_budget, beta, seed, and exactly one of "power" (array of n values) or
// "snr_db" (scalar applied to every client). Optional keys: lambda, mu, b_p,
// c_p, l_max, m_max, samples_per_client. Unknown keys are an error, as are
// type mismatches and out-of-range values (ValidationError lists every
// violation found).
ExperimentConfig load_config(const std::string& path);

// Same parser over an in-memory JSON document (used by tests and bindings).
ExperimentConfig parse_config(const std::string& json_text);

// Serializes the fully resolved config (defaults filled in, power always as
// an explicit array) as pretty-printed JSON with sorted keys. This echo is
// written next to run outputs so a result can be reproduced from it alone.
std::string config_to_json(const ExperimentConfig& cfg);

// FNV-1a hash of the canonical config echo; run artifacts embed its first
// eight hex digits so outputs from different configs never collide.
std::uint64_t config_hash(const ExperimentConfig& cfg);

// First eight hex digits of config_hash, zero-padded.
std::string config_hash_hex(const ExperimentConfig& cfg);

}  // namespace binldp

#endif  // BINLDP_CONFIG_HPP_
