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

#ifndef BINLDP_CORE_HPP_
#define BINLDP_CORE_HPP_

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace binldp {

using Vec = std::vector<double>;

// Aggregated configuration/domain validation failure. `message()` lists every
// violated field so callers can fix a config in one pass.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what,
                           std::vector<std::string> violations = {})
      : std::runtime_error(what), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// ---------------------------------------------------------------------------
// Deterministic random streams
// ---------------------------------------------------------------------------

// Tag separating the independent random streams consumed within one
// (client, round) pair.
enum class StreamPurpose : std::uint64_t {
  kData = 0,      // dataset synthesis
  kQuantize = 1,  // stochastic quantization draws
  kBinomial = 2,  // mechanism noise draws
};

struct StreamId {
  std::uint32_t client = 0;
  std::uint32_t round = 0;
  StreamPurpose purpose = StreamPurpose::kData;
};

// Counter-based generator (splitmix64). A whole experiment draws only from
// streams keyed by (seed, client, round, purpose); coordinates use keyed
// substreams so their draws do not depend on evaluation order. Every output
// is a pure function of the key built from integer arithmetic only, hence
// bit-identical across runs and platforms. (Dataset synthesis additionally
// goes through libm transcendentals; see `normal()`.)
class Rng {
 public:
  Rng(std::uint64_t seed, StreamId id);

  // Substream for coordinate (or record) index `i`; independent of how many
  // draws the parent or sibling substreams have consumed.
  Rng substream(std::uint64_t i) const;

  // Next 64 uniform random bits.
  std::uint64_t bits();
  // Uniform double in [0, 1) with 53-bit resolution.
  double uniform();
  // Standard normal via Box-Muller on `uniform()` pairs (one spare cached).
  double normal();

  static std::uint64_t mix(std::uint64_t x);  // splitmix64 output function

 private:
  explicit Rng(std::uint64_t raw_state) : base_(raw_state), state_(raw_state) {}

  std::uint64_t base_ = 0;   // key state at construction; substreams derive
                             // from this, so they ignore parent consumption
  std::uint64_t state_ = 0;  // advances by one gamma per bits() call
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// First uniform draw of the stream — the one-shot form used by tests and the
// bindings to probe stream determinism.
double draw_uniform(std::uint64_t seed, StreamId id);

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

constexpr double kUnset = -1.0;

// Full description of one experiment. A run is a pure function of this
// struct: identical configs (seed included) reproduce identical outputs.
struct ExperimentConfig {
  int n = 0;                  // number of clients
  int d = 0;                  // model dimension
  int T = 0;                  // training rounds
  int N = 0;                  // channel uses available per round
  std::vector<double> power;  // per-client transmit power, linear scale
  double G = 0.0;             // per-coordinate gradient bound
  double D = 0.0;             // l2 gradient bound
  double p = 0.0;             // Bernoulli parameter of the binomial mechanism
  double delta = 0.0;         // mechanism failure probability
  double eps_budget = 0.0;    // privacy budget (may be +inf)
  double beta = 0.0;          // ridge penalty
  std::uint64_t seed = 0;

  // Optional (kUnset => resolved at run time: lambda = beta, mu estimated
  // from the data Hessian).
  double lambda = kUnset;
  double mu = kUnset;

  // Optional mechanism-constant overrides (kUnset => built-in defaults).
  double b_p = kUnset;
  double c_p = kUnset;

  // Search bounds for the allocation solver and data-synthesis size.
  int l_max = 64;
  long long m_max = 1LL << 20;
  int samples_per_client = 5000;
};

// Throws ValidationError listing every violated field; returns normally iff
// the config satisfies all range constraints.
void validate_experiment_config(const ExperimentConfig& cfg);

// dB <-> linear conversions for transmit power (SNR relative to unit noise).
double snr_db_to_power(double snr_db);
double power_to_snr_db(double power);

}  // namespace binldp

#endif  // BINLDP_CORE_HPP_
