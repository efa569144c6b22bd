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

#ifndef BINLDP_QUANTIZER_HPP_
#define BINLDP_QUANTIZER_HPP_

#include "binldp/core.hpp"

namespace binldp {

// Uniform grid of `levels` points over [-G, G]. `levels >= 2`.
struct QuantizerConfig {
  double G = 0.0;
  int levels = 0;
};

// Grid spacing s = 2G / (levels - 1).
double quant_step(const QuantizerConfig& qc);

// Grid point B(r) = -G + r * s for r in [0, levels). Throws on out-of-range r.
double bin_value(const QuantizerConfig& qc, int r);

// Unbiased stochastic rounding of g in [-G, G] to the grid: with g in
// [B(r), B(r+1)), returns B(r+1) with probability (g - B(r)) / s and B(r)
// otherwise, so E[Q(g)] = g exactly. g = G maps to G deterministically.
// Consumes one uniform draw. Throws if g lies outside [-G, G] (beyond a tiny
// float-drift tolerance).
double quantize_element(double g, const QuantizerConfig& qc, Rng& rng);

// Coordinate-wise quantization of a whole gradient. Coordinate j draws from
// the keyed substream j of stream (seed, id), so results do not depend on
// evaluation order.
Vec quantize_vector(const Vec& g, const QuantizerConfig& qc,
                    std::uint64_t seed, StreamId id);

// Grid index of a quantized value (nearest r with B(r) == q); throws if q is
// not on the grid. Used by invariants and by the mechanism's lattice checks.
int grid_index(const QuantizerConfig& qc, double q);

}  // namespace binldp

#endif  // BINLDP_QUANTIZER_HPP_
