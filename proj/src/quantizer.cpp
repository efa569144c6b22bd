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

#include "binldp/quantizer.hpp"

#include <cmath>
#include <string>

namespace binldp {
namespace {

void check_quantizer_config(const QuantizerConfig& qc) {
  std::vector<std::string> v;
  if (!(std::isfinite(qc.G) && qc.G > 0.0)) {
    v.push_back("G: need finite > 0, got " + std::to_string(qc.G));
  }
  if (qc.levels < 2) {
    v.push_back("levels: need >= 2, got " + std::to_string(qc.levels));
  }
  if (!v.empty()) throw ValidationError("invalid quantizer config", v);
}

// Inputs may drift past the clip boundary by a few ulp when the caller's
// clipping arithmetic rounds; anything further out is a real contract breach.
constexpr double kBoundaryTol = 1e-9;

}  // namespace

double quant_step(const QuantizerConfig& qc) {
  check_quantizer_config(qc);
  return 2.0 * qc.G / static_cast<double>(qc.levels - 1);
}

double bin_value(const QuantizerConfig& qc, int r) {
  check_quantizer_config(qc);
  if (r < 0 || r >= qc.levels) {
    throw ValidationError("grid index out of range: r = " + std::to_string(r) +
                          ", levels = " + std::to_string(qc.levels));
  }
  // Pin the endpoints so the grid is exactly symmetric in floating point.
  if (r == qc.levels - 1) return qc.G;
  return -qc.G + static_cast<double>(r) * quant_step(qc);
}

double quantize_element(double g, const QuantizerConfig& qc, Rng& rng) {
  check_quantizer_config(qc);
  if (!std::isfinite(g) || std::abs(g) > qc.G * (1.0 + kBoundaryTol)) {
    throw ValidationError("quantizer input outside [-G, G]: g = " +
                          std::to_string(g) + ", G = " + std::to_string(qc.G));
  }
  const double u = rng.uniform();  // always consume exactly one draw
  const double clamped = std::min(qc.G, std::max(-qc.G, g));
  if (clamped >= qc.G) return qc.G;
  const double s = quant_step(qc);
  int r = static_cast<int>(std::floor((clamped + qc.G) / s));
  if (r < 0) r = 0;
  if (r > qc.levels - 2) r = qc.levels - 2;
  const double lo = bin_value(qc, r);
  const double hi = bin_value(qc, r + 1);
  double up_prob = (clamped - lo) / s;
  if (up_prob < 0.0) up_prob = 0.0;
  if (up_prob > 1.0) up_prob = 1.0;
  return u < up_prob ? hi : lo;
}

Vec quantize_vector(const Vec& g, const QuantizerConfig& qc, std::uint64_t seed,
                    StreamId id) {
  check_quantizer_config(qc);
  Rng parent(seed, id);
  Vec out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    Rng sub = parent.substream(j);
    out[j] = quantize_element(g[j], qc, sub);
  }
  return out;
}

int grid_index(const QuantizerConfig& qc, double q) {
  check_quantizer_config(qc);
  const double s = quant_step(qc);
  long long r = std::llround((q + qc.G) / s);
  if (r < 0 || r >= qc.levels ||
      std::abs(bin_value(qc, static_cast<int>(r)) - q) > s * 1e-9) {
    throw ValidationError("value is not a grid point: q = " +
                          std::to_string(q));
  }
  return static_cast<int>(r);
}

}  // namespace binldp
