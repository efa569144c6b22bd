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

#include "binldp/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "binldp/privacy.hpp"

namespace binldp {
namespace {

using nlohmann::json;

const std::set<std::string> kRequiredKeys = {
    "n", "d", "T", "N", "G", "D", "p", "delta", "eps_budget", "beta", "seed"};
const std::set<std::string> kOptionalKeys = {
    "power",   "snr_db", "lambda", "mu", "b_p",
    "c_p",     "l_max",  "m_max",  "samples_per_client"};

bool is_null_or_absent(const json& j, const std::string& key) {
  return !j.contains(key) || j.at(key).is_null();
}

// "inf"/"infinity" (any case) parse to +infinity; JSON itself cannot spell it.
bool parse_inf_string(const json& value, double* out) {
  if (!value.is_string()) return false;
  std::string s = value.get<std::string>();
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "inf" || s == "infinity") {
    *out = std::numeric_limits<double>::infinity();
    return true;
  }
  return false;
}

class SchemaReader {
 public:
  explicit SchemaReader(const json& doc) : doc_(doc) {}

  int read_int(const std::string& key) {
    const json* v = fetch(key);
    if (v == nullptr) return 0;
    if (!v->is_number_integer()) {
      fail(key + ": need an integer, got " + v->dump());
      return 0;
    }
    const long long raw = v->get<long long>();
    if (raw < std::numeric_limits<int>::min() ||
        raw > std::numeric_limits<int>::max()) {
      fail(key + ": out of range, got " + v->dump());
      return 0;
    }
    return static_cast<int>(raw);
  }

  long long read_int64(const std::string& key) {
    const json* v = fetch(key);
    if (v == nullptr) return 0;
    if (!v->is_number_integer()) {
      fail(key + ": need an integer, got " + v->dump());
      return 0;
    }
    return v->get<long long>();
  }

  std::uint64_t read_uint64(const std::string& key) {
    const json* v = fetch(key);
    if (v == nullptr) return 0;
    if (!(v->is_number_unsigned() ||
          (v->is_number_integer() && v->get<long long>() >= 0))) {
      fail(key + ": need a nonnegative integer, got " + v->dump());
      return 0;
    }
    return v->get<std::uint64_t>();
  }

  double read_real(const std::string& key, bool allow_inf_string = false) {
    const json* v = fetch(key);
    if (v == nullptr) return 0.0;
    double inf = 0.0;
    if (allow_inf_string && parse_inf_string(*v, &inf)) return inf;
    if (!v->is_number()) {
      fail(key + ": need a number" +
           (allow_inf_string ? " or \"inf\"" : std::string()) + ", got " +
           v->dump());
      return 0.0;
    }
    return v->get<double>();
  }

  void fail(const std::string& msg) { violations_.push_back(msg); }
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  const json* fetch(const std::string& key) {
    if (is_null_or_absent(doc_, key)) {
      fail(key + ": required key is missing");
      return nullptr;
    }
    return &doc_.at(key);
  }

  const json& doc_;
  std::vector<std::string> violations_;
};

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") +
                          e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("config must be a JSON object");
  }

  SchemaReader reader(doc);
  for (const auto& item : doc.items()) {
    if (kRequiredKeys.count(item.key()) == 0 &&
        kOptionalKeys.count(item.key()) == 0) {
      reader.fail(item.key() + ": unknown key");
    }
  }

  ExperimentConfig cfg;
  cfg.n = reader.read_int("n");
  cfg.d = reader.read_int("d");
  cfg.T = reader.read_int("T");
  cfg.N = reader.read_int("N");
  cfg.G = reader.read_real("G");
  cfg.D = reader.read_real("D");
  cfg.p = reader.read_real("p");
  cfg.delta = reader.read_real("delta");
  cfg.eps_budget = reader.read_real("eps_budget", /*allow_inf_string=*/true);
  cfg.beta = reader.read_real("beta");
  cfg.seed = reader.read_uint64("seed");

  // Exactly one of "power" (explicit array) or "snr_db" (scalar applied to
  // every client) selects the transmit powers.
  const bool has_power = !is_null_or_absent(doc, "power");
  const bool has_snr = !is_null_or_absent(doc, "snr_db");
  if (has_power == has_snr) {
    reader.fail(
        "power/snr_db: need exactly one of the two (power array or scalar "
        "snr_db)");
  } else if (has_power) {
    const json& pw = doc.at("power");
    if (!pw.is_array() || pw.empty()) {
      reader.fail("power: need a nonempty array of numbers");
    } else {
      for (const json& x : pw) {
        if (!x.is_number()) {
          reader.fail("power: need a nonempty array of numbers, got element " +
                      x.dump());
          break;
        }
        cfg.power.push_back(x.get<double>());
      }
    }
  } else {
    const json& snr = doc.at("snr_db");
    if (!snr.is_number()) {
      reader.fail("snr_db: need a number, got " + snr.dump());
    } else if (cfg.n >= 1) {
      cfg.power.assign(static_cast<std::size_t>(cfg.n),
                       snr_db_to_power(snr.get<double>()));
    }
  }

  // The optional fields below use a negative in-struct sentinel for "unset",
  // so an explicit out-of-range value must be rejected here, where presence
  // is still known (it could otherwise alias the sentinel).
  if (!is_null_or_absent(doc, "lambda")) {
    cfg.lambda = reader.read_real("lambda");
    if (doc.at("lambda").is_number() && !(cfg.lambda > 0.0)) {
      reader.fail("lambda: need finite > 0 when set, got " +
                  doc.at("lambda").dump());
    }
  }
  if (!is_null_or_absent(doc, "mu")) {
    cfg.mu = reader.read_real("mu");
    if (doc.at("mu").is_number() && !(cfg.mu > 0.0)) {
      reader.fail("mu: need finite > 0 when set, got " + doc.at("mu").dump());
    }
  }
  if (!is_null_or_absent(doc, "b_p")) {
    cfg.b_p = reader.read_real("b_p");
    if (doc.at("b_p").is_number() && cfg.b_p < 0.0) {
      reader.fail("b_p: need finite >= 0 when set, got " +
                  doc.at("b_p").dump());
    }
  }
  if (!is_null_or_absent(doc, "c_p")) {
    cfg.c_p = reader.read_real("c_p");
    if (doc.at("c_p").is_number() && cfg.c_p < 0.0) {
      reader.fail("c_p: need finite >= 0 when set, got " +
                  doc.at("c_p").dump());
    }
  }
  if (!is_null_or_absent(doc, "l_max")) cfg.l_max = reader.read_int("l_max");
  if (!is_null_or_absent(doc, "m_max")) cfg.m_max = reader.read_int64("m_max");
  if (!is_null_or_absent(doc, "samples_per_client")) {
    cfg.samples_per_client = reader.read_int("samples_per_client");
  }

  if (!reader.violations().empty()) {
    std::string what = "invalid config (" +
                       std::to_string(reader.violations().size()) +
                       " violation" +
                       (reader.violations().size() == 1 ? "" : "s") + "):";
    for (const auto& item : reader.violations()) what += "\n  - " + item;
    throw ValidationError(what, reader.violations());
  }

  validate_experiment_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot read config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["d"] = cfg.d;
  j["T"] = cfg.T;
  j["N"] = cfg.N;
  j["power"] = cfg.power;
  j["G"] = cfg.G;
  j["D"] = cfg.D;
  j["p"] = cfg.p;
  j["delta"] = cfg.delta;
  if (std::isinf(cfg.eps_budget)) {
    j["eps_budget"] = "inf";
  } else {
    j["eps_budget"] = cfg.eps_budget;
  }
  j["beta"] = cfg.beta;
  j["seed"] = cfg.seed;
  // lambda/mu stay null when unset: both resolve against the synthesized
  // data at run time, so no data-free default exists.
  j["lambda"] = cfg.lambda == kUnset ? json(nullptr) : json(cfg.lambda);
  j["mu"] = cfg.mu == kUnset ? json(nullptr) : json(cfg.mu);
  const MechanismConstants kc =
      MechanismConstants::resolve(cfg.p, cfg.b_p, cfg.c_p);
  j["b_p"] = kc.b_p;
  j["c_p"] = kc.c_p;
  j["l_max"] = cfg.l_max;
  j["m_max"] = cfg.m_max;
  j["samples_per_client"] = cfg.samples_per_client;
  return j.dump(2) + "\n";  // keys serialize sorted; stable byte-for-byte
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string echo = config_to_json(cfg);
  std::uint64_t hash = 0xCBF29CE484222325ULL;  // FNV-1a offset basis
  for (unsigned char byte : echo) {
    hash ^= static_cast<std::uint64_t>(byte);
    hash *= 0x100000001B3ULL;  // FNV prime
  }
  return hash;
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  return std::string(buf).substr(0, 8);
}

}  // namespace binldp
