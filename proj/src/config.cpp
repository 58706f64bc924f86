/*
 * Copyright 2026 The ckksid Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ckksid/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ckksid/error.hpp"

namespace ckksid {

namespace {

using nlohmann::json;

void CheckKeys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown field '" + where + "." + key + "'");
  }
}

const json& Require(const json& obj, const std::string& where, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing field '" + where + "." + key + "'");
  return *it;
}

template <typename T>
T As(const json& v, const std::string& name) {
  try {
    if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(name + " must be a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(name + " must be an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
          throw ConfigError(name + " must be non-negative");
        }
      }
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(name + ": " + e.what());
  }
}

std::vector<double> Reals(const json& v, const std::string& name) {
  if (!v.is_array()) throw ConfigError(name + " must be an array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(As<double>(x, name));
  return out;
}

// Seeds may be large, so strings of digits are accepted as well.
std::uint64_t Seed(const json& v, const std::string& name) {
  if (v.is_string()) {
    try {
      std::size_t pos = 0;
      const auto s = v.get<std::string>();
      const std::uint64_t out = std::stoull(s, &pos, 0);
      if (pos != s.size()) throw ConfigError(name + " is not an integer");
      return out;
    } catch (const std::logic_error&) {
      throw ConfigError(name + " is not an integer");
    }
  }
  return As<std::uint64_t>(v, name);
}

ARXModel ParseModel(const json& j) {
  CheckKeys(j, "model", {"p", "q", "a", "b", "L"});
  ARXModel m;
  m.a = Reals(Require(j, "model", "a"), "model.a");
  m.b = Reals(Require(j, "model", "b"), "model.b");
  m.L = As<double>(Require(j, "model", "L"), "model.L");
  const auto p = As<std::size_t>(Require(j, "model", "p"), "model.p");
  const auto q = As<std::size_t>(Require(j, "model", "q"), "model.q");
  if (p < 1 || q < 1) throw ConfigError("model orders p and q must be >= 1");
  if (p != m.a.size() || q != m.b.size()) {
    throw ConfigError("model.a and model.b must have p and q entries");
  }
  try {
    m.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  return m;
}

CryptoConfig ParseCrypto(const json& j) {
  CheckKeys(j, "crypto",
            {"N", "P_factors", "delta_log2", "sigma", "gamma", "h", "base_log", "lambda"});
  CryptoConfig c;
  c.n = As<std::size_t>(Require(j, "crypto", "N"), "crypto.N");
  if (c.n < 4 || (c.n & (c.n - 1)) != 0) throw ConfigError("crypto.N must be a power of two >= 4");
  const json& factors = Require(j, "crypto", "P_factors");
  if (!factors.is_array() || factors.empty()) {
    throw ConfigError("crypto.P_factors must be a non-empty array");
  }
  for (const auto& f : factors) {
    CheckKeys(f, "crypto.P_factors[]", {"prime", "largest_prime_below_pow2", "exp"});
    PrimePower pp;
    pp.exponent = As<unsigned>(Require(f, "crypto.P_factors[]", "exp"), "exp");
    if (pp.exponent == 0) throw ConfigError("factor exponent must be >= 1");
    const bool has_prime = f.contains("prime");
    const bool has_bits = f.contains("largest_prime_below_pow2");
    if (has_prime == has_bits) {
      throw ConfigError("each factor needs exactly one of prime or largest_prime_below_pow2");
    }
    if (has_prime) {
      const json& v = f["prime"];
      try {
        pp.prime = v.is_string() ? mpz_class(v.get<std::string>())
                                 : mpz_class(std::to_string(As<std::uint64_t>(v, "prime")));
      } catch (const std::invalid_argument&) {
        throw ConfigError("factor prime is not an integer");
      }
      if (mpz_probab_prime_p(pp.prime.get_mpz_t(), 40) == 0) {
        throw ConfigError("factor " + pp.prime.get_str() + " is not prime");
      }
    } else {
      const auto bits = As<unsigned>(f["largest_prime_below_pow2"], "largest_prime_below_pow2");
      if (bits < 2 || bits > 4096) throw ConfigError("largest_prime_below_pow2 out of range");
      pp.prime = largest_prime_below_pow2(bits);
    }
    c.factors.push_back(pp);
  }
  c.delta_log2 = As<int>(Require(j, "crypto", "delta_log2"), "crypto.delta_log2");
  if (c.delta_log2 < 1 || c.delta_log2 > 300) throw ConfigError("crypto.delta_log2 out of range");
  c.sigma = As<double>(Require(j, "crypto", "sigma"), "crypto.sigma");
  c.gamma = As<std::int64_t>(Require(j, "crypto", "gamma"), "crypto.gamma");
  c.h = As<std::size_t>(Require(j, "crypto", "h"), "crypto.h");
  if (j.contains("base_log")) c.base_log = As<unsigned>(j["base_log"], "crypto.base_log");
  if (j.contains("lambda")) c.lambda = As<int>(j["lambda"], "crypto.lambda");
  try {
    NoiseParams{c.sigma, c.gamma, c.h}.validate(c.n);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("crypto: ") + e.what());
  }
  if (c.base_log < 1 || c.base_log > 30) throw ConfigError("crypto.base_log must be in [1, 30]");
  return c;
}

IdentConfig ParseIdent(const json& j, std::size_t dim) {
  CheckKeys(j, "ident",
            {"alpha", "theta0", "theta_bar", "k_max", "mode", "seeds", "excitation",
             "guard_divisor"});
  IdentConfig c;
  c.alpha = As<double>(Require(j, "ident", "alpha"), "ident.alpha");
  c.theta0 = Reals(Require(j, "ident", "theta0"), "ident.theta0");
  c.theta_bar = As<double>(Require(j, "ident", "theta_bar"), "ident.theta_bar");
  c.k_max = As<std::size_t>(Require(j, "ident", "k_max"), "ident.k_max");
  if (j.contains("mode")) c.mode = parse_ident_mode(As<std::string>(j["mode"], "ident.mode"));
  if (j.contains("seeds")) {
    const json& s = j["seeds"];
    CheckKeys(s, "ident.seeds", {"crypto", "plant", "quantizer"});
    if (s.contains("crypto")) c.seeds.crypto = Seed(s["crypto"], "seeds.crypto");
    if (s.contains("plant")) c.seeds.plant = Seed(s["plant"], "seeds.plant");
    if (s.contains("quantizer")) c.seeds.quantizer = Seed(s["quantizer"], "seeds.quantizer");
  }
  if (j.contains("excitation")) {
    const json& e = j["excitation"];
    CheckKeys(e, "ident.excitation", {"u", "w"});
    auto range = [&](const char* key, double& lo, double& hi) {
      if (!e.contains(key)) return;
      const auto r = Reals(e[key], std::string("excitation.") + key);
      if (r.size() != 2) throw ConfigError(std::string("excitation.") + key + " needs [lo, hi]");
      lo = r[0];
      hi = r[1];
    };
    range("u", c.excitation.u_min, c.excitation.u_max);
    range("w", c.excitation.w_min, c.excitation.w_max);
  }
  if (j.contains("guard_divisor")) {
    c.guard_divisor = As<unsigned>(j["guard_divisor"], "ident.guard_divisor");
  }
  c.validate(dim);
  return c;
}

}  // namespace

mpz_class largest_prime_below_pow2(unsigned bits) {
  mpz_class x;
  mpz_ui_pow_ui(x.get_mpz_t(), 2, bits);
  while (mpz_probab_prime_p(x.get_mpz_t(), 50) == 0) --x;
  return x;
}

mpz_class CryptoConfig::modulus() const {
  mpz_class p = 1;
  for (const auto& f : factors) {
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
    p *= pw;
  }
  return p;
}

double CryptoConfig::delta() const { return std::ldexp(1.0, delta_log2); }

RingParamsPtr CryptoConfig::ring() const { return RingParams::from_factors(n, factors); }

CkksContextPtr CryptoConfig::context() const {
  return CkksContext::create(ring(), NoiseParams{sigma, gamma, h}, delta(), base_log);
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  CheckKeys(j, "config", {"schema_version", "model", "crypto", "ident", "output"});
  const int version = As<int>(Require(j, "config", "schema_version"), "schema_version");
  if (version != kConfigSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(version));
  }
  ExperimentConfig c;
  c.model = ParseModel(Require(j, "config", "model"));
  c.crypto = ParseCrypto(Require(j, "config", "crypto"));
  c.ident = ParseIdent(Require(j, "config", "ident"), c.model.dim());
  if (j.contains("output")) {
    const json& o = j["output"];
    CheckKeys(o, "output", {"dir", "verbosity"});
    if (o.contains("dir")) c.output.dir = As<std::string>(o["dir"], "output.dir");
    if (o.contains("verbosity")) c.output.verbosity = As<int>(o["verbosity"], "output.verbosity");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json factors = json::array();
  for (const auto& f : c.crypto.factors) {
    factors.push_back({{"prime", f.prime.get_str()}, {"exp", f.exponent}});
  }
  json crypto = {{"N", c.crypto.n},          {"P_factors", factors},
                 {"delta_log2", c.crypto.delta_log2}, {"sigma", c.crypto.sigma},
                 {"gamma", c.crypto.gamma},  {"h", c.crypto.h},
                 {"base_log", c.crypto.base_log}};
  if (c.crypto.lambda) crypto["lambda"] = *c.crypto.lambda;
  const IdentConfig& i = c.ident;
  json j = {
      {"schema_version", kConfigSchemaVersion},
      {"model",
       {{"p", c.model.p()}, {"q", c.model.q()}, {"a", c.model.a}, {"b", c.model.b},
        {"L", c.model.L}}},
      {"crypto", crypto},
      {"ident",
       {{"alpha", i.alpha},
        {"theta0", i.theta0},
        {"theta_bar", i.theta_bar},
        {"k_max", i.k_max},
        {"mode", to_string(i.mode)},
        {"seeds",
         {{"crypto", i.seeds.crypto}, {"plant", i.seeds.plant}, {"quantizer", i.seeds.quantizer}}},
        {"excitation",
         {{"u", {i.excitation.u_min, i.excitation.u_max}},
          {"w", {i.excitation.w_min, i.excitation.w_max}}}},
        {"guard_divisor", i.guard_divisor}}},
      {"output", {{"dir", c.output.dir}, {"verbosity", c.output.verbosity}}}};
  return j.dump(2);
}

}  // namespace ckksid
