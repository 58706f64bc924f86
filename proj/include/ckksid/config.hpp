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

#ifndef CKKSID_CONFIG_HPP_
#define CKKSID_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ckksid/arx.hpp"
#include "ckksid/ckks.hpp"
#include "ckksid/identify.hpp"

namespace ckksid {

inline constexpr int kConfigSchemaVersion = 1;

struct CryptoConfig {
  std::size_t n = 8192;
  std::vector<PrimePower> factors;
  int delta_log2 = 40;
  double sigma = 3.2;
  std::int64_t gamma = 18491;
  std::size_t h = 64;
  unsigned base_log = 20;
  // Recorded only; never checked against (N, P, sigma).
  std::optional<int> lambda;

  mpz_class modulus() const;
  double delta() const;
  RingParamsPtr ring() const;
  CkksContextPtr context() const;
};

struct OutputConfig {
  std::string dir = ".";
  int verbosity = 1;
};

struct ExperimentConfig {
  ARXModel model;
  CryptoConfig crypto;
  IdentConfig ident;
  OutputConfig output;
};

// Largest prime <= 2^bits.
mpz_class largest_prime_below_pow2(unsigned bits);

// Schema-checked parse; unknown fields, missing required fields and
// ill-typed values raise ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

}  // namespace ckksid

#endif  // CKKSID_CONFIG_HPP_
