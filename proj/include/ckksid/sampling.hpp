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

#ifndef CKKSID_SAMPLING_HPP_
#define CKKSID_SAMPLING_HPP_

#include <cstdint>
#include <vector>

#include "ckksid/random.hpp"
#include "ckksid/ring.hpp"

namespace ckksid {

struct NoiseParams {
  double sigma = 3.2;
  std::int64_t gamma = 1;  // truncation value
  std::size_t h = 64;      // secret Hamming weight

  // Throws ParameterError unless sigma > 0, gamma >= 1 and 1 <= h <= n.
  void validate(std::size_t n) const;
};

// Truncated discrete Gaussian on {-gamma..gamma} with weights exp(-m^2/(2 sigma^2)).
class TdgSampler {
 public:
  enum class Method { kAuto, kInverseCdf, kRejection };

  TdgSampler(double sigma, std::int64_t gamma, Method method = Method::kAuto);

  std::int64_t operator()(ChaChaRng& rng) const;

  double sigma() const { return sigma_; }
  std::int64_t gamma() const { return gamma_; }
  Method method() const { return method_; }

 private:
  std::int64_t sample_inverse_cdf(ChaChaRng& rng) const;
  std::int64_t sample_rejection(ChaChaRng& rng) const;

  double sigma_;
  std::int64_t gamma_;
  Method method_;
  // Inverse-CDF table over {-span..span}; outcomes beyond span have total
  // mass below 2^-100 and are unreachable with a 64-bit uniform.
  std::int64_t span_ = 0;
  std::vector<long double> cdf_;
  // Discrete Laplace proposal q^|m| with q = exp(-1/sigma).
  double log_q_ = 0.0;
};

std::int64_t sample_tdg(double sigma, std::int64_t gamma, ChaChaRng& rng);

RingElement sample_tdg_poly(const RingParamsPtr& params, const TdgSampler& sampler,
                            ChaChaRng& rng);

// Coefficients i.i.d. with P(0) = 1/2, P(1) = P(-1) = 1/4.
RingElement sample_zo(const RingParamsPtr& params, ChaChaRng& rng);

// Exactly h coefficients equal to +-1 at uniformly chosen positions.
RingElement sample_ternary_secret(const RingParamsPtr& params, std::size_t h,
                                  ChaChaRng& rng);

}  // namespace ckksid

#endif  // CKKSID_SAMPLING_HPP_
