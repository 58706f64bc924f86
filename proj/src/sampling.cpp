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

#include "ckksid/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ckksid/error.hpp"

namespace ckksid {

namespace {

// Largest table the inverse-CDF method builds before switching to rejection.
constexpr std::int64_t kMaxTableSpan = 1 << 16;

std::int64_t NegligibleTailSpan(double sigma) {
  // exp(-m^2 / (2 sigma^2)) < 2^-110 beyond this point.
  return static_cast<std::int64_t>(std::ceil(sigma * std::sqrt(2.0 * 110.0 * std::log(2.0))));
}

}  // namespace

void NoiseParams::validate(std::size_t n) const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be positive");
  if (gamma < 1) throw ParameterError("truncation value gamma must be >= 1");
  if (h < 1 || h > n) throw ParameterError("secret weight h must lie in [1, N]");
}

TdgSampler::TdgSampler(double sigma, std::int64_t gamma, Method method)
    : sigma_(sigma), gamma_(gamma), method_(method) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be positive");
  if (gamma < 1) throw ParameterError("truncation value gamma must be >= 1");
  span_ = std::min(gamma, NegligibleTailSpan(sigma));
  if (method_ == Method::kAuto) {
    method_ = span_ <= kMaxTableSpan ? Method::kInverseCdf : Method::kRejection;
  }
  if (method_ == Method::kInverseCdf) {
    if (span_ > kMaxTableSpan) throw ParameterError("inverse-CDF table too large; use rejection");
    const long double two_var = 2.0L * sigma * sigma;
    cdf_.resize(2 * span_ + 1);
    long double acc = 0;
    for (std::int64_t m = -span_; m <= span_; ++m) {
      acc += std::exp(-static_cast<long double>(m) * m / two_var);
      cdf_[m + span_] = acc;
    }
    for (auto& c : cdf_) c /= acc;
    cdf_.back() = 1.0L;
  } else {
    log_q_ = -1.0 / sigma;
  }
}

std::int64_t TdgSampler::operator()(ChaChaRng& rng) const {
  return method_ == Method::kInverseCdf ? sample_inverse_cdf(rng) : sample_rejection(rng);
}

std::int64_t TdgSampler::sample_inverse_cdf(ChaChaRng& rng) const {
  const long double u = rng.uniform_unit_ld();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = static_cast<std::int64_t>(std::min<std::ptrdiff_t>(
      it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
  return idx - span_;
}

std::int64_t TdgSampler::sample_rejection(ChaChaRng& rng) const {
  // Proposal: difference of two geometric variables, P(m) proportional to q^|m|.
  // With q = exp(-1/sigma) the acceptance probability for m is
  // exp(-(|m| - sigma)^2 / (2 sigma^2)).
  auto geometric = [&]() {
    const double u = 1.0 - rng.uniform_unit();  // (0, 1]
    return static_cast<std::int64_t>(std::floor(std::log(u) / log_q_));
  };
  for (;;) {
    const std::int64_t m = geometric() - geometric();
    if (m > gamma_ || m < -gamma_) continue;
    const double d = std::fabs(static_cast<double>(m)) - sigma_;
    if (rng.uniform_unit() < std::exp(-d * d / (2.0 * sigma_ * sigma_))) return m;
  }
}

std::int64_t sample_tdg(double sigma, std::int64_t gamma, ChaChaRng& rng) {
  return TdgSampler(sigma, gamma)(rng);
}

RingElement sample_tdg_poly(const RingParamsPtr& params, const TdgSampler& sampler,
                            ChaChaRng& rng) {
  std::vector<std::int64_t> c(params->n());
  for (auto& x : c) x = sampler(rng);
  return RingElement::from_int64(params, c);
}

RingElement sample_zo(const RingParamsPtr& params, ChaChaRng& rng) {
  std::vector<std::int64_t> c(params->n());
  std::uint64_t bits = 0;
  int left = 0;
  for (auto& x : c) {
    if (left == 0) {
      bits = rng.next_u64();
      left = 32;
    }
    const unsigned two = bits & 3u;
    bits >>= 2;
    --left;
    x = two == 0 ? -1 : (two == 3 ? 1 : 0);
  }
  return RingElement::from_int64(params, c);
}

RingElement sample_ternary_secret(const RingParamsPtr& params, std::size_t h,
                                  ChaChaRng& rng) {
  const std::size_t n = params->n();
  if (h < 1 || h > n) throw ParameterError("secret weight h must lie in [1, N]");
  std::vector<std::size_t> pos(n);
  std::iota(pos.begin(), pos.end(), 0);
  std::vector<std::int64_t> c(n, 0);
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t j = i + rng.uniform_below(n - i);
    std::swap(pos[i], pos[j]);
    c[pos[i]] = (rng.next_u32() & 1u) ? 1 : -1;
  }
  return RingElement::from_int64(params, c);
}

}  // namespace ckksid
