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

#ifndef CKKSID_TESTS_SUPPORT_FIXTURES_HPP_
#define CKKSID_TESTS_SUPPORT_FIXTURES_HPP_

#include <cmath>
#include <memory>

#include "ckksid/arx.hpp"
#include "ckksid/ckks.hpp"

namespace ckksid::testing {

inline const mpz_class& P1() {
  static const mpz_class p("1099511627689");  // largest prime <= 2^40
  return p;
}
inline const mpz_class& P2() {
  static const mpz_class p("1152921504606846883");  // largest prime <= 2^60
  return p;
}

inline RingParamsPtr ExampleRing(std::size_t n) {
  return RingParams::from_factors(n, {{P1(), 3}, {P2(), 2}});
}

// Smallest integer Gamma with Gamma >= sigma (sqrt(2) N + 1).
inline std::int64_t GammaFor(std::size_t n, double sigma) {
  return static_cast<std::int64_t>(std::ceil(sigma * (std::sqrt(2.0) * n + 1.0)));
}

inline CkksContextPtr ExampleContext(std::size_t n, std::size_t h = 64) {
  NoiseParams noise{3.2, GammaFor(n, 3.2), std::min(h, n)};
  return CkksContext::create(ExampleRing(n), noise, 0x1p40);
}

// Third-order plant with a sixth-order input filter, L = 5.
inline ARXModel ExamplePlant() {
  return ARXModel{{1.3, -0.6, 0.1}, {0.0, -1.0, -2.0, 0.5, 1.3, 2.2}, 5.0};
}

inline std::vector<double> ExampleThetaHat0() {
  return {2.0, -1.0, -0.5, 1.3, -0.3, 0.6, 1.1, 2.2, -1.5};
}

inline SlotVector RandomSlots(std::size_t count, double bound, ChaChaRng& rng,
                              bool real = false) {
  SlotVector z = SlotVector::zeros(count);
  for (std::size_t i = 0; i < count; ++i) {
    z[i] = {rng.uniform_real(-bound, bound), real ? 0.0 : rng.uniform_real(-bound, bound)};
  }
  return z;
}

inline double MaxSlotError(const SlotVector& a, const SlotVector& b) {
  double e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

inline double MaxAbs(const SlotVector& a) {
  double m = 0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace ckksid::testing

#endif  // CKKSID_TESTS_SUPPORT_FIXTURES_HPP_
