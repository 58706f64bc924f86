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

#ifndef CKKSID_RNS_HPP_
#define CKKSID_RNS_HPP_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ckksid/kernels/ntt_kernels.hpp"

namespace ckksid {

// NTT-friendly primes p < 2^30 with p = 1 mod 2^17, in descending order.
// Supports negacyclic transforms up to n = 2^16.
const std::vector<std::uint32_t>& ntt_prime_pool();

inline constexpr std::size_t kMaxNttDegree = std::size_t{1} << 16;

// A polynomial held as residues modulo each prime of an RnsConvolver, in
// NTT (evaluation) form. Limb i occupies data[i * n, (i + 1) * n).
struct RnsPoly {
  std::size_t n = 0;
  std::size_t limbs = 0;
  std::vector<std::uint32_t> data;

  std::span<std::uint32_t> limb(std::size_t i) {
    return {data.data() + i * n, n};
  }
  std::span<const std::uint32_t> limb(std::size_t i) const {
    return {data.data() + i * n, n};
  }
};

// Exact integer negacyclic convolution through a residue number system.
// The prime set is chosen so that the product Q of the primes exceeds
// 2^(bound_bits + 1); every convolution whose true coefficients lie below
// 2^bound_bits in magnitude is then recovered exactly in (-Q/2, Q/2).
class RnsConvolver {
 public:
  RnsConvolver(std::size_t n, std::size_t bound_bits);

  std::size_t n() const { return n_; }
  std::size_t limbs() const { return tables_.size(); }
  std::size_t bound_bits() const { return bound_bits_; }

  RnsPoly zero() const;
  RnsPoly forward(std::span<const mpz_class> coeffs) const;
  RnsPoly forward(std::span<const std::int64_t> coeffs) const;

  // acc += a * b (pointwise in the NTT domain).
  void multiply_accumulate(RnsPoly& acc, const RnsPoly& a, const RnsPoly& b) const;
  RnsPoly multiply(const RnsPoly& a, const RnsPoly& b) const;

  // Back to signed integers, centred in (-Q/2, Q/2).
  std::vector<mpz_class> inverse(RnsPoly poly) const;

  // Full pipeline for two signed integer vectors.
  std::vector<mpz_class> convolve(std::span<const mpz_class> a,
                                  std::span<const mpz_class> b) const;

 private:
  std::size_t n_;
  std::size_t bound_bits_;
  std::vector<kernels::NttTables> tables_;
  // garner_inv_[i][j] = p_j^{-1} mod p_i for j < i.
  std::vector<std::vector<std::uint32_t>> garner_inv_;
  mpz_class product_;
  mpz_class half_product_;
};

}  // namespace ckksid

#endif  // CKKSID_RNS_HPP_
