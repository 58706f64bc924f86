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

#ifndef CKKSID_KERNELS_NTT_KERNELS_HPP_
#define CKKSID_KERNELS_NTT_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace ckksid::kernels {

// Word-size prime with everything the kernels need precomputed. p < 2^30 so
// that lazy butterflies can keep values in [0, 4p) inside a uint32_t.
struct ModulusConstants {
  std::uint32_t p = 0;
  std::uint32_t neg_p_inv = 0;  // -p^{-1} mod 2^32
  std::uint32_t r2 = 0;         // 2^64 mod p

  static ModulusConstants make(std::uint32_t p);
};

// Negacyclic NTT tables for one prime: psi is a primitive 2n-th root of unity
// mod p, stored in bit-reversed order together with Shoup companions
// floor(w * 2^32 / p).
struct NttTables {
  ModulusConstants mod;
  std::size_t n = 0;
  std::vector<std::uint32_t> psi_rev, psi_rev_shoup;
  std::vector<std::uint32_t> ipsi_rev, ipsi_rev_shoup;
  std::uint32_t n_inv = 0, n_inv_shoup = 0;

  static NttTables make(std::uint32_t p, std::size_t n);
};

// Every kernel consumes and produces canonical residues in [0, p), so the
// scalar and SIMD variants are bit-identical on identical inputs.
struct KernelSet {
  std::string_view name;
  // In place, natural order -> bit-reversed evaluation order.
  void (*ntt_forward)(std::uint32_t* a, const NttTables& t);
  // In place, bit-reversed order -> natural order, including the 1/n factor.
  void (*ntt_inverse)(std::uint32_t* a, const NttTables& t);
  // out[i] = a[i] * b[i] mod p. out may alias a or b.
  void (*mul_mod)(std::uint32_t* out, const std::uint32_t* a,
                  const std::uint32_t* b, std::size_t n,
                  const ModulusConstants& m);
  // acc[i] = acc[i] + a[i] * b[i] mod p.
  void (*mul_add_mod)(std::uint32_t* acc, const std::uint32_t* a,
                      const std::uint32_t* b, std::size_t n,
                      const ModulusConstants& m);
};

const KernelSet& scalar_kernels();

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelSet* avx2_kernels();

// The variant used by the library. AVX2 when available, unless the
// environment variable CKKSID_FORCE_SCALAR is set to a non-empty value other
// than "0".
const KernelSet& active_kernels();

// Test hook: override the active variant (nullptr restores auto-detection).
void set_active_kernels(const KernelSet* ks);

// Shoup multiplication helpers shared by the variants.
inline std::uint32_t shoup_precompute(std::uint32_t w, std::uint32_t p) {
  return static_cast<std::uint32_t>((std::uint64_t{w} << 32) / p);
}

// Returns w * y mod p in [0, 2p) for any y < 2^32.
inline std::uint32_t shoup_mul_lazy(std::uint32_t y, std::uint32_t w,
                                    std::uint32_t w_shoup, std::uint32_t p) {
  const auto q = static_cast<std::uint32_t>((std::uint64_t{w_shoup} * y) >> 32);
  return w * y - q * p;
}

}  // namespace ckksid::kernels

#endif  // CKKSID_KERNELS_NTT_KERNELS_HPP_
