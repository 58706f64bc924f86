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

#include <stdexcept>

#include "ckksid/kernels/ntt_kernels.hpp"

namespace ckksid::kernels {

namespace {

std::uint32_t PowMod(std::uint64_t base, std::uint64_t exp, std::uint32_t p) {
  std::uint64_t result = 1;
  base %= p;
  while (exp > 0) {
    if (exp & 1) result = result * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

std::size_t BitReverse(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

// Smallest generator-derived primitive 2n-th root of unity mod p.
std::uint32_t PrimitiveRoot2n(std::uint32_t p, std::size_t n) {
  const std::uint64_t order = 2 * n;
  if ((p - 1) % order != 0) {
    throw std::invalid_argument("prime does not support a 2n-th root of unity");
  }
  for (std::uint32_t g = 2; g < p; ++g) {
    const std::uint32_t candidate = PowMod(g, (p - 1) / order, p);
    // order is a power of two: primitive iff candidate^n == -1.
    if (PowMod(candidate, n, p) == p - 1) return candidate;
  }
  throw std::invalid_argument("no primitive root found");
}

}  // namespace

ModulusConstants ModulusConstants::make(std::uint32_t p) {
  if (p < 3 || p >= (1u << 30) || (p & 1) == 0) {
    throw std::invalid_argument("kernel modulus must be odd and below 2^30");
  }
  ModulusConstants m;
  m.p = p;
  // Newton iteration for p^{-1} mod 2^32.
  std::uint32_t inv = p;
  for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
  m.neg_p_inv = 0u - inv;
  const std::uint64_t r = (std::uint64_t{1} << 32) % p;
  m.r2 = static_cast<std::uint32_t>(r * r % p);
  return m;
}

NttTables NttTables::make(std::uint32_t p, std::size_t n) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("NTT size must be a power of two >= 2");
  }
  NttTables t;
  t.mod = ModulusConstants::make(p);
  t.n = n;
  int log_n = 0;
  while ((std::size_t{1} << log_n) < n) ++log_n;

  const std::uint32_t psi = PrimitiveRoot2n(p, n);
  const std::uint32_t psi_inv = PowMod(psi, 2 * n - 1, p);
  t.psi_rev.resize(n);
  t.ipsi_rev.resize(n);
  t.psi_rev_shoup.resize(n);
  t.ipsi_rev_shoup.resize(n);
  std::uint64_t pw = 1, ipw = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = BitReverse(i, log_n);
    t.psi_rev[r] = static_cast<std::uint32_t>(pw);
    t.ipsi_rev[r] = static_cast<std::uint32_t>(ipw);
    pw = pw * psi % p;
    ipw = ipw * psi_inv % p;
  }
  for (std::size_t i = 0; i < n; ++i) {
    t.psi_rev_shoup[i] = shoup_precompute(t.psi_rev[i], p);
    t.ipsi_rev_shoup[i] = shoup_precompute(t.ipsi_rev[i], p);
  }
  t.n_inv = PowMod(n, p - 2, p);
  t.n_inv_shoup = shoup_precompute(t.n_inv, p);
  return t;
}

}  // namespace ckksid::kernels
