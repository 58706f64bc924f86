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

#include "ckksid/kernels/ntt_kernels.hpp"

#include <gtest/gtest.h>

#include "ckksid/random.hpp"
#include "ckksid/rns.hpp"
#include "support/oracles.hpp"

namespace ckksid {
namespace {

using kernels::KernelSet;
using kernels::NttTables;

std::vector<std::uint32_t> RandomResidues(std::size_t n, std::uint32_t p, ChaChaRng& rng) {
  std::vector<std::uint32_t> v(n);
  for (auto& x : v) x = static_cast<std::uint32_t>(rng.uniform_below(p));
  return v;
}

// Schoolbook negacyclic product modulo a word-size prime.
std::vector<std::uint32_t> NegacyclicModP(const std::vector<std::uint32_t>& a,
                                          const std::vector<std::uint32_t>& b,
                                          std::uint32_t p) {
  const std::size_t n = a.size();
  std::vector<std::uint64_t> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t prod = std::uint64_t{a[i]} * b[j] % p;
      const std::size_t k = (i + j) % n;
      acc[k] = (i + j < n) ? (acc[k] + prod) % p : (acc[k] + p - prod) % p;
    }
  }
  return {acc.begin(), acc.end()};
}

std::vector<const KernelSet*> Variants() {
  std::vector<const KernelSet*> out{&kernels::scalar_kernels()};
  if (kernels::avx2_kernels() != nullptr) out.push_back(kernels::avx2_kernels());
  return out;
}

TEST(NttPrimeTest, PoolPrimesAreNttFriendly) {
  const auto& pool = ntt_prime_pool();
  ASSERT_GE(pool.size(), 20u);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    EXPECT_LT(pool[i], 1u << 30);
    EXPECT_EQ(pool[i] % (1u << 17), 1u);
    if (i > 0) EXPECT_LT(pool[i], pool[i - 1]);
    mpz_class p(pool[i]);
    EXPECT_NE(mpz_probab_prime_p(p.get_mpz_t(), 30), 0);
  }
}

TEST(NttTablesTest, PsiIsPrimitive2nthRoot) {
  const std::uint32_t p = ntt_prime_pool()[0];
  const NttTables t = NttTables::make(p, 64);
  // psi_rev[1] = psi^(n/2), a square root of -1.
  const std::uint64_t r = t.psi_rev[1];
  EXPECT_EQ(r * r % p, p - 1u);
  EXPECT_EQ(std::uint64_t{t.n_inv} * 64 % p, 1u);
}

TEST(NttKernelTest, ConvolutionMatchesSchoolbook) {
  const std::uint32_t p = ntt_prime_pool()[3];
  ChaChaRng rng(21);
  for (const KernelSet* ks : Variants()) {
    for (std::size_t n : {2u, 4u, 8u, 16u, 32u, 64u, 128u}) {
      const NttTables t = NttTables::make(p, n);
      auto a = RandomResidues(n, p, rng), b = RandomResidues(n, p, rng);
      const auto expected = NegacyclicModP(a, b, p);
      ks->ntt_forward(a.data(), t);
      ks->ntt_forward(b.data(), t);
      ks->mul_mod(a.data(), a.data(), b.data(), n, t.mod);
      ks->ntt_inverse(a.data(), t);
      EXPECT_EQ(a, expected) << ks->name << " n=" << n;
    }
  }
}

TEST(NttKernelTest, RoundTripIsIdentity) {
  const std::uint32_t p = ntt_prime_pool()[0];
  ChaChaRng rng(22);
  for (const KernelSet* ks : Variants()) {
    for (std::size_t n : {4u, 1024u, 8192u}) {
      const NttTables t = NttTables::make(p, n);
      auto a = RandomResidues(n, p, rng);
      const auto orig = a;
      ks->ntt_forward(a.data(), t);
      for (auto x : a) ASSERT_LT(x, p);
      ks->ntt_inverse(a.data(), t);
      EXPECT_EQ(a, orig) << ks->name;
    }
  }
}

// The SIMD variant must be bit-identical to the scalar reference.
TEST(NttKernelTest, Avx2MatchesScalarExactly) {
  const KernelSet* simd = kernels::avx2_kernels();
  if (simd == nullptr) GTEST_SKIP() << "AVX2 variant unavailable";
  const KernelSet& ref = kernels::scalar_kernels();
  ChaChaRng rng(23);
  for (std::uint32_t p : {ntt_prime_pool()[0], ntt_prime_pool()[17]}) {
    for (std::size_t n : {2u, 8u, 16u, 64u, 2048u, 8192u}) {
      const NttTables t = NttTables::make(p, n);
      auto a = RandomResidues(n, p, rng), b = RandomResidues(n, p, rng);
      auto c = RandomResidues(n, p, rng);
      // Edge values.
      a[0] = 0;
      a[n - 1] = p - 1;
      auto a2 = a, b2 = b, c2 = c;
      ref.ntt_forward(a.data(), t);
      simd->ntt_forward(a2.data(), t);
      ASSERT_EQ(a, a2) << "forward n=" << n;
      ref.mul_mod(b.data(), a.data(), b.data(), n, t.mod);
      simd->mul_mod(b2.data(), a2.data(), b2.data(), n, t.mod);
      ASSERT_EQ(b, b2) << "mul n=" << n;
      ref.mul_add_mod(c.data(), a.data(), b.data(), n, t.mod);
      simd->mul_add_mod(c2.data(), a2.data(), b2.data(), n, t.mod);
      ASSERT_EQ(c, c2) << "mul_add n=" << n;
      ref.ntt_inverse(c.data(), t);
      simd->ntt_inverse(c2.data(), t);
      ASSERT_EQ(c, c2) << "inverse n=" << n;
    }
  }
}

TEST(NttKernelTest, MulModEdgeValues) {
  const std::uint32_t p = ntt_prime_pool()[0];
  const auto mod = kernels::ModulusConstants::make(p);
  std::vector<std::uint32_t> a{0, 1, p - 1, p - 1, 2, p / 2, 12345, p - 2};
  std::vector<std::uint32_t> b{p - 1, p - 1, p - 1, 1, p / 2 + 1, p / 2, 67890, p - 2};
  for (const KernelSet* ks : Variants()) {
    std::vector<std::uint32_t> out(a.size());
    ks->mul_mod(out.data(), a.data(), b.data(), a.size(), mod);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(out[i], std::uint64_t{a[i]} * b[i] % p) << ks->name << " i=" << i;
    }
  }
}

TEST(NttKernelTest, SetActiveKernelsOverrides) {
  kernels::set_active_kernels(&kernels::scalar_kernels());
  EXPECT_EQ(kernels::active_kernels().name, kernels::scalar_kernels().name);
  kernels::set_active_kernels(nullptr);
}

TEST(RnsConvolverTest, ExactForLargeCoefficients) {
  ChaChaRng rng(24);
  const std::size_t n = 32;
  RnsConvolver conv(n, 2 * 240 + 6);
  std::vector<mpz_class> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Signed 240-bit values.
    mpz_class x = 0, y = 0;
    for (int w = 0; w < 4; ++w) {
      x = (x << 60) + (rng.next_u64() >> 4);
      y = (y << 60) + (rng.next_u64() >> 4);
    }
    a[i] = (rng.next_u32() & 1) ? x : mpz_class(-x);
    b[i] = (rng.next_u32() & 1) ? y : mpz_class(-y);
  }
  const auto got = conv.convolve(a, b);
  for (std::size_t l = 0; l < n; ++l) {
    mpz_class want = 0;
    for (std::size_t t = 0; t < n; ++t) {
      if (t <= l) want += a[t] * b[l - t];
      else want -= a[t] * b[n + l - t];
    }
    ASSERT_EQ(got[l], want) << l;
  }
}

}  // namespace
}  // namespace ckksid
