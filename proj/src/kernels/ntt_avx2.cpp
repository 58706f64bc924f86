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

// AVX2 kernels. Butterflies run lazily on [0, 4p) with Shoup products; the
// last stages whose stride is below one vector fall back to the same lazy
// arithmetic in scalar form. Outputs are reduced to [0, p) before returning.

#include <immintrin.h>

#include "ckksid/kernels/ntt_kernels.hpp"
#include "kernels/internal.hpp"

namespace ckksid::kernels {

namespace {

constexpr std::size_t kLanes = 8;

// hi32(a * b) per 32-bit lane.
inline __m256i MulHi32(__m256i a, __m256i b) {
  const __m256i even = _mm256_srli_epi64(_mm256_mul_epu32(a, b), 32);
  const __m256i odd =
      _mm256_mul_epu32(_mm256_srli_epi64(a, 32), _mm256_srli_epi64(b, 32));
  return _mm256_blend_epi32(even, odd, 0b10101010);
}

// w * y mod p in [0, 2p).
inline __m256i ShoupLazy(__m256i y, __m256i w, __m256i w_shoup, __m256i p) {
  const __m256i q = MulHi32(w_shoup, y);
  return _mm256_sub_epi32(_mm256_mullo_epi32(w, y), _mm256_mullo_epi32(q, p));
}

// x - bound if x >= bound, valid while x < 2 * bound <= 2^32.
inline __m256i CondSub(__m256i x, __m256i bound) {
  return _mm256_min_epu32(x, _mm256_sub_epi32(x, bound));
}

inline std::uint32_t CondSubScalar(std::uint32_t x, std::uint32_t bound) {
  return x >= bound ? x - bound : x;
}

void NttForwardAvx2(std::uint32_t* a, const NttTables& tab) {
  const std::uint32_t p = tab.mod.p;
  const std::uint32_t two_p = 2 * p;
  const std::size_t n = tab.n;
  const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
  const __m256i v2p = _mm256_set1_epi32(static_cast<int>(two_p));

  std::size_t t = n;
  for (std::size_t m = 1; m < n; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t w = tab.psi_rev[m + i];
      const std::uint32_t ws = tab.psi_rev_shoup[m + i];
      std::uint32_t* x = a + 2 * i * t;
      std::uint32_t* y = x + t;
      if (t >= kLanes) {
        const __m256i vw = _mm256_set1_epi32(static_cast<int>(w));
        const __m256i vws = _mm256_set1_epi32(static_cast<int>(ws));
        for (std::size_t j = 0; j < t; j += kLanes) {
          auto* px = reinterpret_cast<__m256i*>(x + j);
          auto* py = reinterpret_cast<__m256i*>(y + j);
          __m256i u = CondSub(_mm256_loadu_si256(px), v2p);
          const __m256i v = ShoupLazy(_mm256_loadu_si256(py), vw, vws, vp);
          _mm256_storeu_si256(px, _mm256_add_epi32(u, v));
          _mm256_storeu_si256(py, _mm256_add_epi32(_mm256_sub_epi32(u, v), v2p));
        }
      } else {
        for (std::size_t j = 0; j < t; ++j) {
          const std::uint32_t u = CondSubScalar(x[j], two_p);
          const std::uint32_t v = shoup_mul_lazy(y[j], w, ws, p);
          x[j] = u + v;
          y[j] = u - v + two_p;
        }
      }
    }
  }
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    auto* pa = reinterpret_cast<__m256i*>(a + j);
    _mm256_storeu_si256(pa, CondSub(CondSub(_mm256_loadu_si256(pa), v2p), vp));
  }
  for (; j < n; ++j) a[j] = CondSubScalar(CondSubScalar(a[j], two_p), p);
}

void NttInverseAvx2(std::uint32_t* a, const NttTables& tab) {
  const std::uint32_t p = tab.mod.p;
  const std::uint32_t two_p = 2 * p;
  const std::size_t n = tab.n;
  const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
  const __m256i v2p = _mm256_set1_epi32(static_cast<int>(two_p));

  std::size_t t = 1;
  for (std::size_t m = n; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    for (std::size_t i = 0; i < h; ++i) {
      const std::uint32_t w = tab.ipsi_rev[h + i];
      const std::uint32_t ws = tab.ipsi_rev_shoup[h + i];
      std::uint32_t* x = a + 2 * i * t;
      std::uint32_t* y = x + t;
      if (t >= kLanes) {
        const __m256i vw = _mm256_set1_epi32(static_cast<int>(w));
        const __m256i vws = _mm256_set1_epi32(static_cast<int>(ws));
        for (std::size_t j = 0; j < t; j += kLanes) {
          auto* px = reinterpret_cast<__m256i*>(x + j);
          auto* py = reinterpret_cast<__m256i*>(y + j);
          const __m256i u = _mm256_loadu_si256(px);
          const __m256i v = _mm256_loadu_si256(py);
          _mm256_storeu_si256(px, CondSub(_mm256_add_epi32(u, v), v2p));
          const __m256i d = _mm256_add_epi32(_mm256_sub_epi32(u, v), v2p);
          _mm256_storeu_si256(py, ShoupLazy(d, vw, vws, vp));
        }
      } else {
        for (std::size_t j = 0; j < t; ++j) {
          const std::uint32_t u = x[j];
          const std::uint32_t v = y[j];
          x[j] = CondSubScalar(u + v, two_p);
          y[j] = shoup_mul_lazy(u - v + two_p, w, ws, p);
        }
      }
    }
    t <<= 1;
  }
  const __m256i vninv = _mm256_set1_epi32(static_cast<int>(tab.n_inv));
  const __m256i vninvs = _mm256_set1_epi32(static_cast<int>(tab.n_inv_shoup));
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    auto* pa = reinterpret_cast<__m256i*>(a + j);
    const __m256i r = ShoupLazy(_mm256_loadu_si256(pa), vninv, vninvs, vp);
    _mm256_storeu_si256(pa, CondSub(r, vp));
  }
  for (; j < n; ++j) {
    a[j] = CondSubScalar(shoup_mul_lazy(a[j], tab.n_inv, tab.n_inv_shoup, p), p);
  }
}

// Montgomery product a * b * 2^{-32} mod p in [0, 2p), computed on the even
// 32-bit lanes of a and b (odd lanes are ignored). Result in the low half of
// each 64-bit lane.
inline __m256i MontEven(__m256i a, __m256i b, __m256i p, __m256i neg_p_inv) {
  const __m256i t = _mm256_mul_epu32(a, b);
  const __m256i m = _mm256_mul_epu32(t, neg_p_inv);
  const __m256i u = _mm256_add_epi64(t, _mm256_mul_epu32(m, p));
  return _mm256_srli_epi64(u, 32);
}

inline __m256i MulModVec(__m256i a, __m256i b, __m256i p, __m256i neg_p_inv,
                         __m256i r2) {
  const __m256i a_odd = _mm256_srli_epi64(a, 32);
  const __m256i b_odd = _mm256_srli_epi64(b, 32);
  // a * b * R^{-1}, then * R^2 * R^{-1} to cancel the Montgomery factor.
  __m256i even = MontEven(a, b, p, neg_p_inv);
  __m256i odd = MontEven(a_odd, b_odd, p, neg_p_inv);
  even = MontEven(even, r2, p, neg_p_inv);
  odd = MontEven(odd, r2, p, neg_p_inv);
  const __m256i merged =
      _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0b10101010);
  return CondSub(merged, p);
}

void MulModAvx2(std::uint32_t* out, const std::uint32_t* a,
                const std::uint32_t* b, std::size_t n,
                const ModulusConstants& m) {
  const __m256i vp = _mm256_set1_epi32(static_cast<int>(m.p));
  const __m256i vinv = _mm256_set1_epi32(static_cast<int>(m.neg_p_inv));
  const __m256i vr2 = _mm256_set1_epi32(static_cast<int>(m.r2));
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i),
                        MulModVec(va, vb, vp, vinv, vr2));
  }
  for (; i < n; ++i) {
    out[i] = static_cast<std::uint32_t>(std::uint64_t{a[i]} * b[i] % m.p);
  }
}

void MulAddModAvx2(std::uint32_t* acc, const std::uint32_t* a,
                   const std::uint32_t* b, std::size_t n,
                   const ModulusConstants& m) {
  const __m256i vp = _mm256_set1_epi32(static_cast<int>(m.p));
  const __m256i vinv = _mm256_set1_epi32(static_cast<int>(m.neg_p_inv));
  const __m256i vr2 = _mm256_set1_epi32(static_cast<int>(m.r2));
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    auto* pc = reinterpret_cast<__m256i*>(acc + i);
    const __m256i prod = MulModVec(va, vb, vp, vinv, vr2);
    _mm256_storeu_si256(pc, CondSub(_mm256_add_epi32(_mm256_loadu_si256(pc), prod), vp));
  }
  for (; i < n; ++i) {
    acc[i] = static_cast<std::uint32_t>((std::uint64_t{a[i]} * b[i] + acc[i]) % m.p);
  }
}

}  // namespace

const KernelSet& avx2_kernel_set() {
  static const KernelSet ks{"avx2", NttForwardAvx2, NttInverseAvx2, MulModAvx2,
                            MulAddModAvx2};
  return ks;
}

}  // namespace ckksid::kernels
