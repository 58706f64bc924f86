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

// Scalar reference kernels. Every intermediate value is kept canonical.

#include "ckksid/kernels/ntt_kernels.hpp"

namespace ckksid::kernels {

namespace {

inline std::uint32_t MulShoup(std::uint32_t y, std::uint32_t w,
                              std::uint32_t w_shoup, std::uint32_t p) {
  std::uint32_t r = shoup_mul_lazy(y, w, w_shoup, p);
  return r >= p ? r - p : r;
}

inline std::uint32_t AddMod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  const std::uint32_t s = a + b;
  return s >= p ? s - p : s;
}

inline std::uint32_t SubMod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return a >= b ? a - b : a + p - b;
}

void NttForwardScalar(std::uint32_t* a, const NttTables& tab) {
  const std::uint32_t p = tab.mod.p;
  const std::size_t n = tab.n;
  std::size_t t = n;
  for (std::size_t m = 1; m < n; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t w = tab.psi_rev[m + i];
      const std::uint32_t ws = tab.psi_rev_shoup[m + i];
      std::uint32_t* x = a + 2 * i * t;
      std::uint32_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        const std::uint32_t u = x[j];
        const std::uint32_t v = MulShoup(y[j], w, ws, p);
        x[j] = AddMod(u, v, p);
        y[j] = SubMod(u, v, p);
      }
    }
  }
}

void NttInverseScalar(std::uint32_t* a, const NttTables& tab) {
  const std::uint32_t p = tab.mod.p;
  const std::size_t n = tab.n;
  std::size_t t = 1;
  for (std::size_t m = n; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    for (std::size_t i = 0; i < h; ++i) {
      const std::uint32_t w = tab.ipsi_rev[h + i];
      const std::uint32_t ws = tab.ipsi_rev_shoup[h + i];
      std::uint32_t* x = a + 2 * i * t;
      std::uint32_t* y = x + t;
      for (std::size_t j = 0; j < t; ++j) {
        const std::uint32_t u = x[j];
        const std::uint32_t v = y[j];
        x[j] = AddMod(u, v, p);
        y[j] = MulShoup(SubMod(u, v, p), w, ws, p);
      }
    }
    t <<= 1;
  }
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = MulShoup(a[j], tab.n_inv, tab.n_inv_shoup, p);
  }
}

void MulModScalar(std::uint32_t* out, const std::uint32_t* a,
                  const std::uint32_t* b, std::size_t n,
                  const ModulusConstants& m) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<std::uint32_t>(std::uint64_t{a[i]} * b[i] % m.p);
  }
}

void MulAddModScalar(std::uint32_t* acc, const std::uint32_t* a,
                     const std::uint32_t* b, std::size_t n,
                     const ModulusConstants& m) {
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] = static_cast<std::uint32_t>(
        (std::uint64_t{a[i]} * b[i] + acc[i]) % m.p);
  }
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet ks{"scalar", NttForwardScalar, NttInverseScalar,
                            MulModScalar, MulAddModScalar};
  return ks;
}

}  // namespace ckksid::kernels
