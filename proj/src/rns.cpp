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

#include "ckksid/rns.hpp"

#include <mutex>
#include <stdexcept>

#include "ckksid/error.hpp"

namespace ckksid {

namespace {

std::uint32_t PowMod32(std::uint64_t b, std::uint64_t e, std::uint32_t m) {
  std::uint64_t r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

// Deterministic Miller-Rabin for 32-bit integers.
bool IsPrime32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t sp : {2u, 3u, 5u, 7u}) {
    if (n % sp == 0) return n == sp;
  }
  std::uint32_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint32_t a : {2u, 7u, 61u}) {
    if (a % n == 0) continue;
    std::uint64_t x = PowMod32(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = x * x % n;
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace

const std::vector<std::uint32_t>& ntt_prime_pool() {
  static const std::vector<std::uint32_t> pool = [] {
    std::vector<std::uint32_t> primes;
    constexpr std::uint64_t kStep = std::uint64_t{1} << 17;
    for (std::uint64_t k = ((std::uint64_t{1} << 30) - 1) / kStep; k >= 1; --k) {
      const auto candidate = static_cast<std::uint32_t>(k * kStep + 1);
      if (IsPrime32(candidate)) primes.push_back(candidate);
    }
    return primes;
  }();
  return pool;
}

RnsConvolver::RnsConvolver(std::size_t n, std::size_t bound_bits)
    : n_(n), bound_bits_(bound_bits) {
  if (n < 2 || (n & (n - 1)) != 0 || n > kMaxNttDegree) {
    throw ParameterError("convolution length must be a power of two in [2, 2^16]");
  }
  const auto& pool = ntt_prime_pool();
  product_ = 1;
  std::size_t used = 0;
  while (mpz_sizeinbase(product_.get_mpz_t(), 2) <= bound_bits + 2) {
    if (used == pool.size()) {
      throw ParameterError("coefficient bound exceeds the NTT prime pool");
    }
    tables_.push_back(kernels::NttTables::make(pool[used], n));
    product_ *= pool[used];
    ++used;
  }
  half_product_ = product_ / 2;
  garner_inv_.resize(tables_.size());
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    const std::uint32_t pi = tables_[i].mod.p;
    for (std::size_t j = 0; j < i; ++j) {
      garner_inv_[i].push_back(PowMod32(tables_[j].mod.p % pi, pi - 2, pi));
    }
  }
}

RnsPoly RnsConvolver::zero() const {
  RnsPoly out;
  out.n = n_;
  out.limbs = tables_.size();
  out.data.assign(n_ * tables_.size(), 0);
  return out;
}

RnsPoly RnsConvolver::forward(std::span<const mpz_class> coeffs) const {
  if (coeffs.size() != n_) throw ParameterMismatch("RNS forward: length mismatch");
  RnsPoly out = zero();
  const auto& ks = kernels::active_kernels();
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    auto limb = out.limb(i);
    const unsigned long p = tables_[i].mod.p;
    for (std::size_t j = 0; j < n_; ++j) {
      limb[j] = static_cast<std::uint32_t>(mpz_fdiv_ui(coeffs[j].get_mpz_t(), p));
    }
    ks.ntt_forward(limb.data(), tables_[i]);
  }
  return out;
}

RnsPoly RnsConvolver::forward(std::span<const std::int64_t> coeffs) const {
  if (coeffs.size() != n_) throw ParameterMismatch("RNS forward: length mismatch");
  RnsPoly out = zero();
  const auto& ks = kernels::active_kernels();
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    auto limb = out.limb(i);
    const std::int64_t p = tables_[i].mod.p;
    for (std::size_t j = 0; j < n_; ++j) {
      std::int64_t r = coeffs[j] % p;
      if (r < 0) r += p;
      limb[j] = static_cast<std::uint32_t>(r);
    }
    ks.ntt_forward(limb.data(), tables_[i]);
  }
  return out;
}

void RnsConvolver::multiply_accumulate(RnsPoly& acc, const RnsPoly& a,
                                       const RnsPoly& b) const {
  const auto& ks = kernels::active_kernels();
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    ks.mul_add_mod(acc.limb(i).data(), a.limb(i).data(), b.limb(i).data(), n_,
                   tables_[i].mod);
  }
}

RnsPoly RnsConvolver::multiply(const RnsPoly& a, const RnsPoly& b) const {
  RnsPoly out = zero();
  const auto& ks = kernels::active_kernels();
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    ks.mul_mod(out.limb(i).data(), a.limb(i).data(), b.limb(i).data(), n_,
               tables_[i].mod);
  }
  return out;
}

std::vector<mpz_class> RnsConvolver::inverse(RnsPoly poly) const {
  const auto& ks = kernels::active_kernels();
  const std::size_t k = tables_.size();
  for (std::size_t i = 0; i < k; ++i) ks.ntt_inverse(poly.limb(i).data(), tables_[i]);

  std::vector<mpz_class> out(n_);
  std::vector<std::uint32_t> mixed(k);
  for (std::size_t j = 0; j < n_; ++j) {
    // Garner: mixed-radix digits v_i with x = v_0 + p_0 (v_1 + p_1 (v_2 + ...)).
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint64_t pi = tables_[i].mod.p;
      std::uint64_t t = poly.data[i * n_ + j];
      for (std::size_t l = 0; l < i; ++l) {
        t = (t + pi - mixed[l] % pi) % pi;
        t = t * garner_inv_[i][l] % pi;
      }
      mixed[i] = static_cast<std::uint32_t>(t);
    }
    mpz_class& x = out[j];
    x = mixed[k - 1];
    for (std::size_t i = k - 1; i-- > 0;) {
      mpz_mul_ui(x.get_mpz_t(), x.get_mpz_t(), tables_[i].mod.p);
      mpz_add_ui(x.get_mpz_t(), x.get_mpz_t(), mixed[i]);
    }
    if (x > half_product_) x -= product_;
  }
  return out;
}

std::vector<mpz_class> RnsConvolver::convolve(std::span<const mpz_class> a,
                                              std::span<const mpz_class> b) const {
  return inverse(multiply(forward(a), forward(b)));
}

}  // namespace ckksid
