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

#ifndef CKKSID_RING_HPP_
#define CKKSID_RING_HPP_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "ckksid/random.hpp"
#include "ckksid/rns.hpp"

namespace ckksid {

struct PrimePower {
  mpz_class prime;
  unsigned exponent = 1;
};

// Parameters of R_P = Z_P[x]/(x^N + 1). N is a power of two (N >= 2 here; the
// CKKS layer additionally requires N >= 4) and P >= 2 is an arbitrary-precision
// modulus, optionally with a known factorisation.
class RingParams {
 public:
  RingParams(std::size_t n, mpz_class modulus,
             std::vector<PrimePower> factorization = {});

  static std::shared_ptr<const RingParams> create(
      std::size_t n, mpz_class modulus, std::vector<PrimePower> factorization = {});

  // P = prod prime^exponent.
  static std::shared_ptr<const RingParams> from_factors(
      std::size_t n, std::vector<PrimePower> factorization);

  std::size_t n() const { return n_; }
  int log_n() const { return log_n_; }
  const mpz_class& modulus() const { return modulus_; }
  std::size_t modulus_bits() const { return modulus_bits_; }
  const std::vector<PrimePower>& factorization() const { return factorization_; }

  // Reduces x into the canonical representative of Z_P in [-P/2, P/2).
  void reduce(mpz_class& x) const;

  // Convolution engine able to multiply two vectors whose coefficient
  // magnitudes are below 2^a_bits and 2^b_bits. Engines are cached.
  const RnsConvolver& convolver(std::size_t a_bits, std::size_t b_bits) const;

  bool operator==(const RingParams& o) const {
    return n_ == o.n_ && modulus_ == o.modulus_;
  }

 private:
  std::size_t n_;
  int log_n_ = 0;
  mpz_class modulus_;
  std::size_t modulus_bits_;
  std::vector<PrimePower> factorization_;

  mutable std::mutex cache_mu_;
  mutable std::map<std::size_t, std::unique_ptr<RnsConvolver>> convolvers_;
};

using RingParamsPtr = std::shared_ptr<const RingParams>;

// A polynomial of degree < N with coefficients in canonical signed form.
class RingElement {
 public:
  RingElement() = default;
  explicit RingElement(RingParamsPtr params);  // zero

  static RingElement from_coeffs(RingParamsPtr params, std::vector<mpz_class> coeffs);
  static RingElement from_int64(RingParamsPtr params,
                                std::span<const std::int64_t> coeffs);
  // Monomial c * x^k.
  static RingElement monomial(RingParamsPtr params, std::size_t k, long c = 1);

  std::size_t n() const { return coeffs_.size(); }
  const RingParamsPtr& params() const { return params_; }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  const mpz_class& operator[](std::size_t i) const { return coeffs_[i]; }

  bool is_zero() const;
  // max_i |coeff_i| of the canonical representative.
  mpz_class inf_norm() const;

  bool operator==(const RingElement& o) const;

 private:
  RingParamsPtr params_;
  std::vector<mpz_class> coeffs_;
};

RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_sub(const RingElement& a, const RingElement& b);
RingElement ring_neg(const RingElement& a);
RingElement ring_scalar_mul(const mpz_class& c, const RingElement& a);
// Negacyclic product; runs through the RNS/NTT engine and is bit-identical to
// ring_mul_schoolbook.
RingElement ring_mul(const RingElement& a, const RingElement& b);
// Quadratic-time reference product.
RingElement ring_mul_schoolbook(const RingElement& a, const RingElement& b);
// The automorphism x -> x^g for odd g.
RingElement ring_automorphism(const RingElement& a, std::size_t galois_elt);
// Each coefficient independently uniform over Z_P.
RingElement uniform_ring(const RingParamsPtr& params, ChaChaRng& rng);

inline RingElement operator+(const RingElement& a, const RingElement& b) {
  return ring_add(a, b);
}
inline RingElement operator-(const RingElement& a, const RingElement& b) {
  return ring_sub(a, b);
}
inline RingElement operator-(const RingElement& a) { return ring_neg(a); }
inline RingElement operator*(const RingElement& a, const RingElement& b) {
  return ring_mul(a, b);
}

// Wire format: u32 N, then per coefficient a u32 byte count followed by that
// many bytes of little-endian two's complement (minimal length).
void write_ring_element(std::vector<std::uint8_t>& out, const RingElement& a);
RingElement read_ring_element(std::span<const std::uint8_t>& in,
                              const RingParamsPtr& params);

// Little-endian helpers shared by the binary formats.
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v);
std::uint32_t get_u32(std::span<const std::uint8_t>& in);
std::uint64_t get_u64(std::span<const std::uint8_t>& in);
void put_bigint(std::vector<std::uint8_t>& out, const mpz_class& v);
mpz_class get_bigint(std::span<const std::uint8_t>& in);

}  // namespace ckksid

#endif  // CKKSID_RING_HPP_
