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

#include "ckksid/ring.hpp"

#include <algorithm>

#include "ckksid/error.hpp"

namespace ckksid {

namespace {

void CheckSameParams(const RingElement& a, const RingElement& b) {
  if (!a.params() || !b.params()) throw ParameterMismatch("uninitialised ring element");
  if (a.params() != b.params() && !(*a.params() == *b.params())) {
    throw ParameterMismatch("ring elements use different parameters");
  }
}

std::size_t BitLength(const mpz_class& x) {
  return x == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

}  // namespace

RingParams::RingParams(std::size_t n, mpz_class modulus,
                       std::vector<PrimePower> factorization)
    : n_(n), modulus_(std::move(modulus)), factorization_(std::move(factorization)) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw ParameterError("ring dimension must be a power of two >= 2");
  }
  if (n > kMaxNttDegree) throw ParameterError("ring dimension above 2^16 unsupported");
  if (modulus_ < 2) throw ParameterError("modulus must be >= 2");
  while ((std::size_t{1} << log_n_) < n_) ++log_n_;
  modulus_bits_ = BitLength(modulus_);
  if (!factorization_.empty()) {
    mpz_class prod = 1;
    for (const auto& f : factorization_) {
      mpz_class pw;
      mpz_pow_ui(pw.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
      prod *= pw;
    }
    if (prod != modulus_) throw ParameterError("factorization does not multiply to P");
  }
}

std::shared_ptr<const RingParams> RingParams::create(
    std::size_t n, mpz_class modulus, std::vector<PrimePower> factorization) {
  return std::make_shared<const RingParams>(n, std::move(modulus),
                                            std::move(factorization));
}

std::shared_ptr<const RingParams> RingParams::from_factors(
    std::size_t n, std::vector<PrimePower> factorization) {
  mpz_class prod = 1;
  for (const auto& f : factorization) {
    if (f.prime < 2 || f.exponent == 0) throw ParameterError("invalid prime power");
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
    prod *= pw;
  }
  return create(n, prod, std::move(factorization));
}

void RingParams::reduce(mpz_class& x) const {
  mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), modulus_.get_mpz_t());
  // x in [0, P); map to [-P/2, P/2).
  mpz_class twice = x * 2;
  if (twice >= modulus_) x -= modulus_;
}

const RnsConvolver& RingParams::convolver(std::size_t a_bits, std::size_t b_bits) const {
  const std::size_t bound = a_bits + b_bits + static_cast<std::size_t>(log_n_) + 1;
  std::lock_guard<std::mutex> lock(cache_mu_);
  auto it = convolvers_.lower_bound(bound);
  if (it != convolvers_.end() && it->first <= bound + 64) return *it->second;
  auto engine = std::make_unique<RnsConvolver>(n_, bound);
  const RnsConvolver& ref = *engine;
  convolvers_.emplace(bound, std::move(engine));
  return ref;
}

RingElement::RingElement(RingParamsPtr params)
    : params_(std::move(params)), coeffs_(params_->n()) {}

RingElement RingElement::from_coeffs(RingParamsPtr params, std::vector<mpz_class> coeffs) {
  if (coeffs.size() != params->n()) {
    throw ParameterMismatch("coefficient vector length differs from N");
  }
  RingElement out;
  out.params_ = std::move(params);
  out.coeffs_ = std::move(coeffs);
  for (auto& c : out.coeffs_) out.params_->reduce(c);
  return out;
}

RingElement RingElement::from_int64(RingParamsPtr params,
                                    std::span<const std::int64_t> coeffs) {
  std::vector<mpz_class> big(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    mpz_set_si(big[i].get_mpz_t(), coeffs[i]);
  }
  return from_coeffs(std::move(params), std::move(big));
}

RingElement RingElement::monomial(RingParamsPtr params, std::size_t k, long c) {
  if (k >= params->n()) throw ParameterError("monomial degree out of range");
  std::vector<mpz_class> v(params->n());
  v[k] = c;
  return from_coeffs(std::move(params), std::move(v));
}

bool RingElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const mpz_class& c) { return c == 0; });
}

mpz_class RingElement::inf_norm() const {
  mpz_class best = 0;
  for (const auto& c : coeffs_) {
    if (mpz_cmpabs(c.get_mpz_t(), best.get_mpz_t()) > 0) best = abs(c);
  }
  return best;
}

bool RingElement::operator==(const RingElement& o) const {
  if (coeffs_.size() != o.coeffs_.size()) return false;
  if (params_ && o.params_ && !(*params_ == *o.params_)) return false;
  return coeffs_ == o.coeffs_;
}

RingElement ring_add(const RingElement& a, const RingElement& b) {
  CheckSameParams(a, b);
  std::vector<mpz_class> out(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) out[i] = a[i] + b[i];
  return RingElement::from_coeffs(a.params(), std::move(out));
}

RingElement ring_sub(const RingElement& a, const RingElement& b) {
  CheckSameParams(a, b);
  std::vector<mpz_class> out(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) out[i] = a[i] - b[i];
  return RingElement::from_coeffs(a.params(), std::move(out));
}

RingElement ring_neg(const RingElement& a) {
  std::vector<mpz_class> out(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) out[i] = -a[i];
  return RingElement::from_coeffs(a.params(), std::move(out));
}

RingElement ring_scalar_mul(const mpz_class& c, const RingElement& a) {
  std::vector<mpz_class> out(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) out[i] = c * a[i];
  return RingElement::from_coeffs(a.params(), std::move(out));
}

RingElement ring_mul(const RingElement& a, const RingElement& b) {
  CheckSameParams(a, b);
  const auto& params = *a.params();
  const RnsConvolver& engine = params.convolver(BitLength(a.inf_norm()) + 1,
                                                BitLength(b.inf_norm()) + 1);
  return RingElement::from_coeffs(a.params(), engine.convolve(a.coeffs(), b.coeffs()));
}

RingElement ring_mul_schoolbook(const RingElement& a, const RingElement& b) {
  CheckSameParams(a, b);
  const std::size_t n = a.n();
  std::vector<mpz_class> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t k = i + j;
      if (k < n) {
        out[k] += a[i] * b[j];
      } else {
        out[k - n] -= a[i] * b[j];
      }
    }
  }
  return RingElement::from_coeffs(a.params(), std::move(out));
}

RingElement ring_automorphism(const RingElement& a, std::size_t galois_elt) {
  const std::size_t n = a.n();
  const std::size_t two_n = 2 * n;
  if (galois_elt % 2 == 0) throw ParameterError("Galois element must be odd");
  std::vector<mpz_class> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t e = (i * (galois_elt % two_n)) % two_n;
    if (e < n) {
      out[e] = a[i];
    } else {
      out[e - n] = -a[i];
    }
  }
  return RingElement::from_coeffs(a.params(), std::move(out));
}

RingElement uniform_ring(const RingParamsPtr& params, ChaChaRng& rng) {
  const mpz_class& modulus = params->modulus();
  const std::size_t bits = params->modulus_bits();
  const std::size_t bytes = (bits + 7) / 8;
  const unsigned top_bits = static_cast<unsigned>(bits - 8 * (bytes - 1));
  const auto top_mask = static_cast<std::uint8_t>((1u << top_bits) - 1);
  std::vector<std::uint8_t> buf(bytes);
  std::vector<mpz_class> out(params->n());
  for (auto& c : out) {
    // Rejection sampling on a bits-wide draw.
    do {
      rng.fill_bytes(buf);
      buf[bytes - 1] &= top_mask;
      mpz_import(c.get_mpz_t(), bytes, -1, 1, 0, 0, buf.data());
    } while (c >= modulus);
  }
  return RingElement::from_coeffs(params, std::move(out));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t>& in) {
  if (in.size() < 4) throw FormatError("truncated input (u32)");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{in[i]} << (8 * i);
  in = in.subspan(4);
  return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t>& in) {
  if (in.size() < 8) throw FormatError("truncated input (u64)");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{in[i]} << (8 * i);
  in = in.subspan(8);
  return v;
}

void put_bigint(std::vector<std::uint8_t>& out, const mpz_class& v) {
  // Minimal two's complement: magnitude bytes plus a sign byte if needed.
  std::size_t len = 1;
  if (v != 0) {
    // Smallest L with -2^(8L-1) <= v < 2^(8L-1).
    const mpz_class probe = v < 0 ? mpz_class(-v - 1) : v;
    const std::size_t bits = probe == 0 ? 0 : mpz_sizeinbase(probe.get_mpz_t(), 2);
    len = bits / 8 + 1;
  }
  mpz_class twos = v;
  if (v < 0) {
    mpz_class base;
    mpz_ui_pow_ui(base.get_mpz_t(), 2, 8 * len);
    twos += base;
  }
  std::vector<std::uint8_t> bytes(len, 0);
  std::size_t written = 0;
  mpz_export(bytes.data(), &written, -1, 1, 0, 0, twos.get_mpz_t());
  put_u32(out, static_cast<std::uint32_t>(len));
  out.insert(out.end(), bytes.begin(), bytes.end());
}

mpz_class get_bigint(std::span<const std::uint8_t>& in) {
  const std::uint32_t len = get_u32(in);
  if (len == 0 || in.size() < len) throw FormatError("truncated integer payload");
  mpz_class v;
  mpz_import(v.get_mpz_t(), len, -1, 1, 0, 0, in.data());
  if (in[len - 1] & 0x80) {
    mpz_class base;
    mpz_ui_pow_ui(base.get_mpz_t(), 2, 8 * std::size_t{len});
    v -= base;
  }
  in = in.subspan(len);
  return v;
}

void write_ring_element(std::vector<std::uint8_t>& out, const RingElement& a) {
  put_u32(out, static_cast<std::uint32_t>(a.n()));
  for (const auto& c : a.coeffs()) put_bigint(out, c);
}

RingElement read_ring_element(std::span<const std::uint8_t>& in,
                              const RingParamsPtr& params) {
  const std::uint32_t n = get_u32(in);
  if (n != params->n()) throw FormatError("ring element length differs from N");
  std::vector<mpz_class> coeffs(n);
  const mpz_class& p = params->modulus();
  for (auto& c : coeffs) {
    c = get_bigint(in);
    // Must already be canonical: -P/2 <= c < P/2.
    if (2 * c >= p || 2 * c < -p) throw FormatError("coefficient outside Z_P");
  }
  return RingElement::from_coeffs(params, std::move(coeffs));
}

}  // namespace ckksid
