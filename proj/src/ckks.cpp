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

#include "ckksid/ckks.hpp"

#include <cmath>

#include "ckksid/error.hpp"

namespace ckksid {

namespace {

std::size_t BitLength(const mpz_class& x) {
  return x == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

std::size_t CeilLog2(std::size_t x) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < x) ++r;
  return r;
}

std::size_t MaxBits(std::span<const RingElement> parts) {
  std::size_t bits = 0;
  for (const auto& p : parts) bits = std::max(bits, BitLength(p.inf_norm()));
  return bits;
}

RingElement FromRns(const RnsConvolver& engine, RnsPoly poly, const RingParamsPtr& params) {
  return RingElement::from_coeffs(params, engine.inverse(std::move(poly)));
}

void CheckScale(double a, double b) {
  if (std::fabs(a - b) > 1e-12 * std::max(std::fabs(a), std::fabs(b))) {
    throw ScaleMismatch("ciphertext scales differ");
  }
}

// Balanced base-2^w digits of every coefficient: digits[i][k] in [-2^(w-1), 2^(w-1)).
std::vector<std::vector<std::int64_t>> DecomposeDigits(const RingElement& a, unsigned w,
                                                       std::size_t count) {
  const std::size_t n = a.n();
  std::vector<std::vector<std::int64_t>> digits(count, std::vector<std::int64_t>(n));
  const long base = 1L << w, half = base / 2;
  mpz_class r, d;
  for (std::size_t k = 0; k < n; ++k) {
    r = a[k];
    for (std::size_t i = 0; i < count; ++i) {
      mpz_fdiv_r_2exp(d.get_mpz_t(), r.get_mpz_t(), w);
      long v = d.get_si();
      if (v >= half) v -= base;
      digits[i][k] = v;
      r -= v;
      mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), w);
    }
    if (r != 0) throw Error("digit decomposition did not terminate");
  }
  return digits;
}

// One power-of-two rotation with key switching.
Ciphertext RotateOnce(const CkksContext& ctx, const Ciphertext& ct, const KeySwitchKey& key) {
  const auto& params = ct.params();
  const RingElement c0 = ring_automorphism(ct[0], key.galois_elt);
  const RingElement c1 = ring_automorphism(ct[1], key.galois_elt);
  const RnsConvolver& engine = ctx.keyswitch_engine();
  const auto digits = DecomposeDigits(c1, ctx.base_log(), ctx.digit_count());
  RnsPoly acc0 = engine.zero(), acc1 = engine.zero();
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const RnsPoly d = engine.forward(std::span<const std::int64_t>(digits[i]));
    engine.multiply_accumulate(acc0, d, key.b_ntt[i]);
    engine.multiply_accumulate(acc1, d, key.a_ntt[i]);
  }
  return Ciphertext({c0 + FromRns(engine, std::move(acc0), params),
                     FromRns(engine, std::move(acc1), params)},
                    ct.scale());
}

}  // namespace

CkksContext::CkksContext(RingParamsPtr ring, NoiseParams noise, double delta,
                         unsigned base_log)
    : ring_(std::move(ring)),
      noise_(noise),
      delta_(delta),
      tdg_(noise.sigma, noise.gamma),
      base_log_(base_log) {
  if (ring_->n() < 4) throw ParameterError("CKKS requires N >= 4");
  noise_.validate(ring_->n());
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError("Delta must be positive");
  if (base_log < 2 || base_log > 30) throw ParameterError("key-switching base must be 2^2..2^30");
  basis_ = std::make_unique<EmbeddingBasis>(ring_->n());
  // |c| <= P/2 < 2^bits; one extra digit absorbs the carry of balanced digits.
  digit_count_ = (ring_->modulus_bits() + base_log - 1) / base_log + 1;
  ks_engine_ = &ring_->convolver(base_log + CeilLog2(digit_count_), ring_->modulus_bits());
}

std::shared_ptr<const CkksContext> CkksContext::create(RingParamsPtr ring, NoiseParams noise,
                                                       double delta, unsigned base_log) {
  return std::make_shared<const CkksContext>(std::move(ring), noise, delta, base_log);
}

std::size_t CkksContext::galois_element(std::size_t rotation) const {
  const std::size_t m = 2 * ring_->n();
  std::size_t g = 1, base = 5 % m;
  for (std::size_t r = rotation; r > 0; r >>= 1) {
    if (r & 1) g = g * base % m;
    base = base * base % m;
  }
  return g;
}

void KeySwitchKey::precompute(const CkksContext& ctx) {
  const RnsConvolver& engine = ctx.keyswitch_engine();
  b_ntt.clear();
  a_ntt.clear();
  for (std::size_t i = 0; i < b.size(); ++i) {
    b_ntt.push_back(engine.forward(std::span<const mpz_class>(b[i].coeffs())));
    a_ntt.push_back(engine.forward(std::span<const mpz_class>(a[i].coeffs())));
  }
}

const KeySwitchKey& RotationKeySet::at(std::size_t rotation) const {
  auto it = keys_.find(rotation);
  if (it == keys_.end()) {
    throw KeyError("no rotation key for shift " + std::to_string(rotation));
  }
  return it->second;
}

Ciphertext::Ciphertext(std::vector<RingElement> parts, double scale)
    : parts_(std::move(parts)), scale_(scale) {
  if (parts_.size() < 2 || parts_.size() > 3) throw DepthError("ciphertext degree must be 1 or 2");
  if (!(scale > 0.0)) throw DomainError("ciphertext scale must be positive");
  for (std::size_t i = 1; i < parts_.size(); ++i) {
    if (!(*parts_[i].params() == *parts_[0].params())) {
      throw ParameterMismatch("ciphertext parts use different parameters");
    }
  }
}

SecretKey make_secret_key(RingElement s) {
  RingElement s2 = ring_mul(s, s);
  return {std::move(s), std::move(s2)};
}

PublicKey make_public_key(const CkksContext& ctx, const SecretKey& sk, ChaChaRng& rng) {
  RingElement a = uniform_ring(ctx.ring(), rng);
  RingElement e0 = sample_tdg_poly(ctx.ring(), ctx.tdg(), rng);
  RingElement b = e0 - a * sk.s;
  return {std::move(b), std::move(a)};
}

KeySwitchKey make_rotation_key(const CkksContext& ctx, const SecretKey& sk,
                               std::size_t rotation, ChaChaRng& rng) {
  KeySwitchKey key;
  key.galois_elt = ctx.galois_element(rotation);
  const RingElement ks = ring_automorphism(sk.s, key.galois_elt);
  mpz_class power = 1;
  for (std::size_t i = 0; i < ctx.digit_count(); ++i) {
    RingElement a = uniform_ring(ctx.ring(), rng);
    RingElement e = sample_tdg_poly(ctx.ring(), ctx.tdg(), rng);
    key.b.push_back(e - a * sk.s + ring_scalar_mul(power, ks));
    key.a.push_back(std::move(a));
    power <<= ctx.base_log();
  }
  key.precompute(ctx);
  return key;
}

KeyBundle keygen(const CkksContext& ctx, ChaChaRng& rng) {
  KeyBundle out;
  out.sk = make_secret_key(sample_ternary_secret(ctx.ring(), ctx.noise().h, rng));
  out.pk = make_public_key(ctx, out.sk, rng);
  for (std::size_t r = 1; r <= ctx.n() / 4; r <<= 1) {
    out.rot.insert(r, make_rotation_key(ctx, out.sk, r, rng));
  }
  return out;
}

Ciphertext encrypt(const CkksContext& ctx, const Plaintext& pt, const PublicKey& pk,
                   ChaChaRng& rng) {
  const RingElement v = sample_zo(ctx.ring(), rng);
  const RingElement e1 = sample_tdg_poly(ctx.ring(), ctx.tdg(), rng);
  const RingElement e2 = sample_tdg_poly(ctx.ring(), ctx.tdg(), rng);
  return Ciphertext({v * pk.b + pt.poly + e1, v * pk.a + e2}, pt.scale);
}

Ciphertext trivial_encrypt(const Plaintext& pt) {
  return Ciphertext({pt.poly, RingElement(pt.poly.params())}, pt.scale);
}

Plaintext decrypt(const Ciphertext& ct, const SecretKey& sk) {
  if (ct.degree() > 2) throw DepthError("decryption supports degree 1 and 2");
  RingElement m = ct[0] + ct[1] * sk.s;
  if (ct.degree() == 2) m = m + ct[2] * sk.s_squared;
  return {std::move(m), ct.scale()};
}

Ciphertext hom_add(const Ciphertext& a, const Ciphertext& b) {
  CheckScale(a.scale(), b.scale());
  if (a.degree() != b.degree()) throw DepthError("addition needs equal ciphertext degrees");
  std::vector<RingElement> parts;
  for (std::size_t i = 0; i < a.parts().size(); ++i) parts.push_back(a[i] + b[i]);
  return Ciphertext(std::move(parts), a.scale());
}

Ciphertext hom_neg(const Ciphertext& a) {
  std::vector<RingElement> parts;
  for (const auto& p : a.parts()) parts.push_back(-p);
  return Ciphertext(std::move(parts), a.scale());
}

Ciphertext hom_mult(const Ciphertext& a, const Ciphertext& b) {
  if (a.degree() != 1 || b.degree() != 1) throw DepthError("Mult needs degree-1 inputs");
  if (!(*a.params() == *b.params())) throw ParameterMismatch("ciphertexts use different rings");
  const auto& params = a.params();
  // The middle part sums two products, hence one extra bit.
  const RnsConvolver& engine =
      params->convolver(MaxBits(a.parts()) + 2, MaxBits(b.parts()) + 1);
  const RnsPoly a0 = engine.forward(std::span<const mpz_class>(a[0].coeffs()));
  const RnsPoly a1 = engine.forward(std::span<const mpz_class>(a[1].coeffs()));
  const RnsPoly b0 = engine.forward(std::span<const mpz_class>(b[0].coeffs()));
  const RnsPoly b1 = engine.forward(std::span<const mpz_class>(b[1].coeffs()));
  RnsPoly mid = engine.multiply(a0, b1);
  engine.multiply_accumulate(mid, a1, b0);
  return Ciphertext({FromRns(engine, engine.multiply(a0, b0), params),
                     FromRns(engine, std::move(mid), params),
                     FromRns(engine, engine.multiply(a1, b1), params)},
                    a.scale() * b.scale());
}

Ciphertext pt_mult(const Plaintext& pt, const Ciphertext& ct) {
  if (ct.degree() != 1) throw DepthError("plaintext product needs a degree-1 ciphertext");
  const auto& params = ct.params();
  const RnsConvolver& engine =
      params->convolver(BitLength(pt.poly.inf_norm()) + 1, MaxBits(ct.parts()) + 1);
  const RnsPoly p = engine.forward(std::span<const mpz_class>(pt.poly.coeffs()));
  std::vector<RingElement> parts;
  for (const auto& c : ct.parts()) {
    parts.push_back(FromRns(engine,
                            engine.multiply(p, engine.forward(std::span<const mpz_class>(c.coeffs()))),
                            params));
  }
  return Ciphertext(std::move(parts), pt.scale * ct.scale());
}

Ciphertext rotate(const CkksContext& ctx, const Ciphertext& ct, std::size_t r,
                  const RotationKeySet& keys) {
  if (ct.degree() != 1) throw DepthError("rotation needs a degree-1 ciphertext");
  r %= ctx.slot_count();
  Ciphertext out = ct;
  for (std::size_t bit = 1; r != 0; bit <<= 1) {
    if (r & bit) {
      out = RotateOnce(ctx, out, keys.at(bit));
      r &= ~bit;
    }
  }
  return out;
}

Ciphertext hom_dot(const CkksContext& ctx, const Plaintext& pt, const Ciphertext& ct,
                   const RotationKeySet& keys) {
  Ciphertext acc = pt_mult(pt, ct);
  for (std::size_t r = 1; r < ctx.slot_count(); r <<= 1) {
    acc = hom_add(acc, RotateOnce(ctx, acc, keys.at(r)));
  }
  return acc;
}

std::vector<std::size_t> rotation_orbit(std::size_t n) {
  std::vector<std::size_t> out(n / 2);
  const std::size_t m = 2 * n;
  std::size_t e = 1;
  for (std::size_t t = 0; t < n / 2; ++t) {
    // Natural slot l (0-based) sits at zeta^(2l+1); zeta^(2N-e) is its conjugate.
    out[t] = e < n ? (e - 1) / 2 : (m - e - 1) / 2;
    e = e * 5 % m;
  }
  return out;
}

std::vector<bool> rotation_orbit_conjugated(std::size_t n) {
  std::vector<bool> out(n / 2);
  const std::size_t m = 2 * n;
  std::size_t e = 1;
  for (std::size_t t = 0; t < n / 2; ++t) {
    out[t] = e >= n;
    e = e * 5 % m;
  }
  return out;
}

Ciphertext encrypt_slots(const CkksContext& ctx, const SlotVector& z, double scale,
                         const PublicKey& pk, ChaChaRng& rng) {
  return encrypt(ctx, encode(z, scale, ctx.basis(), ctx.ring(), rng), pk, rng);
}

SlotVector decrypt_slots(const CkksContext& ctx, const Ciphertext& ct, const SecretKey& sk) {
  return decode(decrypt(ct, sk), ctx.basis());
}

namespace bounds {

double quantization(std::size_t n, double scale) { return static_cast<double>(n) / scale; }

double encryption_coeff(std::size_t n, std::int64_t gamma) {
  return (2.0 * static_cast<double>(n) + 1.0) * static_cast<double>(gamma);
}

double encryption(std::size_t n, std::int64_t gamma, double scale) {
  return static_cast<double>(n) * encryption_coeff(n, gamma) / scale;
}

double fresh(const CkksContext& ctx, double scale) {
  return quantization(ctx.n(), scale) + encryption(ctx.n(), ctx.noise().gamma, scale);
}

double fresh_unit_quantization(const CkksContext& ctx, double scale) {
  return 1.0 / scale + encryption(ctx.n(), ctx.noise().gamma, scale);
}

double mult(double z1_max, double e1, double z2_max, double e2) {
  return z1_max * e2 + z2_max * e1 + e1 * e2;
}

double keyswitch(const CkksContext& ctx, double scale) {
  const double n = static_cast<double>(ctx.n());
  const double coeff = static_cast<double>(ctx.digit_count()) * n *
                       std::ldexp(1.0, static_cast<int>(ctx.base_log()) - 1) *
                       static_cast<double>(ctx.noise().gamma);
  return n * coeff / scale;
}

double dot(const CkksContext& ctx, double zp_max, double pt_scale, double zc_max,
           double ct_err, double ct_scale) {
  const double half = static_cast<double>(ctx.slot_count());
  const double per_slot = mult(zp_max, quantization(ctx.n(), pt_scale), zc_max, ct_err);
  return half * (per_slot + keyswitch(ctx, pt_scale * ct_scale));
}

}  // namespace bounds

}  // namespace ckksid
