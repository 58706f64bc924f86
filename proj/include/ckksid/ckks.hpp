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

#ifndef CKKSID_CKKS_HPP_
#define CKKSID_CKKS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <vector>

#include "ckksid/encoding.hpp"
#include "ckksid/random.hpp"
#include "ckksid/ring.hpp"
#include "ckksid/rns.hpp"
#include "ckksid/sampling.hpp"

namespace ckksid {

// Everything the scheme needs besides keys: ring, noise, scale, embedding and
// the key-switching digit base 2^base_log.
class CkksContext {
 public:
  CkksContext(RingParamsPtr ring, NoiseParams noise, double delta, unsigned base_log = 20);
  static std::shared_ptr<const CkksContext> create(RingParamsPtr ring, NoiseParams noise,
                                                   double delta, unsigned base_log = 20);

  const RingParamsPtr& ring() const { return ring_; }
  const NoiseParams& noise() const { return noise_; }
  double delta() const { return delta_; }
  std::size_t n() const { return ring_->n(); }
  std::size_t slot_count() const { return ring_->n() / 2; }
  const EmbeddingBasis& basis() const { return *basis_; }
  const TdgSampler& tdg() const { return tdg_; }
  unsigned base_log() const { return base_log_; }
  // Number of balanced base-2^w digits covering [-P/2, P/2).
  std::size_t digit_count() const { return digit_count_; }
  // 5^r mod 2N.
  std::size_t galois_element(std::size_t rotation) const;
  // Engine for sums of digit_count products of a digit by a Z_P element.
  const RnsConvolver& keyswitch_engine() const { return *ks_engine_; }

 private:
  RingParamsPtr ring_;
  NoiseParams noise_;
  double delta_;
  std::unique_ptr<EmbeddingBasis> basis_;
  TdgSampler tdg_;
  unsigned base_log_;
  std::size_t digit_count_;
  const RnsConvolver* ks_engine_;
};
using CkksContextPtr = std::shared_ptr<const CkksContext>;

struct SecretKey {
  RingElement s;
  RingElement s_squared;  // cached for degree-2 decryption
};

struct PublicKey {
  RingElement b;  // -a s + e0
  RingElement a;
};

// Key-switching key from kappa_g(s) back to s: for digit i,
// b_i = -a_i s + e_i + 2^(w i) kappa_g(s).
struct KeySwitchKey {
  std::size_t galois_elt = 1;
  std::vector<RingElement> b, a;
  // NTT forms under CkksContext::keyswitch_engine.
  std::vector<RnsPoly> b_ntt, a_ntt;

  void precompute(const CkksContext& ctx);
};

class RotationKeySet {
 public:
  bool has(std::size_t rotation) const { return keys_.count(rotation) != 0; }
  const KeySwitchKey& at(std::size_t rotation) const;
  void insert(std::size_t rotation, KeySwitchKey key) { keys_[rotation] = std::move(key); }
  const std::map<std::size_t, KeySwitchKey>& keys() const { return keys_; }

 private:
  std::map<std::size_t, KeySwitchKey> keys_;
};

struct KeyBundle {
  SecretKey sk;
  PublicKey pk;
  RotationKeySet rot;
};

class Ciphertext {
 public:
  Ciphertext() = default;
  Ciphertext(std::vector<RingElement> parts, double scale);

  std::size_t degree() const { return parts_.size() - 1; }
  const std::vector<RingElement>& parts() const { return parts_; }
  const RingElement& operator[](std::size_t i) const { return parts_[i]; }
  double scale() const { return scale_; }
  const RingParamsPtr& params() const { return parts_.front().params(); }
  bool operator==(const Ciphertext& o) const {
    return scale_ == o.scale_ && parts_ == o.parts_;
  }

 private:
  std::vector<RingElement> parts_;
  double scale_ = 1.0;
};

SecretKey make_secret_key(RingElement s);

// Rotation keys for every power of two r <= N/4.
KeyBundle keygen(const CkksContext& ctx, ChaChaRng& rng);
PublicKey make_public_key(const CkksContext& ctx, const SecretKey& sk, ChaChaRng& rng);
KeySwitchKey make_rotation_key(const CkksContext& ctx, const SecretKey& sk,
                               std::size_t rotation, ChaChaRng& rng);

Ciphertext encrypt(const CkksContext& ctx, const Plaintext& pt, const PublicKey& pk,
                   ChaChaRng& rng);
// The trivial encryption (pt, 0).
Ciphertext trivial_encrypt(const Plaintext& pt);
Plaintext decrypt(const Ciphertext& ct, const SecretKey& sk);

Ciphertext hom_add(const Ciphertext& a, const Ciphertext& b);
Ciphertext hom_neg(const Ciphertext& a);
// Tensor product of two degree-1 ciphertexts; the scale is the product.
Ciphertext hom_mult(const Ciphertext& a, const Ciphertext& b);
Ciphertext pt_mult(const Plaintext& pt, const Ciphertext& ct);
// Applies x -> x^(5^r) and switches back to s. Rotation r is decomposed into
// powers of two, each of which needs a key.
Ciphertext rotate(const CkksContext& ctx, const Ciphertext& ct, std::size_t r,
                  const RotationKeySet& keys);
// pt_mult followed by log2(N/2) rotate-and-add stages: every slot holds the
// inner product of the two slot vectors (for real slot vectors).
Ciphertext hom_dot(const CkksContext& ctx, const Plaintext& pt, const Ciphertext& ct,
                   const RotationKeySet& keys);

// Slot index (0-based, natural order) holding orbit position t, i.e. the
// slot evaluated at zeta^(5^t) or its conjugate. Rotation by r shifts orbit
// positions cyclically: slot orbit_slot(t) receives orbit_slot(t + r).
std::vector<std::size_t> rotation_orbit(std::size_t n);
// True where zeta^(5^t) is the conjugate of the natural slot root.
std::vector<bool> rotation_orbit_conjugated(std::size_t n);

// Convenience: encode then encrypt, and decrypt then decode.
Ciphertext encrypt_slots(const CkksContext& ctx, const SlotVector& z, double scale,
                         const PublicKey& pk, ChaChaRng& rng);
SlotVector decrypt_slots(const CkksContext& ctx, const Ciphertext& ct, const SecretKey& sk);

// Worst-case per-slot error bounds.
namespace bounds {
// Quantisation: every coefficient moves by less than 1, each slot sums N of them.
double quantization(std::size_t n, double scale);
// Encryption noise v e0 + e1 + s e2 has coefficients below (2N+1) Gamma.
double encryption_coeff(std::size_t n, std::int64_t gamma);
double encryption(std::size_t n, std::int64_t gamma, double scale);
// Encode plus encrypt: rigorous N/Delta quantisation term.
double fresh(const CkksContext& ctx, double scale);
// Same with the quantisation term 1/Delta.
double fresh_unit_quantization(const CkksContext& ctx, double scale);
// Slot-wise product of (z1 + e1)(z2 + e2) minus z1 z2.
double mult(double z1_max, double e1, double z2_max, double e2);
// Key-switching noise sum_i d_i e_i after one rotation, in slots at scale.
double keyswitch(const CkksContext& ctx, double scale);
// Dot of a fresh plaintext (slots <= zp_max, encoded at pt_scale) with a
// ciphertext carrying slot error ct_err on slots <= zc_max.
double dot(const CkksContext& ctx, double zp_max, double pt_scale, double zc_max,
           double ct_err, double ct_scale);
}  // namespace bounds

// Versioned binary files: "CKID" magic, u32 version, u32 kind, params header
// (u32 N, bigint P, u32 factor count, then bigint prime and u32 exponent per
// factor), then the payload.
enum class ObjectKind : std::uint32_t {
  kSecretKey = 1,
  kPublicKey = 2,
  kRotationKeys = 3,
  kCiphertext = 4,
};

std::vector<std::uint8_t> serialize(const SecretKey& sk);
std::vector<std::uint8_t> serialize(const PublicKey& pk);
std::vector<std::uint8_t> serialize(const RotationKeySet& rk, unsigned base_log);
std::vector<std::uint8_t> serialize(const Ciphertext& ct);

SecretKey deserialize_secret_key(std::span<const std::uint8_t> in, const RingParamsPtr& params);
PublicKey deserialize_public_key(std::span<const std::uint8_t> in, const RingParamsPtr& params);
RotationKeySet deserialize_rotation_keys(std::span<const std::uint8_t> in,
                                         const CkksContext& ctx);
Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> in, const RingParamsPtr& params);

// Reads the params header only.
RingParamsPtr read_params_header(std::span<const std::uint8_t> in);

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

}  // namespace ckksid

#endif  // CKKSID_CKKS_HPP_
