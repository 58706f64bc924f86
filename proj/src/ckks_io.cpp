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

#include <bit>
#include <cstring>
#include <fstream>

#include "ckksid/ckks.hpp"
#include "ckksid/error.hpp"

namespace ckksid {

namespace {

constexpr std::uint8_t kMagic[4] = {'C', 'K', 'I', 'D'};
constexpr std::uint32_t kVersion = 1;

void PutHeader(std::vector<std::uint8_t>& out, ObjectKind kind, const RingParams& params) {
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(kind));
  put_u32(out, static_cast<std::uint32_t>(params.n()));
  put_bigint(out, params.modulus());
  put_u32(out, static_cast<std::uint32_t>(params.factorization().size()));
  for (const auto& f : params.factorization()) {
    put_bigint(out, f.prime);
    put_u32(out, f.exponent);
  }
}

// Consumes the header and returns the parameters it describes.
RingParamsPtr GetHeader(std::span<const std::uint8_t>& in, ObjectKind expected) {
  if (in.size() < 4 || std::memcmp(in.data(), kMagic, 4) != 0) {
    throw FormatError("bad magic bytes");
  }
  in = in.subspan(4);
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) throw FormatError("unsupported format version " + std::to_string(version));
  const std::uint32_t kind = get_u32(in);
  if (kind != static_cast<std::uint32_t>(expected)) throw FormatError("unexpected object kind");
  const std::uint32_t n = get_u32(in);
  mpz_class p = get_bigint(in);
  const std::uint32_t nf = get_u32(in);
  if (nf > 64) throw FormatError("implausible factor count");
  std::vector<PrimePower> factors;
  for (std::uint32_t i = 0; i < nf; ++i) {
    mpz_class prime = get_bigint(in);
    const std::uint32_t e = get_u32(in);
    factors.push_back({std::move(prime), e});
  }
  try {
    return RingParams::create(n, std::move(p), std::move(factors));
  } catch (const ParameterError& e) {
    throw FormatError(std::string("invalid parameters in header: ") + e.what());
  }
}

RingParamsPtr CheckHeader(std::span<const std::uint8_t>& in, ObjectKind kind,
                          const RingParamsPtr& params) {
  const RingParamsPtr found = GetHeader(in, kind);
  if (!(*found == *params)) throw ParameterMismatch("file was written for different parameters");
  return found;
}

void ExpectEnd(std::span<const std::uint8_t> in) {
  if (!in.empty()) throw FormatError("trailing bytes after payload");
}

}  // namespace

std::vector<std::uint8_t> serialize(const SecretKey& sk) {
  std::vector<std::uint8_t> out;
  PutHeader(out, ObjectKind::kSecretKey, *sk.s.params());
  write_ring_element(out, sk.s);
  return out;
}

std::vector<std::uint8_t> serialize(const PublicKey& pk) {
  std::vector<std::uint8_t> out;
  PutHeader(out, ObjectKind::kPublicKey, *pk.b.params());
  write_ring_element(out, pk.b);
  write_ring_element(out, pk.a);
  return out;
}

std::vector<std::uint8_t> serialize(const RotationKeySet& rk, unsigned base_log) {
  if (rk.keys().empty()) throw KeyError("empty rotation key set");
  std::vector<std::uint8_t> out;
  PutHeader(out, ObjectKind::kRotationKeys, *rk.keys().begin()->second.a.front().params());
  put_u32(out, base_log);
  put_u32(out, static_cast<std::uint32_t>(rk.keys().size()));
  for (const auto& [r, key] : rk.keys()) {
    put_u32(out, static_cast<std::uint32_t>(r));
    put_u32(out, static_cast<std::uint32_t>(key.galois_elt));
    put_u32(out, static_cast<std::uint32_t>(key.b.size()));
    for (std::size_t i = 0; i < key.b.size(); ++i) {
      write_ring_element(out, key.b[i]);
      write_ring_element(out, key.a[i]);
    }
  }
  return out;
}

std::vector<std::uint8_t> serialize(const Ciphertext& ct) {
  std::vector<std::uint8_t> out;
  PutHeader(out, ObjectKind::kCiphertext, *ct.params());
  put_u64(out, std::bit_cast<std::uint64_t>(ct.scale()));
  put_u32(out, static_cast<std::uint32_t>(ct.parts().size()));
  for (const auto& p : ct.parts()) write_ring_element(out, p);
  return out;
}

SecretKey deserialize_secret_key(std::span<const std::uint8_t> in, const RingParamsPtr& params) {
  CheckHeader(in, ObjectKind::kSecretKey, params);
  RingElement s = read_ring_element(in, params);
  ExpectEnd(in);
  return make_secret_key(std::move(s));
}

PublicKey deserialize_public_key(std::span<const std::uint8_t> in, const RingParamsPtr& params) {
  CheckHeader(in, ObjectKind::kPublicKey, params);
  RingElement b = read_ring_element(in, params);
  RingElement a = read_ring_element(in, params);
  ExpectEnd(in);
  return {std::move(b), std::move(a)};
}

RotationKeySet deserialize_rotation_keys(std::span<const std::uint8_t> in,
                                         const CkksContext& ctx) {
  CheckHeader(in, ObjectKind::kRotationKeys, ctx.ring());
  const std::uint32_t base_log = get_u32(in);
  if (base_log != ctx.base_log()) throw ParameterMismatch("key-switching base differs");
  const std::uint32_t count = get_u32(in);
  RotationKeySet out;
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t r = get_u32(in);
    KeySwitchKey key;
    key.galois_elt = get_u32(in);
    if (key.galois_elt != ctx.galois_element(r)) throw FormatError("Galois element mismatch");
    const std::uint32_t digits = get_u32(in);
    if (digits != ctx.digit_count()) throw FormatError("digit count mismatch");
    for (std::uint32_t i = 0; i < digits; ++i) {
      key.b.push_back(read_ring_element(in, ctx.ring()));
      key.a.push_back(read_ring_element(in, ctx.ring()));
    }
    key.precompute(ctx);
    out.insert(r, std::move(key));
  }
  ExpectEnd(in);
  return out;
}

Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> in, const RingParamsPtr& params) {
  CheckHeader(in, ObjectKind::kCiphertext, params);
  const double scale = std::bit_cast<double>(get_u64(in));
  const std::uint32_t count = get_u32(in);
  if (count < 2 || count > 3) throw FormatError("ciphertext must have 2 or 3 parts");
  std::vector<RingElement> parts;
  for (std::uint32_t i = 0; i < count; ++i) parts.push_back(read_ring_element(in, params));
  ExpectEnd(in);
  return Ciphertext(std::move(parts), scale);
}

RingParamsPtr read_params_header(std::span<const std::uint8_t> in) {
  if (in.size() < 12) throw FormatError("truncated header");
  std::span<const std::uint8_t> kind_bytes = in.subspan(8);
  const auto kind = static_cast<ObjectKind>(get_u32(kind_bytes));
  return GetHeader(in, kind);
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("write failed: " + path.string());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace ckksid
