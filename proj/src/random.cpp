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

#include "ckksid/random.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>
#include <vector>

namespace ckksid {

namespace {

void EnsureSodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw std::runtime_error("libsodium initialisation failed");
}

}  // namespace

ChaChaRng::ChaChaRng(std::uint64_t seed, std::string_view label) : seed_(seed) {
  EnsureSodium();
  std::vector<std::uint8_t> material(8 + label.size());
  for (int i = 0; i < 8; ++i) material[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  std::memcpy(material.data() + 8, label.data(), label.size());
  crypto_generichash(key_.data(), key_.size(), material.data(), material.size(),
                     nullptr, 0);
}

void ChaChaRng::refill() {
  static constexpr std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES>
      kNonce{};
  buffer_.fill(0);
  crypto_stream_chacha20_xor_ic(buffer_.data(), buffer_.data(), buffer_.size(),
                                kNonce.data(), block_counter_, key_.data());
  block_counter_ += kBufferBytes / 64;
  pos_ = 0;
}

void ChaChaRng::fill_bytes(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == kBufferBytes) refill();
    const std::size_t take = std::min(out.size() - done, kBufferBytes - pos_);
    std::memcpy(out.data() + done, buffer_.data() + pos_, take);
    pos_ += take;
    done += take;
  }
}

std::uint64_t ChaChaRng::next_u64() {
  if (kBufferBytes - pos_ < 8) pos_ = kBufferBytes;
  if (pos_ == kBufferBytes) refill();
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{buffer_[pos_ + i]} << (8 * i);
  pos_ += 8;
  return v;
}

std::uint32_t ChaChaRng::next_u32() {
  return static_cast<std::uint32_t>(next_u64() >> 32);
}

std::uint64_t ChaChaRng::uniform_below(std::uint64_t bound) {
  // Lemire's nearly-divisionless method.
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double ChaChaRng::uniform_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double ChaChaRng::uniform_real(double lo, double hi) {
  return lo + (hi - lo) * uniform_unit();
}

long double ChaChaRng::uniform_unit_ld() {
  return static_cast<long double>(next_u64()) * 0x1.0p-64L;
}

}  // namespace ckksid
