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

#ifndef CKKSID_RANDOM_HPP_
#define CKKSID_RANDOM_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace ckksid {

// Seedable ChaCha20 keystream generator. The 256-bit key is BLAKE2b(seed, label),
// so identical (seed, label) pairs give identical streams on every platform.
//
// Satisfies UniformRandomBitGenerator, but the bounded helpers below must be
// used wherever reproducibility matters: the std distributions are not
// specified bit-for-bit.
class ChaChaRng {
 public:
  using result_type = std::uint64_t;

  explicit ChaChaRng(std::uint64_t seed, std::string_view label = "");

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  std::uint32_t next_u32();
  void fill_bytes(std::span<std::uint8_t> out);

  // Uniform over [0, bound). bound must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound);
  // Uniform double in [0, 1) with 53 random bits.
  double uniform_unit();
  // Uniform double in [lo, hi).
  double uniform_real(double lo, double hi);
  // Uniform long double in [0, 1) with 64 random bits.
  long double uniform_unit_ld();

  std::uint64_t seed() const { return seed_; }

 private:
  void refill();

  static constexpr std::size_t kBufferBytes = 1024;

  std::uint64_t seed_;
  std::array<std::uint8_t, 32> key_{};
  std::array<std::uint8_t, kBufferBytes> buffer_{};
  std::size_t pos_ = kBufferBytes;
  std::uint64_t block_counter_ = 0;
};

}  // namespace ckksid

#endif  // CKKSID_RANDOM_HPP_
