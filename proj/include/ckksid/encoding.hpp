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

#ifndef CKKSID_ENCODING_HPP_
#define CKKSID_ENCODING_HPP_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ckksid/random.hpp"
#include "ckksid/ring.hpp"

namespace ckksid {

using Complex = std::complex<double>;

// Message slots z_1..z_{N/2}. Slot l (1-based) is the evaluation of the
// plaintext polynomial at zeta^(2l-1).
class SlotVector {
 public:
  SlotVector() = default;
  explicit SlotVector(std::vector<Complex> values) : values_(std::move(values)) {}
  static SlotVector zeros(std::size_t count) {
    return SlotVector(std::vector<Complex>(count));
  }

  std::size_t size() const { return values_.size(); }
  Complex& operator[](std::size_t i) { return values_[i]; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Complex>& values() const { return values_; }
  std::vector<Complex>& values() { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

 private:
  std::vector<Complex> values_;
};

// A ring element together with the scale its slots were multiplied by.
struct Plaintext {
  RingElement poly;
  double scale = 1.0;
};

// The canonical embedding for R = Z[x]/(x^N + 1) with zeta = exp(i pi / N).
// Row j of the embedding matrix evaluates at zeta^(2j+1), j = 0..N-1.
class EmbeddingBasis {
 public:
  // Direct O(N^2) evaluation is used up to this size, FFT above.
  static constexpr std::size_t kDirectThreshold = 64;

  explicit EmbeddingBasis(std::size_t n);
  ~EmbeddingBasis();
  EmbeddingBasis(const EmbeddingBasis&) = delete;
  EmbeddingBasis& operator=(const EmbeddingBasis&) = delete;

  std::size_t n() const { return n_; }
  std::size_t slot_count() const { return n_ / 2; }

  // zeta^k for any integer k.
  Complex zeta_power(long long k) const;
  // Entry (row, col) of the embedding matrix: zeta^((2 row + 1) col).
  Complex matrix_entry(std::size_t row, std::size_t col) const;

  // All N evaluations at the odd powers of zeta.
  std::vector<Complex> evaluate(std::span<const double> coeffs) const;
  std::vector<Complex> evaluate_direct(std::span<const double> coeffs) const;
  std::vector<Complex> evaluate_fast(std::span<const double> coeffs) const;

  // Inverse of the embedding matrix applied to N values. For conjugate-
  // symmetric input the result is real up to rounding.
  std::vector<Complex> interpolate(std::span<const Complex> values) const;
  std::vector<Complex> interpolate_direct(std::span<const Complex> values) const;
  std::vector<Complex> interpolate_fast(std::span<const Complex> values) const;

 private:
  struct FftPlans;

  std::size_t n_;
  std::vector<Complex> zeta_pows_;  // zeta^k for k in [0, 2N)
  std::unique_ptr<FftPlans> plans_;
};

// Conjugate-symmetric expansion: full[j] = z[j] for j < N/2 and
// full[N-1-j] = conj(z[j]).
std::vector<Complex> expand_conjugate(const SlotVector& z);

// Probabilistic rounding: floor(x) with probability 1 + floor(x) - x,
// otherwise floor(x) + 1. Throws DomainError on non-finite input.
double quantize_one(double x, ChaChaRng& rng);
std::vector<std::int64_t> quantize(std::span<const double> x, ChaChaRng& rng);

// Delta * CRT^{-1} * expand(z), before rounding. Returns the real parts; the
// largest imaginary part relative to the largest real part is written to
// *imag_ratio when requested.
std::vector<double> encode_core(const SlotVector& z, double scale,
                                const EmbeddingBasis& basis,
                                double* imag_ratio = nullptr);

Plaintext encode(const SlotVector& z, double scale, const EmbeddingBasis& basis,
                 const RingParamsPtr& params, ChaChaRng& rng);

SlotVector decode(const Plaintext& pt, const EmbeddingBasis& basis);

enum class PadMode { kZero, kBroadcast };

// Places real values into N/2 complex slots.
SlotVector embed_real(std::span<const double> v, PadMode mode, std::size_t slot_count);

// Coefficient x / scale as a double without overflowing for large x.
double scaled_to_double(const mpz_class& x, double scale);

}  // namespace ckksid

#endif  // CKKSID_ENCODING_HPP_
