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

#include "ckksid/encoding.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "ckksid/error.hpp"

namespace ckksid {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  Complex* as_complex() { return reinterpret_cast<Complex*>(data); }

  fftw_complex* data;
};

}  // namespace

struct EmbeddingBasis::FftPlans {
  fftw_plan backward = nullptr;  // sum_k x_k e^{+2 pi i jk / N}
  fftw_plan forward = nullptr;   // sum_k x_k e^{-2 pi i jk / N}

  ~FftPlans() {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    if (backward) fftw_destroy_plan(backward);
    if (forward) fftw_destroy_plan(forward);
  }
};

EmbeddingBasis::EmbeddingBasis(std::size_t n) : n_(n) {
  if (n < 4 || (n & (n - 1)) != 0) {
    throw ParameterError("embedding dimension must be a power of two >= 4");
  }
  zeta_pows_.resize(2 * n);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const double angle = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    zeta_pows_[k] = {std::cos(angle), std::sin(angle)};
  }
  plans_ = std::make_unique<FftPlans>();
  FftwBuffer in(n), out(n);
  std::lock_guard<std::mutex> lock(PlannerMutex());
  const int size = static_cast<int>(n);
  plans_->backward = fftw_plan_dft_1d(size, in.data, out.data, FFTW_BACKWARD, FFTW_ESTIMATE);
  plans_->forward = fftw_plan_dft_1d(size, in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
}

EmbeddingBasis::~EmbeddingBasis() = default;

Complex EmbeddingBasis::zeta_power(long long k) const {
  const long long m = static_cast<long long>(2 * n_);
  long long r = k % m;
  if (r < 0) r += m;
  return zeta_pows_[static_cast<std::size_t>(r)];
}

Complex EmbeddingBasis::matrix_entry(std::size_t row, std::size_t col) const {
  return zeta_power(static_cast<long long>(((2 * row + 1) * col) % (2 * n_)));
}

std::vector<Complex> EmbeddingBasis::evaluate(std::span<const double> coeffs) const {
  return n_ <= kDirectThreshold ? evaluate_direct(coeffs) : evaluate_fast(coeffs);
}

std::vector<Complex> EmbeddingBasis::interpolate(std::span<const Complex> values) const {
  return n_ <= kDirectThreshold ? interpolate_direct(values) : interpolate_fast(values);
}

std::vector<Complex> EmbeddingBasis::evaluate_direct(std::span<const double> coeffs) const {
  if (coeffs.size() != n_) throw ParameterMismatch("evaluate: length differs from N");
  std::vector<Complex> out(n_);
  for (std::size_t row = 0; row < n_; ++row) {
    Complex acc = 0;
    for (std::size_t col = 0; col < n_; ++col) acc += coeffs[col] * matrix_entry(row, col);
    out[row] = acc;
  }
  return out;
}

std::vector<Complex> EmbeddingBasis::evaluate_fast(std::span<const double> coeffs) const {
  if (coeffs.size() != n_) throw ParameterMismatch("evaluate: length differs from N");
  // m(zeta^(2j+1)) = sum_k (m_k zeta^k) omega^(jk), omega = zeta^2.
  FftwBuffer in(n_), out(n_);
  Complex* x = in.as_complex();
  for (std::size_t k = 0; k < n_; ++k) x[k] = coeffs[k] * zeta_pows_[k];
  fftw_execute_dft(plans_->backward, in.data, out.data);
  const Complex* y = out.as_complex();
  return {y, y + n_};
}

std::vector<Complex> EmbeddingBasis::interpolate_direct(std::span<const Complex> values) const {
  if (values.size() != n_) throw ParameterMismatch("interpolate: length differs from N");
  // The embedding matrix V satisfies V^H V = N I, so V^{-1} = V^H / N.
  std::vector<Complex> out(n_);
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t col = 0; col < n_; ++col) {
    Complex acc = 0;
    for (std::size_t row = 0; row < n_; ++row) {
      acc += values[row] * std::conj(matrix_entry(row, col));
    }
    out[col] = acc * inv_n;
  }
  return out;
}

std::vector<Complex> EmbeddingBasis::interpolate_fast(std::span<const Complex> values) const {
  if (values.size() != n_) throw ParameterMismatch("interpolate: length differs from N");
  FftwBuffer in(n_), out(n_);
  std::copy(values.begin(), values.end(), in.as_complex());
  fftw_execute_dft(plans_->forward, in.data, out.data);
  const Complex* y = out.as_complex();
  std::vector<Complex> coeffs(n_);
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    coeffs[k] = y[k] * std::conj(zeta_pows_[k]) * inv_n;
  }
  return coeffs;
}

std::vector<Complex> expand_conjugate(const SlotVector& z) {
  const std::size_t half = z.size();
  std::vector<Complex> full(2 * half);
  for (std::size_t j = 0; j < half; ++j) {
    full[j] = z[j];
    full[2 * half - 1 - j] = std::conj(z[j]);
  }
  return full;
}

double quantize_one(double x, ChaChaRng& rng) {
  if (!std::isfinite(x)) throw DomainError("quantize: non-finite input");
  const double lo = std::floor(x);
  const double frac = x - lo;
  if (frac == 0.0) return lo;
  return rng.uniform_unit() < frac ? lo + 1.0 : lo;
}

std::vector<std::int64_t> quantize(std::span<const double> x, ChaChaRng& rng) {
  std::vector<std::int64_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double q = quantize_one(x[i], rng);
    if (std::fabs(q) >= 0x1.0p62) throw OverflowError("quantize: value exceeds int64 range");
    out[i] = static_cast<std::int64_t>(q);
  }
  return out;
}

std::vector<double> encode_core(const SlotVector& z, double scale,
                                const EmbeddingBasis& basis, double* imag_ratio) {
  if (z.size() != basis.slot_count()) {
    throw CapacityError("slot vector length must equal N/2");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("scale must be positive");
  const std::vector<Complex> coeffs = basis.interpolate(expand_conjugate(z));
  std::vector<double> real(coeffs.size());
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    real[k] = coeffs[k].real() * scale;
    max_re = std::max(max_re, std::fabs(coeffs[k].real()));
    max_im = std::max(max_im, std::fabs(coeffs[k].imag()));
  }
  if (imag_ratio != nullptr) *imag_ratio = max_re > 0.0 ? max_im / max_re : max_im;
  return real;
}

Plaintext encode(const SlotVector& z, double scale, const EmbeddingBasis& basis,
                 const RingParamsPtr& params, ChaChaRng& rng) {
  if (params->n() != basis.n()) throw ParameterMismatch("basis and ring disagree on N");
  const std::vector<double> real = encode_core(z, scale, basis);
  const mpz_class& p = params->modulus();
  std::vector<mpz_class> coeffs(real.size());
  for (std::size_t k = 0; k < real.size(); ++k) {
    mpz_set_d(coeffs[k].get_mpz_t(), quantize_one(real[k], rng));
    // Must fit the canonical range [-P/2, P/2).
    const mpz_class twice = 2 * coeffs[k];
    if (twice >= p || twice < -p) {
      throw OverflowError("encoded coefficient does not fit in Z_P");
    }
  }
  return {RingElement::from_coeffs(params, std::move(coeffs)), scale};
}

double scaled_to_double(const mpz_class& x, double scale) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  int scale_exp = 0;
  const double scale_mant = std::frexp(scale, &scale_exp);
  return std::ldexp(mant / scale_mant, static_cast<int>(exp) - scale_exp);
}

SlotVector decode(const Plaintext& pt, const EmbeddingBasis& basis) {
  if (!(pt.scale > 0.0)) throw DomainError("plaintext scale must be positive");
  const auto& poly = pt.poly;
  if (poly.n() != basis.n()) throw ParameterMismatch("basis and ring disagree on N");
  std::vector<double> coeffs(poly.n());
  for (std::size_t k = 0; k < poly.n(); ++k) coeffs[k] = scaled_to_double(poly[k], pt.scale);
  std::vector<Complex> values = basis.evaluate(coeffs);
  values.resize(basis.slot_count());
  return SlotVector(std::move(values));
}

SlotVector embed_real(std::span<const double> v, PadMode mode, std::size_t slot_count) {
  if (mode == PadMode::kBroadcast) {
    if (v.size() != 1) throw CapacityError("broadcast embedding takes exactly one value");
    return SlotVector(std::vector<Complex>(slot_count, Complex(v[0], 0.0)));
  }
  if (v.size() > slot_count) throw CapacityError("more values than slots (N/2)");
  SlotVector out = SlotVector::zeros(slot_count);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

}  // namespace ckksid
