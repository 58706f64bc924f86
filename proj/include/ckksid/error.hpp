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

#ifndef CKKSID_ERROR_HPP_
#define CKKSID_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ckksid {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands built over different ring parameters.
class ParameterMismatch : public Error {
 public:
  using Error::Error;
};

// A parameter violates its documented range (N not a power of two, h > N, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Non-finite input, unstable model, or similar domain violation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Slot vector longer than N/2 or a broadcast of more than one value.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A quantized coefficient does not fit in Z_P.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// Operation requested on a ciphertext of unsupported degree.
class DepthError : public Error {
 public:
  using Error::Error;
};

// Operands carry different scales.
class ScaleMismatch : public Error {
 public:
  using Error::Error;
};

// Rotation requested without a matching key.
class KeyError : public Error {
 public:
  using Error::Error;
};

// Numerical procedure cannot reach the requested accuracy.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated serialized data.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Decryption produced a value that wrapped around the modulus.
class CorrectnessViolation : public Error {
 public:
  CorrectnessViolation(const std::string& what, long iteration = -1)
      : Error(what), iteration_(iteration) {}

  long iteration() const { return iteration_; }
  void set_iteration(long k) { iteration_ = k; }

 private:
  long iteration_;
};

}  // namespace ckksid

#endif  // CKKSID_ERROR_HPP_
