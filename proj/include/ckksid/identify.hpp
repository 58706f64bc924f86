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

#ifndef CKKSID_IDENTIFY_HPP_
#define CKKSID_IDENTIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ckksid/arx.hpp"
#include "ckksid/ckks.hpp"

namespace ckksid {

// Euclidean ball of radius theta_bar centred at the origin.
struct ProjectionSet {
  double radius = 1.0;
  bool contains(std::span<const double> x, double slack = 1e-12) const;
};

std::vector<double> project(std::span<const double> x, const ProjectionSet& X);

enum class IdentMode { kPlaintext, kEncrypted, kDual };
std::string to_string(IdentMode mode);
IdentMode parse_ident_mode(const std::string& s);

struct IdentSeeds {
  std::uint64_t crypto = 1;     // keygen and encryption noise
  std::uint64_t plant = 2;      // inputs u_k and noises w_k
  std::uint64_t quantizer = 3;  // probabilistic rounding in Ecd
};

// u_k ~ U[u_min, u_max], w_k ~ U[w_min, w_max].
struct ExcitationSpec {
  double u_min = 1.0, u_max = 5.0;
  double w_min = -5.0, w_max = 5.0;
};

struct IdentConfig {
  double alpha = 1e-10;
  std::vector<double> theta0;
  double theta_bar = 7.0;
  std::size_t k_max = 0;
  IdentMode mode = IdentMode::kPlaintext;
  IdentSeeds seeds;
  ExcitationSpec excitation;
  // Coefficients whose magnitude reaches P / guard_divisor after decryption
  // are treated as wrapped around.
  unsigned guard_divisor = 4;

  void validate(std::size_t dim) const;
};

// Step 1 message, Sensor to Cloud. theta is encoded but not encrypted.
struct SensorMessage {
  std::size_t k = 0;
  Ciphertext phi;    // scale Delta
  Ciphertext y;      // scale Delta^2, broadcast to every slot
  Plaintext theta;   // scale Delta
};

struct ProtocolKeys {
  const PublicKey* pk = nullptr;
  ChaChaRng* crypto_rng = nullptr;
  ChaChaRng* quantizer_rng = nullptr;
};

SensorMessage sensor_step_encrypt(const CkksContext& ctx, std::size_t k,
                                  std::span<const double> phi, double y_next,
                                  std::span<const double> theta_hat, const ProtocolKeys& keys);

// ct_k = Mult(phi, Add(y, -Dot(theta, phi))), degree 2 at scale Delta^3.
Ciphertext cloud_step_eval(const CkksContext& ctx, const SensorMessage& msg,
                           const RotationKeySet& rot);

struct DecryptedStep {
  std::vector<double> mt;  // real parts of the first dim slots
  double imag_inf = 0.0;   // largest imaginary part among those slots
};

// Throws CorrectnessViolation (carrying k) when a decrypted coefficient
// reaches P / guard_divisor.
DecryptedStep sensor_step_decrypt(const CkksContext& ctx, const Ciphertext& ct,
                                  const SecretKey& sk, std::size_t dim, std::size_t k,
                                  unsigned guard_divisor = 4);

// phi (y - phi . theta).
std::vector<double> plaintext_mt(std::span<const double> phi, double y_next,
                                 std::span<const double> theta_hat);

// Proj_X(theta + alpha / (k + 1) mt).
std::vector<double> cloud_step_update(std::span<const double> theta_hat,
                                      std::span<const double> mt, std::size_t k, double alpha,
                                      const ProjectionSet& X);

// Worst-case |mt(enc) - mt(plain)| per slot for one protocol step with
// |phi_i| <= phi_max, |y| <= y_max and |theta_i| <= theta_max.
double protocol_step_bound(const CkksContext& ctx, std::size_t dim, double phi_max,
                           double y_max, double theta_max);

// In-process transport with a transcript. Roles only interact through it.
struct CloudReply {
  std::size_t k = 0;
  Ciphertext ct;
};
struct MtReport {
  std::size_t k = 0;
  std::vector<double> mt;
};
struct EstimateUpdate {
  std::size_t k = 0;
  std::vector<double> theta;
};
using ProtocolMessage = std::variant<SensorMessage, CloudReply, MtReport, EstimateUpdate>;

struct TranscriptEntry {
  std::size_t k = 0;
  std::string from, to, kind;
  std::size_t bytes = 0;  // serialized payload size
};

class Channel {
 public:
  void send(std::string from, std::string to, ProtocolMessage msg);
  // Pops the oldest message addressed to `to`. Throws Error if none.
  ProtocolMessage receive(const std::string& to);
  bool empty() const { return queue_.empty(); }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }

 private:
  struct Envelope {
    std::string to;
    ProtocolMessage msg;
  };
  std::deque<Envelope> queue_;
  std::vector<TranscriptEntry> transcript_;
};

class Sensor {
 public:
  Sensor(CkksContextPtr ctx, const ARXModel& model, const IdentConfig& config);

  // Public material the Cloud needs.
  const RotationKeySet& rotation_keys() const { return keys_.rot; }
  // Step 1: draws u_k and w_{k+1}, advances the plant, sends the message.
  void send_measurement(Channel& ch);
  // Step 3: decrypts ct_k and sends mt_k.
  DecryptedStep answer(Channel& ch);
  // Step 4 (receiving side).
  void receive_estimate(Channel& ch);

  const std::vector<double>& last_phi() const { return phi_; }
  double last_y() const { return y_next_; }
  const std::vector<double>& estimate() const { return theta_hat_; }
  std::size_t bound_violations() const { return plant_.bound_violations(); }

 private:
  CkksContextPtr ctx_;
  IdentConfig config_;
  ChaChaRng crypto_rng_, plant_rng_, quantizer_rng_;
  KeyBundle keys_;
  ARXPlant plant_;
  std::vector<double> theta_hat_;
  std::vector<double> phi_;
  double y_next_ = 0.0;
  std::size_t k_ = 0;
};

class Cloud {
 public:
  Cloud(CkksContextPtr ctx, RotationKeySet rot, const IdentConfig& config);

  // Step 2.
  void evaluate(Channel& ch);
  // Step 4: applies the projected update and sends the new estimate.
  void update(Channel& ch);
  const std::vector<double>& estimate() const { return theta_hat_; }

 private:
  CkksContextPtr ctx_;
  RotationKeySet rot_;
  IdentConfig config_;
  ProjectionSet X_;
  std::vector<double> theta_hat_;
};

struct IterationRecord {
  std::size_t k = 0;
  std::vector<double> theta_next;  // estimate after this iteration's update
  std::optional<double> err_norm;  // ||theta_next - theta||
  std::vector<double> mt;          // mt_k driving the update
  // Dual mode: |mt(enc) - mt(plain)|_inf at the encrypted estimate, the
  // plaintext-mode estimate after the update, and the imaginary residue.
  std::optional<double> noise_inf;
  std::optional<std::vector<double>> theta_plain_next;
  std::optional<double> imag_inf;
};

struct IdentResult {
  std::vector<IterationRecord> records;
  std::vector<double> theta_final;
  std::optional<std::vector<double>> theta_plain_final;
  double initial_err = 0.0;
  std::size_t bound_violations = 0;
  std::vector<TranscriptEntry> transcript;
};

// ctx may be null in plaintext mode. Throws CorrectnessViolation with the
// iteration index when decryption wraps around.
IdentResult run_identification(const ARXModel& model, const IdentConfig& config,
                               const CkksContextPtr& ctx);

}  // namespace ckksid

#endif  // CKKSID_IDENTIFY_HPP_
