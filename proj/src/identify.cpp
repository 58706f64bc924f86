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

#include "ckksid/identify.hpp"

#include <algorithm>
#include <cmath>

#include "ckksid/error.hpp"

namespace ckksid {

namespace {

constexpr const char* kSensor = "sensor";
constexpr const char* kCloud = "cloud";

double Norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double DistanceTo(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::size_t PayloadBytes(const ProtocolMessage& msg) {
  struct Visitor {
    std::size_t operator()(const SensorMessage& m) const {
      std::vector<std::uint8_t> buf;
      write_ring_element(buf, m.theta.poly);
      return serialize(m.phi).size() + serialize(m.y).size() + buf.size() + 8;
    }
    std::size_t operator()(const CloudReply& m) const { return serialize(m.ct).size(); }
    std::size_t operator()(const MtReport& m) const { return 8 * m.mt.size(); }
    std::size_t operator()(const EstimateUpdate& m) const { return 8 * m.theta.size(); }
  };
  return std::visit(Visitor{}, msg);
}

std::string KindOf(const ProtocolMessage& msg) {
  switch (msg.index()) {
    case 0: return "measurement";
    case 1: return "ct";
    case 2: return "mt";
    default: return "estimate";
  }
}

std::size_t IterationOf(const ProtocolMessage& msg) {
  return std::visit([](const auto& m) { return m.k; }, msg);
}

template <typename T>
T Expect(ProtocolMessage msg) {
  if (auto* m = std::get_if<T>(&msg)) return std::move(*m);
  throw Error("unexpected protocol message " + KindOf(msg));
}

struct SignalSource {
  explicit SignalSource(const IdentConfig& config)
      : rng(config.seeds.plant, "plant"), spec(config.excitation) {}
  // u_k, then w_{k+1}.
  std::pair<double, double> next() {
    const double u = rng.uniform_real(spec.u_min, spec.u_max);
    const double w = rng.uniform_real(spec.w_min, spec.w_max);
    return {u, w};
  }
  ChaChaRng rng;
  ExcitationSpec spec;
};

}  // namespace

bool ProjectionSet::contains(std::span<const double> x, double slack) const {
  return Norm(x) <= radius + slack;
}

std::vector<double> project(std::span<const double> x, const ProjectionSet& X) {
  std::vector<double> out(x.begin(), x.end());
  const double norm = Norm(x);
  if (norm > X.radius) {
    const double f = X.radius / norm;
    for (double& v : out) v *= f;
  }
  return out;
}

std::string to_string(IdentMode mode) {
  switch (mode) {
    case IdentMode::kPlaintext: return "plaintext";
    case IdentMode::kEncrypted: return "encrypted";
    case IdentMode::kDual: return "dual";
  }
  return "?";
}

IdentMode parse_ident_mode(const std::string& s) {
  if (s == "plaintext") return IdentMode::kPlaintext;
  if (s == "encrypted") return IdentMode::kEncrypted;
  if (s == "dual") return IdentMode::kDual;
  throw ConfigError("unknown identification mode '" + s + "'");
}

void IdentConfig::validate(std::size_t dim) const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
  if (!(theta_bar > 0.0)) throw ConfigError("theta_bar must be positive");
  if (theta0.size() != dim) throw ConfigError("theta0 must have p+q entries");
  if (!ProjectionSet{theta_bar}.contains(theta0)) throw ConfigError("theta0 lies outside X");
  if (!(excitation.u_min <= excitation.u_max) || !(excitation.w_min <= excitation.w_max)) {
    throw ConfigError("excitation ranges must be ordered");
  }
  if (guard_divisor < 2) throw ConfigError("guard divisor must be >= 2");
}

SensorMessage sensor_step_encrypt(const CkksContext& ctx, std::size_t k,
                                  std::span<const double> phi, double y_next,
                                  std::span<const double> theta_hat, const ProtocolKeys& keys) {
  const std::size_t slots = ctx.slot_count();
  if (phi.size() > slots || theta_hat.size() > slots) {
    throw CapacityError("p+q exceeds the N/2 slots");
  }
  const double delta = ctx.delta();
  SensorMessage msg;
  msg.k = k;
  const Plaintext phi_pt = encode(embed_real(phi, PadMode::kZero, slots), delta, ctx.basis(),
                                  ctx.ring(), *keys.quantizer_rng);
  const double y1[] = {y_next};
  const Plaintext y_pt = encode(embed_real(y1, PadMode::kBroadcast, slots), delta * delta,
                                ctx.basis(), ctx.ring(), *keys.quantizer_rng);
  msg.theta = encode(embed_real(theta_hat, PadMode::kZero, slots), delta, ctx.basis(),
                     ctx.ring(), *keys.quantizer_rng);
  msg.phi = encrypt(ctx, phi_pt, *keys.pk, *keys.crypto_rng);
  msg.y = encrypt(ctx, y_pt, *keys.pk, *keys.crypto_rng);
  return msg;
}

Ciphertext cloud_step_eval(const CkksContext& ctx, const SensorMessage& msg,
                           const RotationKeySet& rot) {
  const Ciphertext dot = hom_dot(ctx, msg.theta, msg.phi, rot);
  const Ciphertext residual = hom_add(msg.y, hom_neg(dot));
  return hom_mult(msg.phi, residual);
}

DecryptedStep sensor_step_decrypt(const CkksContext& ctx, const Ciphertext& ct,
                                  const SecretKey& sk, std::size_t dim, std::size_t k,
                                  unsigned guard_divisor) {
  const Plaintext pt = decrypt(ct, sk);
  const mpz_class limit = ctx.ring()->modulus() / guard_divisor;
  if (pt.poly.inf_norm() >= limit) {
    throw CorrectnessViolation("decrypted coefficient reached P/" +
                                   std::to_string(guard_divisor) +
                                   ": the decryption condition 2 G2 + 1 <= P is violated",
                               static_cast<long>(k));
  }
  const SlotVector z = decode(pt, ctx.basis());
  DecryptedStep out;
  out.mt.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out.mt[i] = z[i].real();
    out.imag_inf = std::max(out.imag_inf, std::fabs(z[i].imag()));
  }
  return out;
}

std::vector<double> plaintext_mt(std::span<const double> phi, double y_next,
                                 std::span<const double> theta_hat) {
  double pred = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) pred += phi[i] * theta_hat[i];
  std::vector<double> mt(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) mt[i] = phi[i] * (y_next - pred);
  return mt;
}

std::vector<double> cloud_step_update(std::span<const double> theta_hat,
                                      std::span<const double> mt, std::size_t k, double alpha,
                                      const ProjectionSet& X) {
  const double gain = alpha / static_cast<double>(k + 1);
  std::vector<double> next(theta_hat.size());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = theta_hat[i] + gain * mt[i];
  return project(next, X);
}

double protocol_step_bound(const CkksContext& ctx, std::size_t dim, double phi_max,
                           double y_max, double theta_max) {
  const double delta = ctx.delta();
  const double e_phi = bounds::fresh(ctx, delta);
  const double e_y = bounds::fresh(ctx, delta * delta);
  const double e_dot = bounds::dot(ctx, theta_max, delta, phi_max, e_phi, delta);
  const double inner_max = y_max + static_cast<double>(dim) * theta_max * phi_max;
  return bounds::mult(phi_max, e_phi, inner_max, e_y + e_dot);
}

void Channel::send(std::string from, std::string to, ProtocolMessage msg) {
  transcript_.push_back({IterationOf(msg), from, to, KindOf(msg), PayloadBytes(msg)});
  queue_.push_back({std::move(to), std::move(msg)});
}

ProtocolMessage Channel::receive(const std::string& to) {
  auto it = std::find_if(queue_.begin(), queue_.end(),
                         [&](const Envelope& e) { return e.to == to; });
  if (it == queue_.end()) throw Error("no message pending for " + to);
  ProtocolMessage msg = std::move(it->msg);
  queue_.erase(it);
  return msg;
}

Sensor::Sensor(CkksContextPtr ctx, const ARXModel& model, const IdentConfig& config)
    : ctx_(std::move(ctx)),
      config_(config),
      crypto_rng_(config.seeds.crypto, "crypto"),
      plant_rng_(config.seeds.plant, "plant"),
      quantizer_rng_(config.seeds.quantizer, "quantizer"),
      keys_(keygen(*ctx_, crypto_rng_)),
      plant_(model),
      theta_hat_(config.theta0) {}

void Sensor::send_measurement(Channel& ch) {
  const ExcitationSpec& ex = config_.excitation;
  const double u = plant_rng_.uniform_real(ex.u_min, ex.u_max);
  const double w = plant_rng_.uniform_real(ex.w_min, ex.w_max);
  phi_ = plant_.regressor_for(u);
  y_next_ = plant_.step(u, w);
  ProtocolKeys pk{&keys_.pk, &crypto_rng_, &quantizer_rng_};
  ch.send(kSensor, kCloud, sensor_step_encrypt(*ctx_, k_, phi_, y_next_, theta_hat_, pk));
}

DecryptedStep Sensor::answer(Channel& ch) {
  CloudReply reply = Expect<CloudReply>(ch.receive(kSensor));
  DecryptedStep step = sensor_step_decrypt(*ctx_, reply.ct, keys_.sk, phi_.size(), reply.k,
                                           config_.guard_divisor);
  ch.send(kSensor, kCloud, MtReport{reply.k, step.mt});
  return step;
}

void Sensor::receive_estimate(Channel& ch) {
  EstimateUpdate up = Expect<EstimateUpdate>(ch.receive(kSensor));
  theta_hat_ = std::move(up.theta);
  k_ = up.k + 1;
}

Cloud::Cloud(CkksContextPtr ctx, RotationKeySet rot, const IdentConfig& config)
    : ctx_(std::move(ctx)),
      rot_(std::move(rot)),
      config_(config),
      X_{config.theta_bar},
      theta_hat_(config.theta0) {}

void Cloud::evaluate(Channel& ch) {
  SensorMessage msg = Expect<SensorMessage>(ch.receive(kCloud));
  ch.send(kCloud, kSensor, CloudReply{msg.k, cloud_step_eval(*ctx_, msg, rot_)});
}

void Cloud::update(Channel& ch) {
  MtReport rep = Expect<MtReport>(ch.receive(kCloud));
  theta_hat_ = cloud_step_update(theta_hat_, rep.mt, rep.k, config_.alpha, X_);
  ch.send(kCloud, kSensor, EstimateUpdate{rep.k, theta_hat_});
}

IdentResult run_identification(const ARXModel& model, const IdentConfig& config,
                               const CkksContextPtr& ctx) {
  model.validate();
  config.validate(model.dim());
  const std::vector<double> theta = model.theta();
  const ProjectionSet X{config.theta_bar};
  IdentResult result;
  result.initial_err = DistanceTo(config.theta0, theta);

  if (config.mode == IdentMode::kPlaintext) {
    SignalSource src(config);
    ARXPlant plant(model);
    std::vector<double> est = config.theta0;
    for (std::size_t k = 0; k < config.k_max; ++k) {
      const auto [u, w] = src.next();
      const std::vector<double> phi = plant.regressor_for(u);
      const double y = plant.step(u, w);
      IterationRecord rec;
      rec.k = k;
      rec.mt = plaintext_mt(phi, y, est);
      est = cloud_step_update(est, rec.mt, k, config.alpha, X);
      rec.theta_next = est;
      rec.err_norm = DistanceTo(est, theta);
      result.records.push_back(std::move(rec));
    }
    result.theta_final = est;
    result.bound_violations = plant.bound_violations();
    return result;
  }

  if (!ctx) throw ParameterError("encrypted identification needs a CKKS context");
  Sensor sensor(ctx, model, config);
  Cloud cloud(ctx, sensor.rotation_keys(), config);
  Channel ch;
  const bool dual = config.mode == IdentMode::kDual;
  std::vector<double> plain_est = config.theta0;
  for (std::size_t k = 0; k < config.k_max; ++k) {
    const std::vector<double> theta_k = sensor.estimate();
    sensor.send_measurement(ch);
    cloud.evaluate(ch);
    DecryptedStep step;
    try {
      step = sensor.answer(ch);
    } catch (CorrectnessViolation& e) {
      e.set_iteration(static_cast<long>(k));
      throw;
    }
    cloud.update(ch);
    sensor.receive_estimate(ch);

    IterationRecord rec;
    rec.k = k;
    rec.mt = step.mt;
    rec.theta_next = cloud.estimate();
    rec.err_norm = DistanceTo(rec.theta_next, theta);
    if (dual) {
      const std::vector<double> ref = plaintext_mt(sensor.last_phi(), sensor.last_y(), theta_k);
      double noise = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        noise = std::max(noise, std::fabs(step.mt[i] - ref[i]));
      }
      rec.noise_inf = noise;
      rec.imag_inf = step.imag_inf;
      plain_est = cloud_step_update(
          plain_est, plaintext_mt(sensor.last_phi(), sensor.last_y(), plain_est), k,
          config.alpha, X);
      rec.theta_plain_next = plain_est;
    }
    result.records.push_back(std::move(rec));
  }
  result.theta_final = cloud.estimate();
  if (dual) result.theta_plain_final = plain_est;
  result.bound_violations = sensor.bound_violations();
  result.transcript = ch.transcript();
  return result;
}

}  // namespace ckksid
