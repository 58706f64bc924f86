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

// Acceptance gate: one PASS/FAIL line per criterion. Exit status is non-zero
// when any selected criterion fails.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ckksid/arx.hpp"
#include "ckksid/ckks.hpp"
#include "ckksid/config.hpp"
#include "ckksid/identify.hpp"
#include "ckksid/statdist.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace ckksid::acceptance {
namespace {

using testing::ExamplePlant;
using testing::ExampleThetaHat0;

// Frozen tolerances. Each is the maximum observed over the criterion's own
// deterministic seeds with a 4x margin, rounded up to one significant digit.
constexpr double kTolAdd = 2e-7;
constexpr double kTolMult = 2e-6;
constexpr double kTolDot = 9e-6;
constexpr double kTolPipeline = 5e-6;

// Criterion parameters.
constexpr double kQuantMeanTol = 0.01;
constexpr double kConvergenceRatio = 0.2;
constexpr double kStandardErrors = 4.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

std::string Fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

bool g_measure = false;

void Measured(const char* what, double v) {
  if (g_measure) std::cout << "  measure " << what << " = " << std::setprecision(6) << v << "\n";
}

ParamReport ExampleReport(std::size_t n, double gamma, double alpha) {
  mpz_class p = 1;
  for (int i = 0; i < 3; ++i) p *= testing::P1();
  for (int i = 0; i < 2; ++i) p *= testing::P2();
  return validate_params(ExamplePlant(), n, p, 0x1p40, 3.2, gamma, alpha, 7.0);
}

// 1 ----------------------------------------------------------------------

Outcome RingOracle() {
  ChaChaRng rng(101, "c1");
  std::size_t mismatches = 0, cases = 0;
  for (std::size_t n : {2u, 8u, 16u}) {
    for (std::int64_t p : {257, 7681, 12289}) {
      auto ring = RingParams::create(n, p);
      for (int t = 0; t < 1000; ++t) {
        std::vector<std::int64_t> a(n), b(n);
        for (auto& v : a) v = testing::centered_mod(static_cast<std::int64_t>(rng.uniform_below(p)), p);
        for (auto& v : b) v = testing::centered_mod(static_cast<std::int64_t>(rng.uniform_below(p)), p);
        const RingElement got =
            ring_mul(RingElement::from_int64(ring, a), RingElement::from_int64(ring, b));
        const auto want = testing::negacyclic_oracle(a, b, p);
        for (std::size_t i = 0; i < n; ++i) mismatches += got[i] != want[i];
        ++cases;
      }
    }
  }
  // Exhaustive over Z_5[x]/(x^2+1).
  auto ring = RingParams::create(2, 5);
  std::size_t exhaustive = 0;
  for (int a0 = -2; a0 <= 2; ++a0)
    for (int a1 = -2; a1 <= 2; ++a1)
      for (int b0 = -2; b0 <= 2; ++b0)
        for (int b1 = -2; b1 <= 2; ++b1) {
          const std::vector<std::int64_t> a{a0, a1}, b{b0, b1};
          const RingElement got =
              ring_mul(RingElement::from_int64(ring, a), RingElement::from_int64(ring, b));
          const auto want = testing::negacyclic_oracle(a, b, 5);
          mismatches += (got[0] != want[0]) + (got[1] != want[1]);
          ++exhaustive;
        }
  return {mismatches == 0, std::to_string(cases) + " random + " + std::to_string(exhaustive) +
                               " exhaustive pairs, mismatched coefficients=" +
                               std::to_string(mismatches)};
}

// 2 ----------------------------------------------------------------------

Outcome QuantizerUnbiased() {
  ChaChaRng rng(202, "c2");
  bool ok = true;
  std::string detail;
  for (double x : {0.1, 0.25, 0.5, 0.9}) {
    double sum = 0, worst = 0;
    for (int i = 0; i < 100000; ++i) {
      const double q = quantize_one(x, rng);
      sum += q;
      worst = std::max(worst, std::fabs(q - x));
    }
    const double bias = std::fabs(sum / 100000 - x);
    ok &= bias <= kQuantMeanTol && worst <= 1.0;
    detail += "x=" + Fmt(x) + " bias=" + Fmt(bias) + " max|Q-x|=" + Fmt(worst) + "; ";
  }
  return {ok, detail + "tol=" + Fmt(kQuantMeanTol)};
}

// 3 ----------------------------------------------------------------------

Outcome EncodeBound() {
  const std::size_t n = 8192;
  const double delta = 0x1p40;
  auto ring = testing::ExampleRing(n);
  const EmbeddingBasis basis(n);
  ChaChaRng rng(303, "c3");
  const double bound = static_cast<double>(n) / delta;
  double worst = 0;
  for (int t = 0; t < 8; ++t) {
    SlotVector z = SlotVector::zeros(n / 2);
    for (std::size_t i = 0; i < n / 2; ++i) {
      z[i] = std::polar(rng.uniform_real(0, 1e3), rng.uniform_real(0, 2 * M_PI));
    }
    const SlotVector back = decode(encode(z, delta, basis, ring, rng), basis);
    worst = std::max(worst, testing::MaxSlotError(z, back));
  }
  Measured("encode_roundtrip", worst);
  return {worst <= bound, "max slot error=" + Fmt(worst) + " bound N/Delta=" + Fmt(bound)};
}

// 4 ----------------------------------------------------------------------

struct HomCase {
  double add = 0, mult = 0, dot = 0;
};

Outcome HomomorphicCorrectness() {
  const auto ctx = testing::ExampleContext(2048);
  ChaChaRng rng(404, "c4");
  const KeyBundle keys = keygen(*ctx, rng);
  const double delta = ctx->delta();
  const std::size_t slots = ctx->slot_count();
  const double zmax = 10.0;
  const double zabs = zmax * std::sqrt(2.0);
  const double fresh = bounds::fresh(*ctx, delta);
  const double bound_add = 2 * fresh;
  const double bound_mult = bounds::mult(zabs, fresh, zabs, fresh);
  const double bound_dot = bounds::dot(*ctx, zmax, delta, zmax, fresh, delta);
  HomCase worst;
  for (int t = 0; t < 100; ++t) {
    const SlotVector a = testing::RandomSlots(slots, zmax, rng);
    const SlotVector b = testing::RandomSlots(slots, zmax, rng);
    const Ciphertext ca = encrypt_slots(*ctx, a, delta, keys.pk, rng);
    const Ciphertext cb = encrypt_slots(*ctx, b, delta, keys.pk, rng);
    SlotVector sum = SlotVector::zeros(slots), prod = SlotVector::zeros(slots);
    for (std::size_t i = 0; i < slots; ++i) {
      sum[i] = a[i] + b[i];
      prod[i] = a[i] * b[i];
    }
    worst.add = std::max(worst.add,
                         testing::MaxSlotError(decrypt_slots(*ctx, hom_add(ca, cb), keys.sk), sum));
    worst.mult = std::max(
        worst.mult, testing::MaxSlotError(decrypt_slots(*ctx, hom_mult(ca, cb), keys.sk), prod));
    // Dot needs real slot vectors.
    const SlotVector ra = testing::RandomSlots(slots, zmax, rng, true);
    const SlotVector rb = testing::RandomSlots(slots, zmax, rng, true);
    long double ip = 0;
    for (std::size_t i = 0; i < slots; ++i) ip += (long double)ra[i].real() * rb[i].real();
    const Plaintext pa = encode(ra, delta, ctx->basis(), ctx->ring(), rng);
    const Ciphertext cd =
        hom_dot(*ctx, pa, encrypt_slots(*ctx, rb, delta, keys.pk, rng), keys.rot);
    const SlotVector got = decrypt_slots(*ctx, cd, keys.sk);
    for (std::size_t i = 0; i < slots; ++i) {
      worst.dot = std::max(worst.dot, std::abs(got[i] - Complex(static_cast<double>(ip), 0)));
    }
  }
  Measured("add", worst.add);
  Measured("mult", worst.mult);
  Measured("dot", worst.dot);
  const bool ok = worst.add <= kTolAdd && worst.add <= bound_add && worst.mult <= kTolMult &&
                  worst.mult <= bound_mult && worst.dot <= kTolDot && worst.dot <= bound_dot;
  return {ok, "add " + Fmt(worst.add) + " (tol " + Fmt(kTolAdd) + ", bound " + Fmt(bound_add) +
                  "); mult " + Fmt(worst.mult) + " (tol " + Fmt(kTolMult) + ", bound " +
                  Fmt(bound_mult) + "); dot " + Fmt(worst.dot) + " (tol " + Fmt(kTolDot) +
                  ", bound " + Fmt(bound_dot) + ")"};
}

// 5 ----------------------------------------------------------------------

Outcome TruncationAndDistance() {
  std::size_t checks = 0, failures = 0, exp_checks = 0, conv_checks = 0;
  std::string conv;
  for (int dim = 1; dim <= 3; ++dim) {
    LatticeSpec lat;
    lat.dim = dim;
    const double n = dim;
    const double eta = smoothing_parameter(lat, std::exp(-n));
    for (double sigma : {1.0, 2.0, 3.2, 5.0}) {
      const double thr = check_truncation_condition(sigma, 0, n).threshold;
      for (double f : {0.5, 0.8, 1.0, 1.5, 2.5}) {
        const double gamma = f * thr;
        const double tail = tail_ratio(sigma, gamma, lat);
        ++checks;
        failures += tail > banaszczyk_bound(sigma, gamma, dim);
        if (check_truncation_condition(sigma, gamma, n).pass) {
          ++exp_checks;
          failures += tail > std::exp(-n);
          if (dim == 1) {
            const double k = 4 * M_PI * M_PI * sigma * sigma * eta * eta - 1;
            const double tau = k <= 0 ? sigma : 0.999 * sigma / std::sqrt(k);
            if (smoothing_condition_holds(sigma, tau, eta)) {
              const double d = convolved_distance(sigma, gamma, tau, lat);
              ++conv_checks;
              failures += d > 3 * std::exp(-n);
              conv += " " + Fmt(d);
            }
          }
        }
      }
    }
  }
  return {failures == 0 && conv_checks > 0,
          std::to_string(checks) + " tail-vs-Banaszczyk, " + std::to_string(exp_checks) +
              " tail-vs-exp(-n), " + std::to_string(conv_checks) +
              " convolved checks (bound 3/e=" + Fmt(3 * std::exp(-1.0)) + ", measured" + conv +
              "), failures=" + std::to_string(failures)};
}

// 6 ----------------------------------------------------------------------

ARXModel RandomStableModel(ChaChaRng& rng) {
  const std::size_t p = 1 + rng.uniform_below(5);
  std::vector<std::complex<long double>> roots;
  while (roots.size() < p) {
    const double rad = rng.uniform_real(0.0, 0.95);
    if (p - roots.size() >= 2 && rng.uniform_below(2) == 0) {
      const double ang = rng.uniform_real(0.0, M_PI);
      roots.push_back(std::polar<long double>(rad, ang));
      roots.push_back(std::polar<long double>(rad, -ang));
    } else {
      roots.push_back(rng.uniform_below(2) ? rad : -rad);
    }
  }
  std::vector<std::complex<long double>> c{1.0L};
  for (const auto& r : roots) {
    c.push_back(0.0L);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] -= r * c[i - 1];
  }
  ARXModel m;
  for (std::size_t i = 1; i <= p; ++i) m.a.push_back(-static_cast<double>(c[i].real()));
  m.b = {1.0};
  return m;
}

Outcome PowerNormDecay() {
  ChaChaRng rng(606, "c6");
  std::vector<ARXModel> models{ExamplePlant()};
  for (int t = 0; t < 20; ++t) models.push_back(RandomStableModel(rng));
  std::size_t violations = 0;
  double worst_ratio = 0;
  for (const auto& m : models) {
    const DecayConstant dc = decay_constant(m);
    const Eigen::MatrixXd A = companion_matrix(m);
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(A.rows(), A.cols());
    for (int k = 0; k <= 200; ++k) {
      if (k > 0) M = M * A;
      const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
      const double bound = dc.c * std::pow((dc.rho + 1) / 2, k);
      if (norm > bound) ++violations;
      if (bound > 0) worst_ratio = std::max(worst_ratio, norm / bound);
    }
  }
  return {violations == 0, std::to_string(models.size()) + " models x 201 powers, violations=" +
                               std::to_string(violations) +
                               ", max ||A^k|| / bound=" + Fmt(worst_ratio)};
}

// 7 ----------------------------------------------------------------------

Outcome ValidatorOnExample() {
  const ParamReport rep = ExampleReport(8192, 18491, 1e-10);
  const bool cap = rep.find("capacity")->pass;
  const bool dec = rep.find("decryption")->pass;
  const bool trunc = rep.find("truncation")->pass;
  const bool thr = std::fabs(rep.gamma_threshold - 37076.0) <= 0.5;
  return {cap && dec && !trunc && thr,
          std::string("capacity ") + (cap ? "PASS" : "FAIL") + ", decryption " +
              (dec ? "PASS" : "FAIL") + ", truncation " + (trunc ? "PASS" : "FAIL") +
              " (threshold " + Fmt(rep.gamma_threshold) + "; expected PASS/PASS/FAIL)"};
}

// 8 ----------------------------------------------------------------------

Outcome Convergence() {
  const ParamReport rep = ExampleReport(8192, 18491, 1e-10);
  IdentConfig cfg;
  cfg.alpha = rep.alpha_max;
  cfg.theta0 = ExampleThetaHat0();
  cfg.theta_bar = 7.0;
  cfg.k_max = 100000;
  double ratio_sum = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    cfg.seeds = {seed, 800 + seed, seed};
    const IdentResult r = run_identification(ExamplePlant(), cfg, nullptr);
    ratio_sum += *r.records.back().err_norm / r.initial_err;
  }
  const double ratio = ratio_sum / 5;
  Measured("convergence_ratio", ratio);
  return {ratio <= kConvergenceRatio, "alpha=" + Fmt(cfg.alpha) +
                                          " mean ||theta_k - theta|| / ||theta_0 - theta|| at "
                                          "k=1e5 = " +
                                          Fmt(ratio) + " (need <= " + Fmt(kConvergenceRatio) + ")"};
}

// 9 ----------------------------------------------------------------------

Outcome PipelineEquivalence() {
  const auto ctx = testing::ExampleContext(2048);
  const ParamReport rep = ExampleReport(2048, static_cast<double>(ctx->noise().gamma), 1e-10);
  IdentConfig cfg;
  cfg.alpha = rep.alpha_max;
  cfg.theta0 = ExampleThetaHat0();
  cfg.theta_bar = 7.0;
  cfg.k_max = 200;
  cfg.mode = IdentMode::kDual;
  cfg.seeds = {901, 902, 903};
  const IdentResult r = run_identification(ExamplePlant(), cfg, ctx);
  double noise = 0;
  for (const auto& rec : r.records) noise = std::max(noise, *rec.noise_inf);
  double final_gap = 0;
  for (std::size_t i = 0; i < r.theta_final.size(); ++i) {
    final_gap = std::max(final_gap, std::fabs(r.theta_final[i] - (*r.theta_plain_final)[i]));
  }
  const double bound = protocol_step_bound(*ctx, 9, rep.G1, rep.G1, 7.0);
  Measured("pipeline_noise", noise);
  Measured("final_gap", final_gap);
  const bool ok = noise <= kTolPipeline && noise <= bound && final_gap <= 2 * kTolPipeline;
  return {ok, "max |mt(enc) - mt(plain)|_inf=" + Fmt(noise) + " (tol " + Fmt(kTolPipeline) +
                  ", analytic " + Fmt(bound) + "); final estimate gap=" + Fmt(final_gap) +
                  " (tol " + Fmt(2 * kTolPipeline) + ")"};
}

// 10 ---------------------------------------------------------------------

Outcome ZeroMeanPerturbation() {
  const auto ctx = testing::ExampleContext(2048);
  ChaChaRng key_rng(1001, "c10-keys");
  const KeyBundle keys = keygen(*ctx, key_rng);
  // Fixed signals from step 50 of a simulated trajectory.
  ChaChaRng plant_rng(1002, "c10-plant");
  ARXPlant plant(ExamplePlant());
  std::vector<double> phi;
  double y = 0;
  for (int k = 0; k <= 50; ++k) {
    const double u = plant_rng.uniform_real(1, 5);
    const double w = plant_rng.uniform_real(-5, 5);
    phi = plant.regressor_for(u);
    y = plant.step(u, w);
  }
  const std::vector<double> theta = ExampleThetaHat0();
  const std::vector<double> want = plaintext_mt(phi, y, theta);
  const int reps = 1000;
  std::vector<double> sum(9, 0.0), sum2(9, 0.0);
  ChaChaRng crypto(1003, "c10-crypto"), quant(1004, "c10-quantizer");
  for (int t = 0; t < reps; ++t) {
    const SensorMessage m =
        sensor_step_encrypt(*ctx, 0, phi, y, theta, ProtocolKeys{&keys.pk, &crypto, &quant});
    const DecryptedStep d = sensor_step_decrypt(*ctx, cloud_step_eval(*ctx, m, keys.rot),
                                                keys.sk, 9, 0);
    for (std::size_t i = 0; i < 9; ++i) {
      const double diff = d.mt[i] - want[i];
      sum[i] += diff;
      sum2[i] += diff * diff;
    }
  }
  double worst_z = 0;
  for (std::size_t i = 0; i < 9; ++i) {
    const double mean = sum[i] / reps;
    const double var = (sum2[i] - reps * mean * mean) / (reps - 1);
    const double se = std::sqrt(var / reps);
    // A zero standard error only occurs with zero perturbation.
    const double z = se > 0 ? std::fabs(mean) / se : (mean == 0 ? 0 : INFINITY);
    worst_z = std::max(worst_z, z);
  }
  Measured("max_z", worst_z);
  return {worst_z <= kStandardErrors, std::to_string(reps) + " repetitions, max |mean| / SE=" +
                                          Fmt(worst_z) + " (need <= " + Fmt(kStandardErrors) +
                                          ")"};
}

const std::vector<Criterion>& Criteria() {
  static const std::vector<Criterion> all{
      {1, "ring oracle equivalence", 10, RingOracle},
      {2, "quantizer unbiasedness", 5, QuantizerUnbiased},
      {3, "encode/decode bound", 30, EncodeBound},
      {4, "homomorphic correctness", 120, HomomorphicCorrectness},
      {5, "truncation and distance bounds", 60, TruncationAndDistance},
      {6, "power-norm decay inequality", 10, PowerNormDecay},
      {7, "validator on the example configuration", 1, ValidatorOnExample},
      {8, "plaintext convergence", 120, Convergence},
      {9, "encrypted/plaintext pipeline equivalence", 600, PipelineEquivalence},
      {10, "zero-mean encryption perturbation", 300, ZeroMeanPerturbation},
  };
  return all;
}

}  // namespace
}  // namespace ckksid::acceptance

int main(int argc, char** argv) {
  using namespace ckksid::acceptance;
  CLI::App app{"ckksid acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 10));
  app.add_flag("--measure", g_measure, "Print raw measurements used to freeze tolerances");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (const auto& c : Criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << "C" << c.id << " " << (pass ? "PASS" : "FAIL") << " " << c.name << ": "
              << o.detail << "; runtime " << Fmt(secs) << " s (limit " << Fmt(c.limit_s)
              << " s" << (in_time ? "" : ", EXCEEDED") << ")\n"
              << std::flush;
  }
  return failed == 0 ? 0 : 1;
}
