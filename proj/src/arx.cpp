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

#include "ckksid/arx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ckksid/error.hpp"
#include "ckksid/statdist.hpp"

namespace ckksid {

namespace {

constexpr std::size_t kMaxDecaySteps = 200000;

std::string Format(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::vector<double> ARXModel::theta() const {
  std::vector<double> t(a);
  t.insert(t.end(), b.begin(), b.end());
  return t;
}

void ARXModel::validate() const {
  if (a.empty() || b.empty()) throw ParameterError("ARX orders p and q must be >= 1");
  if (!(L > 0.0) || !std::isfinite(L)) throw ParameterError("signal bound L must be positive");
  for (double v : theta()) {
    if (!std::isfinite(v)) throw ParameterError("ARX coefficients must be finite");
  }
}

std::vector<double> regressor(std::span<const double> y, std::span<const double> u,
                              std::size_t k, std::size_t p, std::size_t q) {
  std::vector<double> phi(p + q, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    if (k >= i && k - i < y.size()) phi[i] = y[k - i];
  }
  for (std::size_t j = 0; j < q; ++j) {
    if (k >= j && k - j < u.size()) phi[p + j] = u[k - j];
  }
  return phi;
}

ARXPlant::ARXPlant(ARXModel model, double y0) : model_(std::move(model)) {
  model_.validate();
  y_.assign(model_.p(), 0.0);
  y_.front() = y0;
  u_.assign(model_.q() - 1, 0.0);
  if (std::fabs(y0) > model_.L) ++violations_;
}

std::vector<double> ARXPlant::regressor_for(double u_k) const {
  std::vector<double> phi(y_.begin(), y_.end());
  phi.push_back(u_k);
  phi.insert(phi.end(), u_.begin(), u_.end());
  return phi;
}

double ARXPlant::step(double u_k, double w_next) {
  if (std::fabs(u_k) > model_.L) ++violations_;
  if (std::fabs(w_next) > model_.L) ++violations_;
  const std::vector<double> phi = regressor_for(u_k);
  const std::vector<double> theta = model_.theta();
  double y = w_next;
  for (std::size_t i = 0; i < phi.size(); ++i) y += phi[i] * theta[i];
  y_.push_front(y);
  y_.pop_back();
  if (!u_.empty()) {
    u_.push_front(u_k);
    u_.pop_back();
  }
  ++k_;
  return y;
}

Trajectory simulate(const ARXModel& model, std::span<const double> u,
                    std::span<const double> w, double y0) {
  if (u.size() != w.size()) throw ParameterError("need one noise sample per input");
  ARXPlant plant(model, y0);
  Trajectory out;
  out.y.push_back(y0);
  for (std::size_t k = 0; k < u.size(); ++k) {
    out.phi.push_back(plant.regressor_for(u[k]));
    out.y.push_back(plant.step(u[k], w[k]));
  }
  out.bound_violations = plant.bound_violations();
  return out;
}

Eigen::MatrixXd companion_matrix(const ARXModel& model) {
  const auto p = static_cast<Eigen::Index>(model.p());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) A(0, j) = model.a[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < p; ++i) A(i, i - 1) = 1.0;
  return A;
}

std::vector<std::complex<double>> companion_roots(const ARXModel& model) {
  if (model.a.empty()) throw ParameterError("companion matrix needs p >= 1");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion_matrix(model), false);
  if (solver.info() != Eigen::Success) throw PrecisionError("eigenvalue solver failed");
  std::vector<std::complex<double>> roots;
  double scale = 1.0;
  for (double a : model.a) scale += std::fabs(a);
  for (const auto& z : solver.eigenvalues()) {
    // z^p - a_1 z^(p-1) - ... - a_p by Horner.
    std::complex<double> v = 1.0;
    for (double a : model.a) v = v * z - a;
    const double mag = std::pow(std::max(1.0, std::abs(z)), static_cast<double>(model.p()));
    if (std::abs(v) > 1e-9 * scale * mag) throw PrecisionError("companion root residual too large");
    roots.push_back(z);
  }
  return roots;
}

double spectral_radius(const ARXModel& model) {
  double rho = 0.0;
  for (const auto& z : companion_roots(model)) rho = std::max(rho, std::abs(z));
  return rho;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

DecayConstant decay_constant(const ARXModel& model) {
  DecayConstant out;
  out.rho = spectral_radius(model);
  if (out.rho >= 1.0) throw DomainError("ARX model is not stable (spectral radius >= 1)");
  // M_k = A^k ((rho + 1) / 2)^-k stays representable where A^k would underflow.
  const Eigen::MatrixXd step = companion_matrix(model) * (2.0 / (out.rho + 1.0));
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(step.rows(), step.cols());
  double best = 1.0;
  std::size_t below = 0;
  for (std::size_t k = 1; k <= kMaxDecaySteps; ++k) {
    M = M * step;
    const double norm = spectral_norm(M);
    if (norm > 1.0) {
      out.r = k;
      best = std::max(best, norm);
      below = 0;
    } else if (++below > 200 && norm < 1e-8) {
      break;
    }
  }
  // The bound is tight at the maximising k; round up so it survives
  // independent floating-point evaluation of ||A^k||.
  out.c = best > 1.0 ? best * (1.0 + 1e-12) : best;
  return out;
}

double compute_G1(const ARXModel& model, const DecayConstant& dc) {
  double sum_b2 = 0.0;
  for (double b : model.b) sum_b2 += b * b;
  const double q = static_cast<double>(model.q());
  return dc.c * ((dc.rho + 1.0) / 2.0) * model.L +
         2.0 * dc.c * std::sqrt((q + 1.0) * (1.0 + sum_b2)) * model.L / (1.0 - dc.rho);
}

double compute_G1(const ARXModel& model) { return compute_G1(model, decay_constant(model)); }

double compute_G2(double G1, double n, double gamma, double delta, double theta_bar) {
  const long double g1 = G1, N = n, g = gamma, d = delta;
  const long double head = g1 + (1.0L + N * (2.0L * N + 1.0L) * g) / d;
  return static_cast<double>(head * head * (1.0L + theta_bar + 1.0L / d) + (N + 1.0L) * g / d);
}

bool ParamReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

const Verdict* ParamReport::find(const std::string& name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

ParamReport validate_params(const ARXModel& model, std::size_t n, const mpz_class& modulus,
                            double delta, double sigma, double gamma, double alpha,
                            double theta_bar, bool check_theta) {
  model.validate();
  ParamReport rep;
  rep.model = model;
  rep.n = n;
  rep.modulus = modulus;
  rep.delta = delta;
  rep.sigma = sigma;
  rep.gamma = gamma;
  rep.alpha = alpha;
  rep.theta_bar = theta_bar;

  rep.rho = spectral_radius(model);
  const bool stable = rep.rho < 1.0;
  rep.verdicts.push_back({"stability", stable, "rho_A = " + Format(rep.rho) + " < 1"});
  if (stable) {
    const DecayConstant dc = decay_constant(model);
    rep.c = dc.c;
    rep.r = dc.r;
    rep.G1 = compute_G1(model, dc);
    rep.G2 = compute_G2(rep.G1, static_cast<double>(n), gamma, delta, theta_bar);
    rep.alpha_max = 1.0 / (static_cast<double>(n) * rep.G1 * rep.G1);
  } else {
    rep.c = rep.G1 = rep.G2 = std::numeric_limits<double>::infinity();
    rep.alpha_max = 0.0;
  }

  const std::size_t need = 2 * model.dim();
  rep.verdicts.push_back({"capacity", n >= need,
                          "N = " + std::to_string(n) + " >= 2(p+q) = " + std::to_string(need)});

  bool fits = false;
  std::string detail = "2 G2 + 1 <= P";
  if (std::isfinite(rep.G2)) {
    mpf_class lhs(0, 512);
    lhs = 2.0 * rep.G2;
    lhs += 1;
    mpf_class p(modulus, 512);
    fits = lhs <= p;
    detail = "2 G2 + 1 = " + Format(2.0 * rep.G2 + 1.0) + " <= P (" +
             std::to_string(mpz_sizeinbase(modulus.get_mpz_t(), 2)) + " bits)";
  }
  rep.verdicts.push_back({"decryption", fits, detail});

  rep.verdicts.push_back({"step_size", alpha > 0.0 && alpha <= rep.alpha_max,
                          "0 < alpha = " + Format(alpha) + " <= 1/(N G1^2) = " +
                              Format(rep.alpha_max)});

  const TruncationVerdict tv = check_truncation_condition(sigma, gamma, static_cast<double>(n));
  rep.gamma_threshold = tv.threshold;
  rep.verdicts.push_back({"truncation", tv.pass,
                          "Gamma = " + Format(gamma) + " >= sigma(sqrt(2) N + 1) = " +
                              Format(tv.threshold)});

  if (check_theta) {
    double norm2 = 0.0;
    for (double t : model.theta()) norm2 += t * t;
    rep.theta_norm = std::sqrt(norm2);
    rep.verdicts.push_back({"feasible_set", *rep.theta_norm <= theta_bar,
                            "||theta|| = " + Format(*rep.theta_norm) + " <= theta_bar = " +
                                Format(theta_bar)});
  }
  return rep;
}

ExcitationResult check_excitation(const std::vector<std::vector<double>>& phi, std::size_t K,
                                  double delta) {
  ExcitationResult out;
  if (K == 0 || phi.size() < K) throw ParameterError("need at least K regressors");
  const auto d = static_cast<Eigen::Index>(phi.front().size());
  auto outer = [&](std::size_t i) {
    Eigen::Map<const Eigen::VectorXd> v(phi[i].data(), d);
    return Eigen::MatrixXd(v * v.transpose());
  };
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < K; ++i) S += outer(i);
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t start = 0;; ++start) {
    // Recompute from scratch periodically to bound drift of the running sum.
    if (start % 1024 == 0 && start > 0) {
      S.setZero();
      for (std::size_t i = start; i < start + K; ++i) S += outer(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S / static_cast<double>(K),
                                                       Eigen::EigenvaluesOnly);
    const double m = eig.eigenvalues()(0);
    if (m < out.min_eigenvalue) {
      out.min_eigenvalue = m;
      out.worst_window = start;
    }
    ++out.windows;
    if (start + K >= phi.size()) break;
    S -= outer(start);
    S += outer(start + K);
  }
  out.pass = out.min_eigenvalue >= delta;
  return out;
}

}  // namespace ckksid
