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

#ifndef CKKSID_ARX_HPP_
#define CKKSID_ARX_HPP_

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ckksid {

// y_{k+1} = sum_i a_i y_{k+1-i} + sum_j b_j u_{k+1-j} + w_{k+1}.
struct ARXModel {
  std::vector<double> a;  // length p
  std::vector<double> b;  // length q
  double L = 1.0;         // bound on |y_0|, |u_k|, |w_k|

  std::size_t p() const { return a.size(); }
  std::size_t q() const { return b.size(); }
  std::size_t dim() const { return a.size() + b.size(); }
  // theta = (a_1..a_p, b_1..b_q).
  std::vector<double> theta() const;
  // Throws ParameterError unless p, q >= 1, L > 0 and all coefficients are finite.
  void validate() const;
};

// phi_k = (y_k, ..., y_{k-p+1}, u_k, ..., u_{k-q+1}) with zeros before time 0.
std::vector<double> regressor(std::span<const double> y, std::span<const double> u,
                              std::size_t k, std::size_t p, std::size_t q);

// Steps the recursion one sample at a time and exposes the current regressor.
class ARXPlant {
 public:
  explicit ARXPlant(ARXModel model, double y0 = 0.0);

  // Current time k and regressor phi_k once u_k has been applied.
  std::size_t time() const { return k_; }
  // Records u_k, produces y_{k+1} = phi_k . theta + w_{k+1} and advances k.
  double step(double u_k, double w_next);
  // phi_k given u_k (call before step).
  std::vector<double> regressor_for(double u_k) const;
  double last_output() const { return y_.front(); }
  // Inputs or noises that exceeded L in magnitude so far.
  std::size_t bound_violations() const { return violations_; }
  const ARXModel& model() const { return model_; }

 private:
  ARXModel model_;
  std::size_t k_ = 0;
  std::deque<double> y_;  // y_k, y_{k-1}, ... (p entries)
  std::deque<double> u_;  // u_{k-1}, u_{k-2}, ... (q - 1 entries)
  std::size_t violations_ = 0;
};

struct Trajectory {
  std::vector<double> y;                 // y_0 .. y_{K+1}
  std::vector<std::vector<double>> phi;  // phi_0 .. phi_K
  std::size_t bound_violations = 0;
};

// u holds u_0..u_K and w holds w_1..w_{K+1}.
Trajectory simulate(const ARXModel& model, std::span<const double> u,
                    std::span<const double> w, double y0 = 0.0);

Eigen::MatrixXd companion_matrix(const ARXModel& model);
// Roots of z^p - a_1 z^(p-1) - ... - a_p via the companion eigenvalues.
// Throws PrecisionError if a root leaves a relative residual above 1e-9.
std::vector<std::complex<double>> companion_roots(const ARXModel& model);
double spectral_radius(const ARXModel& model);
// Operator 2-norm.
double spectral_norm(const Eigen::MatrixXd& m);

struct DecayConstant {
  double c = 1.0;
  std::size_t r = 0;  // last k with ||A^k|| > ((rho + 1) / 2)^k
  double rho = 0.0;
};
// c = max{1, max_{k <= r} ||A^k|| (2 / (rho + 1))^k}. Throws DomainError
// when rho >= 1.
DecayConstant decay_constant(const ARXModel& model);

double compute_G1(const ARXModel& model);
double compute_G1(const ARXModel& model, const DecayConstant& dc);
double compute_G2(double G1, double n, double gamma, double delta, double theta_bar);

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ParamReport {
  // Inputs.
  ARXModel model;
  std::size_t n = 0;
  mpz_class modulus;
  double delta = 0, sigma = 0, gamma = 0, alpha = 0, theta_bar = 0;
  // Evaluated constants.
  double rho = 0, c = 0, G1 = 0, G2 = 0;
  std::size_t r = 0;
  double alpha_max = 0;           // 1 / (N G1^2)
  double gamma_threshold = 0;     // sigma (sqrt(2) N + 1)
  std::optional<double> theta_norm;
  std::vector<Verdict> verdicts;

  bool all_pass() const;
  const Verdict* find(const std::string& name) const;
};

// Never throws on failed conditions; each is recorded as a verdict.
ParamReport validate_params(const ARXModel& model, std::size_t n, const mpz_class& modulus,
                            double delta, double sigma, double gamma, double alpha,
                            double theta_bar, bool check_theta = true);

struct ExcitationResult {
  bool pass = false;
  double min_eigenvalue = 0.0;
  std::size_t worst_window = 0;  // start index of the worst window
  std::size_t windows = 0;
};
// Minimum eigenvalue of (1/K) sum phi phi^T over every window of K
// consecutive regressors, compared with delta.
ExcitationResult check_excitation(const std::vector<std::vector<double>>& phi, std::size_t K,
                                  double delta);

}  // namespace ckksid

#endif  // CKKSID_ARX_HPP_
