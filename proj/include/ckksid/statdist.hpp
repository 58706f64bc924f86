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

#ifndef CKKSID_STATDIST_HPP_
#define CKKSID_STATDIST_HPP_

#include <cstddef>
#include <vector>

namespace ckksid {

// The coset scale * Z^dim + shift, enumerated by brute force (dim <= 3).
struct LatticeSpec {
  int dim = 1;
  double scale = 1.0;
  std::vector<double> shift;  // empty means the origin
  double radius = 0.0;        // 0 selects the radius automatically

  void validate() const;
  double shift_at(int i) const { return shift.empty() ? 0.0 : shift[static_cast<std::size_t>(i)]; }
};

// Enumeration radius sufficient for tail_ratio at (sigma, gamma): points
// beyond it carry less than e^-45 of both the total and the tail mass.
double required_radius(double sigma, double gamma, const LatticeSpec& lattice);

// sum_{|v| > gamma} rho(v) / sum_v rho(v) with rho(v) = exp(-|v|^2 / (2 sigma^2)).
// Throws PrecisionError when an explicit radius is too small.
double tail_ratio(double sigma, double gamma, const LatticeSpec& lattice);

// 2 exp(-gamma^2 / (2 n sigma^2)).
double banaszczyk_bound(double sigma, double gamma, int n);

struct TruncationVerdict {
  bool pass = false;
  double threshold = 0.0;  // sigma (sqrt(2) N + 1)
};
TruncationVerdict check_truncation_condition(double sigma, double gamma, double n);

// Statistical distance between DG_{gamma, L + v0}(sigma^2) + N(0, tau^2) and
// N(0, sigma^2 + tau^2) on a one-dimensional lattice. Integrates by
// Gauss-Legendre panels of width step between the sign changes of the density
// difference, then repeats at step / 2; a disagreement above tolerance raises
// PrecisionError. Returns the finer value.
double convolved_distance(double sigma, double gamma, double tau, const LatticeSpec& lattice,
                          double step = 0.01, double tolerance = 1e-10);

// sum_{u in L* \ {0}} exp(-2 pi^2 sigma^2 |u|^2) for L = scale * Z^dim.
double dual_gaussian_sum(double sigma, const LatticeSpec& lattice);

// Smallest sigma with dual_gaussian_sum(sigma) <= eps, by bisection.
double smoothing_parameter(const LatticeSpec& lattice, double eps);

// sqrt(sigma^2 + tau^2) >= 2 pi sigma tau eta.
bool smoothing_condition_holds(double sigma, double tau, double eta);

}  // namespace ckksid

#endif  // CKKSID_STATDIST_HPP_
