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

#include "ckksid/statdist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ckksid/error.hpp"

namespace ckksid {

namespace {

// e^-45 headroom beyond the truncation radius.
constexpr double kTailExponent = 45.0;
// Above this the tail mass underflows long double.
constexpr long double kUnderflowExponent = 11000.0L;
constexpr long kMaxEnumeration = 50'000'000;

template <typename F>
void ForEachPoint(const LatticeSpec& lat, double radius, F&& f) {
  long lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  long total = 1;
  for (int i = 0; i < lat.dim; ++i) {
    const double s = lat.shift_at(i);
    lo[i] = static_cast<long>(std::floor((-radius - s) / lat.scale));
    hi[i] = static_cast<long>(std::ceil((radius - s) / lat.scale));
    total *= hi[i] - lo[i] + 1;
  }
  if (total > kMaxEnumeration) throw ParameterError("lattice enumeration too large");
  const long double r2 = static_cast<long double>(radius) * radius;
  std::array<long, 3> k{lo[0], lo[1], lo[2]};
  for (;;) {
    long double norm2 = 0;
    for (int i = 0; i < lat.dim; ++i) {
      const long double v = static_cast<long double>(lat.scale) * k[i] + lat.shift_at(i);
      norm2 += v * v;
    }
    if (norm2 <= r2) f(norm2);
    int i = 0;
    while (i < lat.dim && ++k[i] > hi[i]) {
      k[i] = lo[i];
      ++i;
    }
    if (i == lat.dim) break;
  }
}

// 5-point Gauss-Legendre on [a, b].
template <typename F>
long double GaussLegendre5(F&& f, long double a, long double b) {
  static constexpr long double kNodes[5] = {0.0L, -0.5384693101056830910363144L,
                                            0.5384693101056830910363144L,
                                            -0.9061798459386639927976269L,
                                            0.9061798459386639927976269L};
  static constexpr long double kWeights[5] = {0.5688888888888888888888889L,
                                              0.4786286704993664680412915L,
                                              0.4786286704993664680412915L,
                                              0.2369268850562616587949874L,
                                              0.2369268850562616587949874L};
  const long double mid = (a + b) / 2, half = (b - a) / 2;
  long double acc = 0;
  for (int i = 0; i < 5; ++i) acc += kWeights[i] * f(mid + half * kNodes[i]);
  return acc * half;
}

struct ConvolvedDensity {
  std::vector<long double> points;   // sorted lattice points with |v| <= gamma
  std::vector<long double> weights;  // truncated DG probabilities
  long double tau, r, scale;

  long double difference(long double x) const {
    // W1(x) - phi_r(x)
    const long double window = 12.0L * tau;
    const auto lo = std::lower_bound(points.begin(), points.end(), x - window);
    const auto hi = std::upper_bound(points.begin(), points.end(), x + window);
    long double w1 = 0;
    for (auto it = lo; it != hi; ++it) {
      const long double d = x - *it;
      w1 += weights[static_cast<std::size_t>(it - points.begin())] *
            std::exp(-d * d / (2 * tau * tau));
    }
    const long double sqrt_2pi = std::sqrt(2.0L * std::numbers::pi_v<long double>);
    w1 /= tau * sqrt_2pi;
    const long double g = std::exp(-x * x / (2 * r * r)) / (r * sqrt_2pi);
    return w1 - g;
  }
};

long double IntegrateAbs(const ConvolvedDensity& dens, long double bound, long double step) {
  const long cells = static_cast<long>(std::ceil(2 * bound / step));
  const long double h = 2 * bound / cells;
  auto d = [&](long double x) { return dens.difference(x); };
  long double total = 0, segment = 0;
  long double x0 = -bound, d0 = d(x0);
  for (long c = 0; c < cells; ++c) {
    const long double x1 = -bound + (c + 1) * h;
    const long double d1 = d(x1);
    if ((d0 < 0) != (d1 < 0) && d0 != 0 && d1 != 0) {
      // Bisect to the sign change, then close the current segment there.
      long double a = x0, b = x1, da = d0;
      for (int it = 0; it < 80; ++it) {
        const long double m = (a + b) / 2, dm = d(m);
        if ((dm < 0) == (da < 0)) {
          a = m;
          da = dm;
        } else {
          b = m;
        }
      }
      const long double root = (a + b) / 2;
      segment += GaussLegendre5(d, x0, root);
      total += std::fabs(segment);
      segment = GaussLegendre5(d, root, x1);
    } else {
      segment += GaussLegendre5(d, x0, x1);
    }
    x0 = x1;
    d0 = d1;
  }
  total += std::fabs(segment);
  return total / 2;
}

}  // namespace

void LatticeSpec::validate() const {
  if (dim < 1 || dim > 3) throw ParameterError("lattice dimension must be 1..3");
  if (!(scale > 0.0)) throw ParameterError("lattice scale must be positive");
  if (!shift.empty() && shift.size() != static_cast<std::size_t>(dim)) {
    throw ParameterError("shift length must equal the lattice dimension");
  }
  if (radius < 0.0) throw ParameterError("radius must be non-negative");
}

double required_radius(double sigma, double gamma, const LatticeSpec& lattice) {
  const double g = std::max(gamma, 0.0);
  return std::sqrt(g * g + 2.0 * sigma * sigma * kTailExponent) +
         lattice.scale * std::sqrt(static_cast<double>(lattice.dim));
}

double tail_ratio(double sigma, double gamma, const LatticeSpec& lattice) {
  lattice.validate();
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (static_cast<long double>(gamma) * gamma / (2.0L * sigma * sigma) > kUnderflowExponent) {
    return 0.0;
  }
  const double needed = required_radius(sigma, gamma, lattice);
  if (lattice.radius > 0.0 && lattice.radius < needed) {
    throw PrecisionError("enumeration radius too small for the requested tail");
  }
  const double radius = lattice.radius > 0.0 ? lattice.radius : needed;
  const long double two_var = 2.0L * sigma * sigma;
  const long double g2 = static_cast<long double>(gamma) * gamma;
  long double tail = 0, total = 0;
  ForEachPoint(lattice, radius, [&](long double norm2) {
    const long double w = std::exp(-norm2 / two_var);
    total += w;
    if (norm2 > g2) tail += w;
  });
  return static_cast<double>(tail / total);
}

double banaszczyk_bound(double sigma, double gamma, int n) {
  if (n < 1) throw ParameterError("dimension must be >= 1");
  return 2.0 * std::exp(-gamma * gamma / (2.0 * n * sigma * sigma));
}

TruncationVerdict check_truncation_condition(double sigma, double gamma, double n) {
  TruncationVerdict v;
  v.threshold = sigma * (std::numbers::sqrt2 * n + 1.0);
  v.pass = gamma >= v.threshold;
  return v;
}

double convolved_distance(double sigma, double gamma, double tau, const LatticeSpec& lattice,
                          double step, double tolerance) {
  lattice.validate();
  if (lattice.dim != 1) throw ParameterError("convolved distance supports 1-D lattices only");
  if (!(sigma > 0.0) || !(tau > 0.0) || !(gamma > 0.0)) {
    throw ParameterError("sigma, tau and gamma must be positive");
  }
  if (!(step > 0.0)) throw ParameterError("quadrature step must be positive");
  ConvolvedDensity dens;
  dens.tau = tau;
  dens.r = std::sqrt(static_cast<long double>(sigma) * sigma + static_cast<long double>(tau) * tau);
  dens.scale = lattice.scale;
  // Lattice points whose weight is below e^-45 of the peak do not matter.
  const double support = std::min(gamma, sigma * std::sqrt(2.0 * kTailExponent) + lattice.scale);
  const long double two_var = 2.0L * sigma * sigma;
  const double s = lattice.shift_at(0);
  const long lo = static_cast<long>(std::floor((-support - s) / lattice.scale));
  const long hi = static_cast<long>(std::ceil((support - s) / lattice.scale));
  long double z = 0;
  for (long k = lo; k <= hi; ++k) {
    const long double v = static_cast<long double>(lattice.scale) * k + s;
    if (std::fabs(v) > gamma) continue;
    const long double w = std::exp(-v * v / two_var);
    dens.points.push_back(v);
    dens.weights.push_back(w);
    z += w;
  }
  if (dens.points.empty()) throw ParameterError("no lattice point within gamma");
  for (auto& w : dens.weights) w /= z;
  const long double bound = support + 12.0L * dens.r;
  const long double coarse = IntegrateAbs(dens, bound, step);
  const long double fine = IntegrateAbs(dens, bound, step / 2);
  if (std::fabs(coarse - fine) > tolerance) {
    throw PrecisionError("quadrature step too coarse for the requested tolerance");
  }
  return static_cast<double>(fine);
}

double dual_gaussian_sum(double sigma, const LatticeSpec& lattice) {
  lattice.validate();
  // Dual of scale * Z^n is (1 / scale) Z^n; terms beyond e^-60 are dropped.
  const double dual = 1.0 / lattice.scale;
  const long double c = 2.0L * std::numbers::pi_v<long double> * std::numbers::pi_v<long double> *
                        sigma * sigma * dual * dual;
  const long kmax = std::max(1L, static_cast<long>(std::ceil(std::sqrt(60.0L / c))));
  long double total = 0;
  std::array<long, 3> k{-kmax, -kmax, -kmax};
  for (;;) {
    long double norm2 = 0;
    bool zero = true;
    for (int i = 0; i < lattice.dim; ++i) {
      norm2 += static_cast<long double>(k[i]) * k[i];
      zero = zero && k[i] == 0;
    }
    if (!zero) total += std::exp(-c * norm2);
    int i = 0;
    while (i < lattice.dim && ++k[i] > kmax) {
      k[i] = -kmax;
      ++i;
    }
    if (i == lattice.dim) break;
  }
  return static_cast<double>(total);
}

double smoothing_parameter(const LatticeSpec& lattice, double eps) {
  lattice.validate();
  if (!(eps > 0.0)) throw ParameterError("epsilon must be positive");
  double hi = lattice.scale;
  while (dual_gaussian_sum(hi, lattice) > eps) hi *= 2;
  double lo = hi / 2;
  while (dual_gaussian_sum(lo, lattice) <= eps) {
    if (lo < 1e-3 * lattice.scale) throw PrecisionError("epsilon too large to bracket");
    lo /= 2;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = (lo + hi) / 2;
    if (dual_gaussian_sum(mid, lattice) <= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

bool smoothing_condition_holds(double sigma, double tau, double eta) {
  return std::sqrt(sigma * sigma + tau * tau) >= 2.0 * std::numbers::pi * sigma * tau * eta;
}

}  // namespace ckksid
