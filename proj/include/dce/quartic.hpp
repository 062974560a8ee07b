// Copyright 2026 The dce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dce/operators.hpp"

namespace dce {

struct QuarticCoefficients {
  double B = 0, C = 0, D = 0, E = 0;

  double operator()(double x) const { return (((x + B) * x + C) * x + D) * x + E; }
  double derivative(double x) const { return ((4 * x + 3 * B) * x + 2 * C) * x + D; }

  /// Root-size scale used for relative tolerances.
  double scale() const {
    return std::max({1e-300, std::abs(B), std::sqrt(std::abs(C)), std::cbrt(std::abs(D)),
                     std::sqrt(std::sqrt(std::abs(E)))});
  }
};

namespace detail {

inline std::array<double, 4> companion_roots(const QuarticCoefficients& q) {
  Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
  M(0, 0) = -q.B;
  M(0, 1) = -q.C;
  M(0, 2) = -q.D;
  M(0, 3) = -q.E;
  M(1, 0) = M(2, 1) = M(3, 2) = 1;
  Eigen::EigenSolver<Eigen::Matrix4d> es(M, false);
  std::array<double, 4> r{};
  for (int i = 0; i < 4; ++i) r[i] = es.eigenvalues()(i).real();
  std::sort(r.begin(), r.end());
  return r;
}

inline double polish_root(const QuarticCoefficients& q, double x) {
  for (int it = 0; it < 3; ++it) {
    const double f = q(x);
    const double df = q.derivative(x);
    if (df == 0 || f == 0) break;
    const double nx = x - f / df;
    if (!(std::abs(q(nx)) < std::abs(f))) break;
    x = nx;
  }
  return x;
}

}  // namespace detail

/// Real roots of L^4 + B L^3 + C L^2 + D L + E = 0 by Ferrari's method in
/// trigonometric resolvent form, ascending.
inline std::array<double, 4> ferrari_roots(double B, double C, double D, double E) {
  const QuarticCoefficients q{B, C, D, E};
  if (!std::isfinite(B) || !std::isfinite(C) || !std::isfinite(D) || !std::isfinite(E))
    throw ValidationError("ferrari_roots: non-finite coefficient");
  const double s = q.scale();
  const double p = C - 3.0 * B * B / 8.0;
  const double qq = D + 0.5 * B * (B * B / 4.0 - C);
  const double d0sq = C * C - 3.0 * B * D + 12.0 * E;
  const double d0 = std::sqrt(std::max(d0sq, 0.0));
  const double d1 = 2.0 * C * C * C - 9.0 * C * (B * D + 8.0 * E) + 27.0 * (B * B * E + D * D);

  double arg = d0 > 0 ? d1 / (2.0 * d0 * d0 * d0) : (d1 >= 0 ? 1.0 : -1.0);
  arg = std::clamp(arg, -1.0, 1.0);
  double phi = std::acos(arg) / 3.0;
  auto s_of = [&](double ph) { return std::sqrt(std::max((d0 * std::cos(ph) - p) / 6.0, 0.0)); };
  double S = s_of(phi);
  if (S < 1e-12 * s) {
    phi -= 2.0 * std::numbers::pi / 3.0;
    S = s_of(phi);
  }
  if (S < 1e-12 * s) return detail::companion_roots(q);

  const double r1 = -4.0 * S * S - 2.0 * p + qq / S;
  const double r2 = -4.0 * S * S - 2.0 * p - qq / S;
  const double tol = -1e-8 * s * s;
  if (r1 < tol || r2 < tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "ferrari_roots: complex roots for B=" << B << " C=" << C << " D=" << D << " E=" << E;
    throw NumericalError(msg.str());
  }
  const double h1 = 0.5 * std::sqrt(std::max(r1, 0.0));
  const double h2 = 0.5 * std::sqrt(std::max(r2, 0.0));
  std::array<double, 4> roots = {-B / 4 - S - h1, -B / 4 - S + h1, -B / 4 + S - h2,
                                 -B / 4 + S + h2};
  for (double& r : roots) r = detail::polish_root(q, r);
  std::sort(roots.begin(), roots.end());
  return roots;
}

inline std::array<double, 4> ferrari_roots(const QuarticCoefficients& q) {
  return ferrari_roots(q.B, q.C, q.D, q.E);
}

}  // namespace dce
