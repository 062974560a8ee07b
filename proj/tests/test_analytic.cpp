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


#include <random>

#include <gtest/gtest.h>

#include "dce/analytic.hpp"
#include "dce/experiments.hpp"
#include "dce/spectrum.hpp"

using namespace dce;

namespace {

SystemParams params(double omega0, double omega_a, double g, double h, int n_tr = 12) {
  SystemParams p;
  p.omega0 = omega0;
  p.omega_a = omega_a;
  p.g = g;
  p.h = h;
  p.eps = 0.1 * omega0;
  p.n_tr = n_tr;
  return p;
}

}  // namespace

TEST(Ferrari, KnownRoots) {
  // (L-1)(L-2)(L-3)(L-4)
  const auto r = ferrari_roots(-10, 35, -50, 24);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(r[i], i + 1.0, 1e-12);
}

TEST(Ferrari, DoubleRoots) {
  // (L-1)^2 (L+2)^2
  const auto r = ferrari_roots(2, -3, -4, 4);
  EXPECT_NEAR(r[0], -2, 1e-6);
  EXPECT_NEAR(r[1], -2, 1e-6);
  EXPECT_NEAR(r[2], 1, 1e-6);
  EXPECT_NEAR(r[3], 1, 1e-6);
}

TEST(Ferrari, ComplexRootsAreReported) {
  // L^4 + 1
  EXPECT_THROW(ferrari_roots(0, 0, 0, 1), NumericalError);
  EXPECT_THROW(ferrari_roots(0, std::nan(""), 0, 1), ValidationError);
}

TEST(Ferrari, MatchesEigensolverOnRandomM1) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const double x = u(rng), y = u(rng), z = u(rng);
    Eigen::Matrix4d M;
    M << 0, a, b, 0, a, x, 0, -c, b, 0, y, d, 0, -c, d, z;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(M, Eigen::EigenvaluesOnly);
    const auto r = ferrari_roots(detail::m1_coefficients(a, b, c, d, x, y, z));
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(r[i] - es.eigenvalues()(i)));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Subspace, ClosedFormAmplitudesAreEigenvectors) {
  for (double o0 : {0.5, 0.9, 0.99, 1.05, 1.3}) {
    const SubspaceSolution s = solve_subspace(params(o0, 1.0, 0.05, 0.05), 2, true);
    const Eigen::Matrix4d M = s.M1();
    for (int i = 0; i < 4; ++i) {
      Eigen::Vector4d v(s.phi[i][0], s.phi[i][1], s.phi[i][2], s.phi[i][3]);
      EXPECT_NEAR(v.norm(), 1.0, 1e-9);
      EXPECT_LT((M * v - s.Lambda[i] * v).norm(), 1e-8);
    }
  }
}

TEST(Subspace, PrintedAmplitudeTables) {
  for (int which : {1, 2}) {
    const int i = which == 1 ? 3 : 2;
    for (const auto& row : golden_table(which)) {
      const SubspaceSolution s = solve_subspace(params(row.omega0, 1.0, 0.05, 0.05), 2, true);
      EXPECT_LT(quartet_error(s.phi[i - 1], row.phi), 0.02) << "omega0=" << row.omega0;
    }
  }
}

TEST(Subspace, WeightsOfFirstDressedStateInDispersiveCase) {
  const SystemParams p = params(0.95, 0.6, 0.05, 0.05);
  const DressedSpectrum s = dressed_spectrum(p);
  const auto amp = s.subspace_amplitudes(s.find(1, 1), 2);
  const std::array<double, 4> printed = {-0.168, -0.977, 0.021, 0.132};
  EXPECT_LT(quartet_error(amp, printed), 0.02);
}

TEST(BlochSiegert, ShiftsScaleQuadratically) {
  for (int n : {2, 3, 4}) {
    const auto s1 = bloch_siegert_shifts(params(0.9, 1.0, 0.005, 0.05), n);
    const auto s2 = bloch_siegert_shifts(params(0.9, 1.0, 0.01, 0.05), n);
    for (auto [a, b] : {std::pair{s1.delta_0_nm2, s2.delta_0_nm2}, {s1.delta_1_nm1, s2.delta_1_nm1},
                        {s1.delta_2_nm1, s2.delta_2_nm1}, {s1.delta_3_n, s2.delta_3_n}})
      EXPECT_NEAR(b / a, 4.0, 0.2);
  }
  EXPECT_THROW(bloch_siegert_shifts(params(0.9, 1.0, 0.01, 0.05), 1), ValidationError);
}

TEST(Perturbative, EnergyErrorIsThirdOrder) {
  double cmax = 0;
  for (double g : {0.01, 0.02, 0.04}) {
    const SystemParams p = params(0.5, 0.6, g, 0.05, 15);
    const DressedSpectrum s = dressed_spectrum(p);
    for (int n = 0; n <= 2; ++n) {
      const double err = std::abs(s.energies(s.find(0, n)) - perturbative_state(p, n).lambda_0n);
      cmax = std::max(cmax, err / (g * g * g));
    }
  }
  EXPECT_LT(cmax, 100.0);
}

TEST(Perturbative, StateOverlapsNumericEigenvector) {
  const SystemParams p = params(0.5, 0.6, 0.02, 0.05, 15);
  const DressedSpectrum s = dressed_spectrum(p);
  for (int n = 0; n <= 3; ++n) {
    const RealVector v = perturbative_state(p, n).conjoint_vector(p.n_tr);
    const double ov = std::norm(s.conjoint.col(s.find(0, n)).dot(v.cast<Complex>()));
    EXPECT_GT(ov, 1 - 1e-5) << n;
  }
}

TEST(Perturbative, GuardsNearDegeneracy) {
  // omega0 = 1 with omega_a = 1: nu - D+ + D- ~ 0
  EXPECT_THROW(perturbative_state(params(1.0, 1.0, 0.05, 0.05), 2), ValidationError);
  EXPECT_NO_THROW(perturbative_state(params(1.0, 1.0, 0.05, 0.05), 0));
}

TEST(Rates, TwoExcitationRateMatchesNumeric) {
  for (double o0 : {0.8, 0.9, 1.05, 1.2}) {
    const SystemParams p = params(o0, 1.0, 0.05, 0.05, 10);
    const int i = o0 < 1 ? 3 : 2;
    const SubspaceSolution a = solve_subspace(p, 2, true);
    const DressedSpectrum s = dressed_spectrum(p);
    const int m = s.find(0, 0), l = s.subspace_state(2, i);
    const double num = std::abs(transition_rate(s, m, l, p.eps));
    EXPECT_NEAR(std::abs(analytic_rate_2exc(p, a, i)) / num, 1.0, 0.03) << o0;
    EXPECT_NEAR(analytic_resonance(p, a, i) / resonant_frequency(s, m, l), 1.0, 1e-3) << o0;
  }
}

TEST(Rates, VanishWithoutQubitCoupling) {
  SystemParams p = params(0.9, 1.0, 0.05, 0.0);
  const SubspaceSolution s = solve_subspace(p, 2, true);
  EXPECT_EQ(analytic_rate_2exc(p, s, 1), 0.0);
  p.h = 0.05;
  p.eps = 0;
  EXPECT_EQ(analytic_rate_2exc(p, solve_subspace(p, 2, true), 1), 0.0);
}
