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


#include <gtest/gtest.h>

#include "dce/spectrum.hpp"

using namespace dce;

namespace {

SystemParams params(double omega0, double omega_a, double g, double h, int n_tr = 10) {
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

TEST(Spectrum, UncoupledCavityIsExactlyLabeled) {
  const SystemParams p = params(0.95, 0.6, 0.0, 0.05, 6);
  const DressedSpectrum s = dressed_spectrum(p, {false});
  const AtomicBasis b = conjoint_basis(p);
  for (int l = 0; l < s.size(); ++l) {
    const auto& lab = s.labels[l];
    EXPECT_NEAR(lab.overlap, 1.0, 1e-12);
    EXPECT_NEAR(s.energies(l), p.nu * lab.n + b.lambda[lab.k], 1e-12);
  }
}

TEST(Spectrum, EigenpairsAndLabels) {
  const SystemParams p = params(0.95, 0.6, 0.05, 0.05);
  const DressedSpectrum s = dressed_spectrum(p);
  const ComplexMatrix H = HamiltonianBuilder(p).H0();
  EXPECT_LT(max_abs(H * s.states - s.states * s.energies.asDiagonal()), 1e-10 * max_abs(H));
  EXPECT_EQ(s.find(0, 0), 0);
  EXPECT_EQ(s.labels[0].str(), "A0,0");
  EXPECT_GE(s.find(1, 1), 0);
  EXPECT_EQ(s.find(3, 40), -1);
}

TEST(Spectrum, TruncationCheck) {
  EXPECT_LT(truncation_error(dressed_spectrum(params(0.95, 0.6, 0.05, 0.05))), 1e-6);
  EXPECT_THROW(dressed_spectrum(params(4.057, 0.6, 0.3, 0.2, 4)), NumericalError);
}

TEST(Spectrum, TransitionRateSymmetry) {
  const SystemParams p = params(0.95, 0.6, 0.05, 0.05);
  const DressedSpectrum s = dressed_spectrum(p);
  const int m = s.find(0, 0), l = s.find(1, 1);
  EXPECT_NEAR(std::abs(transition_rate(s, m, l, p.eps)), std::abs(transition_rate(s, l, m, p.eps)),
              1e-15);
  EXPECT_NEAR(std::abs(transition_rate(s, m, l, p.eps)), 1.93e-4, 0.05 * 1.93e-4);
  EXPECT_NEAR(resonant_frequency(s, m, l), 1.586, 1e-3);
  EXPECT_THROW(transition_rate(s, m, m, p.eps), ValidationError);
  EXPECT_THROW(transition_rate(s, m, s.size(), p.eps), ValidationError);
}

TEST(Spectrum, ZeroCouplingGivesZeroRate) {
  const SystemParams p = params(0.95, 0.6, 0.05, 0.0);
  const DressedSpectrum s = dressed_spectrum(p);
  EXPECT_LT(std::abs(transition_rate(s, s.find(0, 0), s.find(0, 2), p.eps)), 1e-14);
}

TEST(Spectrum, TransitionTableCoversPairs) {
  const DressedSpectrum s = dressed_spectrum(params(0.95, 0.6, 0.05, 0.05));
  const auto t = transition_table(s, 0.1, 5);
  EXPECT_EQ(t.rows.size(), 20u);
}

TEST(Refs, Parsing) {
  EXPECT_EQ(parse_state_ref("A0,4").str(), "A0,4");
  EXPECT_EQ(parse_state_ref("A2_1").id(), "A2_1");
  EXPECT_EQ(parse_state_ref("phi2,3").kind, StateRef::subspace);
  EXPECT_EQ(parse_state_ref("ground").kind, StateRef::ground);
  EXPECT_THROW(parse_state_ref("B0,0"), ValidationError);
  EXPECT_THROW(parse_state_ref("A5,0"), ValidationError);
  EXPECT_THROW(parse_state_ref("phi1,1"), ValidationError);
  EXPECT_EQ(parse_transition("A0,0:A1,1").id(), "A0_0->A1_1");
  EXPECT_THROW(parse_transition("A0,0"), ValidationError);
}

TEST(Grid, Parsing) {
  const auto g = parse_grid("0.6:1.4:0.1");
  ASSERT_EQ(g.size(), 9u);
  EXPECT_NEAR(g.back(), 1.4, 1e-12);
  EXPECT_THROW(parse_grid("1:0:0.1"), ValidationError);
  EXPECT_THROW(parse_grid("0:1"), ValidationError);
  EXPECT_THROW(parse_grid("0:1:x"), ValidationError);
}

TEST(Scan, MatchesPointwiseEvaluationAndIsDeterministic) {
  SystemParams base = params(1.0, 0.6, 0.05, 0.05, 8);
  const auto grid = parse_grid("0.90:1.00:0.01");
  const std::vector<TransitionSpec> trs = {parse_transition("A0,0:A1,1"), parse_transition("A0,0:A0,2")};
  ScanOptions o;
  o.jobs = 3;
  o.eps_follows_omega0 = true;
  const auto rows = scan_omega0(base, grid, trs, o);
  ASSERT_EQ(rows.size(), grid.size() * 2);
  o.jobs = 1;
  const auto again = scan_omega0(base, grid, trs, o);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].rate, again[i].rate);
    EXPECT_EQ(rows[i].flag, again[i].flag);
  }
  base.omega0 = grid[3];
  base.eps = 0.1 * grid[3];
  const DressedSpectrum s = dressed_spectrum(base);
  EXPECT_DOUBLE_EQ(rows[6].rate, std::abs(transition_rate(s, s.find(0, 0), s.find(1, 1), base.eps)));
  EXPECT_THROW(scan_omega0(base, {1.0, 0.9}, trs), ValidationError);
}

TEST(Scan, RwaHamiltonianChangesHighOrderRates) {
  SystemParams base = params(3.12, 0.6, 0.2, 0.1, 20);
  ScanOptions o;
  o.eps_follows_omega0 = true;
  const auto full = scan_omega0(base, {3.12}, {parse_transition("A0,0:A0,4")}, o);
  o.rwa = true;
  const auto rwa = scan_omega0(base, {3.12}, {parse_transition("A0,0:A0,4")}, o);
  EXPECT_GT(full[0].rate, 10 * rwa[0].rate);
}
