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

#include "dce/operators.hpp"

using namespace dce;

TEST(Fock, CommutatorIsIdentityBelowCutoff) {
  const int n = 6;
  const ComplexMatrix a = fock_annihilation(n);
  const ComplexMatrix c = a * a.adjoint() - a.adjoint() * a;
  for (int i = 0; i < n; ++i) EXPECT_NEAR(std::abs(c(i, i) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(c(n, n).real(), -static_cast<double>(n), 1e-14);
  EXPECT_LT(max_abs(a.adjoint() * a - fock_number(n)), 1e-14);
}

TEST(Fock, RejectsTinyCutoff) { EXPECT_THROW(fock_annihilation(0), ValidationError); }

TEST(Qubit, PauliAlgebra) {
  const auto q = qubit_operators();
  EXPECT_LT(max_abs(q.sigma_plus * q.sigma_minus - q.sigma_e), 1e-15);
  EXPECT_LT(max_abs(2.0 * q.sigma_e - q.identity - q.sigma_z), 1e-15);
  EXPECT_LT(max_abs(q.sigma_x * q.sigma_x - q.identity), 1e-15);
}

TEST(Kron, ProductStructure) {
  const auto q = qubit_operators();
  const ComplexMatrix a = fock_annihilation(3);
  const ComplexMatrix op = tensor3(q.sigma_e, q.identity, a);
  EXPECT_EQ(op.rows(), 16);
  const HilbertConfig h{3};
  EXPECT_EQ(h.dim(), 16);
  EXPECT_NEAR(std::abs(op(h.index(1, 0, 1), h.index(1, 0, 2)) - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_EQ(op(h.index(0, 0, 1), h.index(0, 0, 2)), Complex(0));
  EXPECT_THROW(tensor3(a, q.identity, a), ValidationError);
}

TEST(Eig, ResidualOrderingAndPhase) {
  std::mt19937 rng(7);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix M(12, 12);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) M(i, j) = Complex(d(rng), d(rng));
    M = (M + M.adjoint()).eval();
    const auto e = eig_hermitian(M);
    for (int i = 1; i < 12; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
    EXPECT_LT(max_abs(M * e.vectors - e.vectors * e.values.asDiagonal()), 1e-10 * max_abs(M));
    EXPECT_LT(max_abs(e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(12, 12)), 1e-12);
    for (int c = 0; c < 12; ++c) {
      Eigen::Index k;
      e.vectors.col(c).cwiseAbs().maxCoeff(&k);
      EXPECT_NEAR(e.vectors(k, c).imag(), 0.0, 1e-14);
      EXPECT_GT(e.vectors(k, c).real(), 0.0);
    }
  }
}

TEST(Eig, DegenerateTiesFollowBasisOrder) {
  ComplexMatrix M = ComplexMatrix::Zero(4, 4);
  M(0, 0) = 2;
  M(1, 1) = 1;
  M(2, 2) = 1;
  M(3, 3) = 0;
  const auto e = eig_hermitian(M);
  EXPECT_NEAR(std::abs(e.vectors(1, 1)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(2, 2)), 1.0, 1e-14);
}

TEST(Eig, RejectsNonHermitian) {
  ComplexMatrix M = ComplexMatrix::Zero(2, 2);
  M(0, 1) = 1.0;
  EXPECT_FALSE(is_hermitian(M));
  EXPECT_THROW(eig_hermitian(M), ValidationError);
}
