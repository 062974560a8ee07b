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
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Sparse>

#include "dce/operators.hpp"

namespace dce {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

inline SparseMatrix to_sparse(const ComplexMatrix& M, double drop = 0.0) {
  SparseMatrix S = M.sparseView(1.0, drop);
  S.makeCompressed();
  return S;
}

inline SparseMatrix sparse_identity(Eigen::Index n) {
  SparseMatrix I(n, n);
  I.setIdentity();
  return I;
}

inline SparseMatrix sparse_kron(const SparseMatrix& A, const SparseMatrix& B) {
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(static_cast<std::size_t>(A.nonZeros() * B.nonZeros()));
  for (int ka = 0; ka < A.outerSize(); ++ka)
    for (SparseMatrix::InnerIterator ia(A, ka); ia; ++ia)
      for (int kb = 0; kb < B.outerSize(); ++kb)
        for (SparseMatrix::InnerIterator ib(B, kb); ib; ++ib)
          t.emplace_back(ia.row() * B.rows() + ib.row(), ia.col() * B.cols() + ib.col(),
                         ia.value() * ib.value());
  SparseMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

/// Fixed-step RK4 for y' = (A0 + eps sin(eta t) A1) y on the grid t = j h,
/// h = (2 pi / eta) / N. Whole periods can be advanced with the one-period
/// propagator, which RK4's linearity makes identical to stepping.
class PeriodicRK4 {
 public:
  PeriodicRK4(SparseMatrix A0, SparseMatrix A1, double eps, double eta, int steps_per_period)
      : A0_(std::move(A0)), A1_(std::move(A1)), eps_(eps), eta_(eta), N_(steps_per_period) {
    if (!(eta > 0)) throw ValidationError("modulation frequency must be > 0");
    if (N_ < 1) throw ValidationError("steps per period must be >= 1");
    T_ = 2 * std::numbers::pi / eta_;
    h_ = T_ / N_;
  }

  double step_size() const { return h_; }
  double period() const { return T_; }
  int steps_per_period() const { return N_; }
  long dim() const { return A0_.rows(); }

  template <class Y>
  void rhs(double t, const Y& y, Y& out) const {
    out.noalias() = A0_ * y;
    const double f = eps_ * std::sin(eta_ * t);
    if (f != 0.0) out.noalias() += Complex(f) * (A1_ * y);
  }

  /// One step from t = j h.
  template <class Y>
  void step(Y& y, long j, Y& k, Y& acc, Y& tmp) const {
    const double t = static_cast<double>(j % N_) * h_;
    rhs(t, y, k);
    acc = k;
    tmp = y + (0.5 * h_) * k;
    rhs(t + 0.5 * h_, tmp, k);
    acc += 2.0 * k;
    tmp = y + (0.5 * h_) * k;
    rhs(t + 0.5 * h_, tmp, k);
    acc += 2.0 * k;
    tmp = y + h_ * k;
    rhs(t + h_, tmp, k);
    acc += k;
    y += (h_ / 6.0) * acc;
  }

  /// Builds the one-period propagator column block by column block.
  void build_period_map(int block = 64) {
    const long n = dim();
    P_ = ComplexMatrix(n, n);
    for (long c0 = 0; c0 < n; c0 += block) {
      const long w = std::min<long>(block, n - c0);
      ComplexMatrix Y = ComplexMatrix::Zero(n, w);
      for (long c = 0; c < w; ++c) Y(c0 + c, c) = 1.0;
      ComplexMatrix k(n, w), acc(n, w), tmp(n, w);
      for (long j = 0; j < N_; ++j) step(Y, j, k, acc, tmp);
      P_->middleCols(c0, w) = Y;
    }
  }

  bool has_period_map() const { return P_.has_value(); }

  /// Advances y from grid index j0 to j1.
  void advance(ComplexVector& y, long j0, long j1) const {
    ComplexVector k(y.size()), acc(y.size()), tmp(y.size());
    long j = j0;
    while (j < j1) {
      if (P_ && j % N_ == 0 && j + N_ <= j1) {
        tmp.noalias() = (*P_) * y;
        y.swap(tmp);
        j += N_;
      } else {
        step(y, j, k, acc, tmp);
        ++j;
      }
    }
  }

 private:
  SparseMatrix A0_, A1_;
  double eps_, eta_;
  int N_;
  double T_ = 0, h_ = 0;
  std::optional<ComplexMatrix> P_;
};

/// Steps per period keeping RK4 amplitude and phase error over t_end below
/// `budget` for frequencies up to rho: |R(i h w)|^2 - 1 ~ -(h w)^6 / 72 and
/// arg R(i h w) - h w ~ (h w)^5 / 120.
inline int steps_for_drift(double period, double rho, double t_end, double budget = 1e-7,
                           int minimum = 200) {
  if (rho <= 0 || t_end <= 0) return minimum;
  const double h_amp = std::pow(72.0 * budget / (t_end * std::pow(rho, 6)), 0.2);
  const double h_phase = std::pow(120.0 * budget / (t_end * std::pow(rho, 5)), 0.25);
  const double h = std::min(h_amp, h_phase);
  return std::max(minimum, static_cast<int>(std::ceil(period / h)));
}

/// Steps per period with h rho <= hr.
inline int steps_for_phase(double period, double rho, double hr = 0.1, int minimum = 200) {
  return std::max(minimum, static_cast<int>(std::ceil(period * rho / hr)));
}

}  // namespace dce
