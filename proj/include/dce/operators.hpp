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
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dce {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Bad input: parameters, shapes, labels, config text.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical check failed (residuals, drift, truncation convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated Hilbert space of t-qubit x ancilla x field.
struct HilbertConfig {
  int n_tr = 15;  ///< largest retained Fock index

  int fock_dim() const { return n_tr + 1; }
  int dim() const { return 4 * (n_tr + 1); }

  /// Index of |q, q_a, n> with q, q_a in {0 = g, 1 = e}.
  int index(int q, int qa, int n) const {
    if (q < 0 || q > 1 || qa < 0 || qa > 1 || n < 0 || n > n_tr)
      throw ValidationError("basis index out of range");
    return (q * 2 + qa) * (n_tr + 1) + n;
  }
};

inline ComplexMatrix fock_annihilation(int n_tr) {
  if (n_tr < 1) throw ValidationError("fock_annihilation: n_tr must be >= 1");
  ComplexMatrix a = ComplexMatrix::Zero(n_tr + 1, n_tr + 1);
  for (int n = 1; n <= n_tr; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline ComplexMatrix fock_number(int n_tr) {
  ComplexMatrix m = ComplexMatrix::Zero(n_tr + 1, n_tr + 1);
  for (int n = 0; n <= n_tr; ++n) m(n, n) = static_cast<double>(n);
  return m;
}

/// Single-qubit operators in the ordered basis (|g>, |e>).
struct QubitOperators {
  ComplexMatrix sigma_e;
  ComplexMatrix sigma_z;
  ComplexMatrix sigma_minus;
  ComplexMatrix sigma_plus;
  ComplexMatrix sigma_x;
  ComplexMatrix identity;
};

inline QubitOperators qubit_operators() {
  QubitOperators q;
  q.sigma_e = ComplexMatrix::Zero(2, 2);
  q.sigma_e(1, 1) = 1.0;
  q.sigma_z = ComplexMatrix::Zero(2, 2);
  q.sigma_z(0, 0) = -1.0;
  q.sigma_z(1, 1) = 1.0;
  q.sigma_minus = ComplexMatrix::Zero(2, 2);
  q.sigma_minus(0, 1) = 1.0;
  q.sigma_plus = q.sigma_minus.adjoint();
  q.sigma_x = q.sigma_plus + q.sigma_minus;
  q.identity = ComplexMatrix::Identity(2, 2);
  return q;
}

template <class DerivedA, class DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& B) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(A.rows() * B.rows(),
                                                            A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

/// op_t (x) op_a (x) op_f, t-qubit outermost.
inline ComplexMatrix tensor3(const ComplexMatrix& op_t, const ComplexMatrix& op_a,
                             const ComplexMatrix& op_f) {
  if (op_t.rows() != 2 || op_t.cols() != 2 || op_a.rows() != 2 || op_a.cols() != 2)
    throw ValidationError("tensor3: qubit factors must be 2x2");
  if (op_f.rows() != op_f.cols() || op_f.rows() < 1)
    throw ValidationError("tensor3: field factor must be square");
  return kron(kron(op_t, op_a), op_f);
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

template <class Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& M, double rel_tol = 1e-12) {
  if (M.rows() != M.cols()) return false;
  if (!M.allFinite()) return false;
  const double scale = max_abs(M);
  return max_abs(M - M.adjoint()) <= rel_tol * scale;
}

struct EigenDecomposition {
  RealVector values;      ///< ascending
  ComplexMatrix vectors;  ///< orthonormal columns
};

namespace detail {

template <class Vec>
Eigen::Index dominant_index(const Vec& v) {
  Eigen::Index best = 0;
  double m = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > m * (1.0 + 1e-12)) {
      m = a;
      best = i;
    }
  }
  return best;
}

template <class Vec>
void fix_phase(Vec& v) {
  const Eigen::Index k = dominant_index(v);
  const auto c = v(k);
  const double a = std::abs(c);
  if (a > 0) v /= (c / a);
  v(k) = std::abs(v(k));
}

}  // namespace detail

/// Hermitian eigensolver with a deterministic ordering and phase convention.
///
/// Eigenvalues ascend; eigenvalues equal within 1e-12 max|M| are ordered by
/// the dominant basis index of their vectors. Each vector is rotated so its
/// largest-magnitude component is real and positive.
inline EigenDecomposition eig_hermitian(const ComplexMatrix& M) {
  if (M.rows() == 0) throw ValidationError("eig_hermitian: empty matrix");
  if (!is_hermitian(M)) throw ValidationError("eig_hermitian: matrix is not Hermitian");
  const double scale = max_abs(M);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(M);
  if (es.info() != Eigen::Success) throw NumericalError("eig_hermitian: solver failed");

  const Eigen::Index n = M.rows();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Eigen::Index> dom(n);
  for (Eigen::Index j = 0; j < n; ++j) dom[j] = detail::dominant_index(es.eigenvectors().col(j));
  const double tie = 1e-12 * std::max(scale, 1e-300);
  const RealVector& ev = es.eigenvalues();
  for (Eigen::Index s = 0; s < n;) {
    Eigen::Index e = s + 1;
    while (e < n && ev(e) - ev(e - 1) <= tie) ++e;
    std::stable_sort(order.begin() + s, order.begin() + e,
                     [&](Eigen::Index i, Eigen::Index j) { return dom[i] < dom[j]; });
    s = e;
  }

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = ev(order[j]);
    ComplexVector v = es.eigenvectors().col(order[j]);
    detail::fix_phase(v);
    out.vectors.col(j) = v;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const double res = max_abs(M * out.vectors.col(j) - out.values(j) * out.vectors.col(j));
    if (res > 1e-10 * scale)
      throw NumericalError("eig_hermitian: residual " + std::to_string(res) + " exceeds tolerance");
  }
  return out;
}

}  // namespace dce
