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

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dce/operators.hpp"

namespace dce {

/// Physical constants in units of the cavity frequency nu.
struct SystemParams {
  double nu = 1.0;
  double omega0 = 1.0;   ///< t-qubit bare frequency
  double omega_a = 1.0;  ///< ancilla frequency
  double g = 0.05;       ///< ancilla-field coupling
  double h = 0.05;       ///< t-qubit-ancilla coupling
  double eps = 0.1;      ///< modulation amplitude
  double eta = 2.0;      ///< modulation frequency
  double gamma = 0.0;
  double gamma_ph = 0.0;
  double gamma_a = 0.0;
  double gamma_ph_a = 0.0;
  double kappa = 0.0;  ///< optional cavity decay, off by default
  int n_tr = 15;

  HilbertConfig hilbert() const { return HilbertConfig{n_tr}; }

  void validate() const {
    auto check = [](double v, const char* name) {
      if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
      if (v < 0) throw ValidationError(std::string(name) + " must be >= 0");
    };
    check(nu, "nu");
    check(omega0, "omega0");
    check(omega_a, "omega_a");
    check(g, "g");
    check(h, "h");
    check(eps, "eps");
    check(eta, "eta");
    check(gamma, "gamma");
    check(gamma_ph, "gamma_ph");
    check(gamma_a, "gamma_a");
    check(gamma_ph_a, "gamma_ph_a");
    check(kappa, "kappa");
    if (nu <= 0) throw ValidationError("nu must be > 0");
    if (g >= nu) throw ValidationError("g must be < nu");
    if (h >= nu) throw ValidationError("h must be < nu");
    if (n_tr < 2) throw ValidationError("n_tr must be >= 2");
  }

  std::vector<std::string> warnings() const {
    std::vector<std::string> w;
    if (eps > 0.5 * eta) w.push_back("eps > 0.5*eta: outside the weak-modulation regime");
    return w;
  }
};

/// Sets gamma = 5e-3 g, gamma_ph = gamma/2, gamma_a = gamma/5, gamma_ph_a = gamma_ph/5.
inline SystemParams with_standard_dissipation(SystemParams p) {
  p.gamma = 5e-3 * p.g;
  p.gamma_ph = p.gamma / 2;
  p.gamma_a = p.gamma / 5;
  p.gamma_ph_a = p.gamma_ph / 5;
  return p;
}

/// Eigenbasis of the two-atom Hamiltonian in the order (gg, ge, eg, ee).
struct AtomicBasis {
  std::array<Eigen::Vector4d, 4> states;
  std::array<double, 4> lambda{};
  double w_plus = 0, w_minus = 0, d_plus = 0, d_minus = 0;
  std::array<double, 4> norm{};  ///< N_i; infinite for A1..A3 when h = 0
  double sigma01 = 0, sigma02 = 0;
  Eigen::Matrix4d sigma_x_a;  ///< <A_i|sigma_x^(a)|A_j>

  /// Rows are the states; B * v maps bare amplitudes to conjoint ones.
  Eigen::Matrix4d rows() const {
    Eigen::Matrix4d B;
    for (int i = 0; i < 4; ++i) B.row(i) = states[i].transpose();
    return B;
  }
};

inline Eigen::Matrix4d two_atom_hamiltonian(const SystemParams& p) {
  Eigen::Matrix4d H = Eigen::Matrix4d::Zero();
  H(1, 1) = p.omega_a;
  H(2, 2) = p.omega0;
  H(3, 3) = p.omega0 + p.omega_a;
  H(0, 3) = H(3, 0) = p.h;
  H(1, 2) = H(2, 1) = p.h;
  return H;
}

inline Eigen::Matrix4d ancilla_flip() {
  Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
  S(0, 1) = S(1, 0) = 1;
  S(2, 3) = S(3, 2) = 1;
  return S;
}

inline AtomicBasis conjoint_basis(const SystemParams& p) {
  AtomicBasis b;
  const double h = p.h;
  const double wp = 0.5 * (p.omega_a + p.omega0);
  const double wm = 0.5 * (p.omega_a - p.omega0);
  const double dp = std::hypot(wp, h);
  const double dm = std::hypot(wm, h);
  b.w_plus = wp;
  b.w_minus = wm;
  b.d_plus = dp;
  b.d_minus = dm;

  const double sp = wp + dp;
  const double wp_minus_dp = sp > 0 ? -h * h / sp : 0.0;
  b.lambda = {wp_minus_dp, wp - dm, wp + dm, wp + dp};

  auto unit = [](Eigen::Vector4d v) { return Eigen::Vector4d(v / v.norm()); };
  const double inf = std::numeric_limits<double>::infinity();

  if (sp > 0) {
    b.states[0] = unit(Eigen::Vector4d(sp, 0, 0, -h));
    b.states[3] = unit(Eigen::Vector4d(-h, 0, 0, -sp));
  } else {
    b.states[0] = Eigen::Vector4d(1, 0, 0, 0);
    b.states[3] = Eigen::Vector4d(0, 0, 0, -1);
  }
  b.norm[0] = 1.0 / std::hypot(sp, h);
  b.norm[3] = h > 0 ? 1.0 / std::hypot(wp_minus_dp, h) : inf;

  if (h == 0 && wm == 0) {
    const double r = 1.0 / std::sqrt(2.0);
    b.states[1] = Eigen::Vector4d(0, -r, r, 0);
    b.states[2] = Eigen::Vector4d(0, r, r, 0);
  } else if (wm >= 0) {
    const double s = wm + dm;
    b.states[1] = unit(Eigen::Vector4d(0, -h, s, 0));
    b.states[2] = unit(Eigen::Vector4d(0, s, h, 0));
  } else {
    const double s = dm - wm;
    b.states[1] = unit(Eigen::Vector4d(0, -s, h, 0));
    b.states[2] = unit(Eigen::Vector4d(0, h, s, 0));
  }
  if (h > 0) {
    const double wm_minus_dm = wm >= 0 ? -h * h / (wm + dm) : wm - dm;
    const double wm_plus_dm = wm >= 0 ? wm + dm : h * h / (dm - wm);
    b.norm[1] = 1.0 / std::hypot(wm_minus_dm, h);
    b.norm[2] = 1.0 / std::hypot(wm_plus_dm, h);
  } else {
    b.norm[1] = b.norm[2] = inf;
  }

  const Eigen::Matrix4d A = b.rows();
  b.sigma_x_a = A * ancilla_flip() * A.transpose();
  b.sigma01 = b.sigma_x_a(0, 1);
  b.sigma02 = b.sigma_x_a(0, 2);
  return b;
}

/// Real orthogonal U with U(bare, conjoint): column k (n_tr+1) + n is |A_k^n>.
inline RealMatrix conjoint_transform(const AtomicBasis& b, int n_tr) {
  const int f = n_tr + 1;
  RealMatrix U = RealMatrix::Zero(4 * f, 4 * f);
  for (int k = 0; k < 4; ++k)
    for (int q = 0; q < 4; ++q)
      if (b.states[k](q) != 0.0)
        for (int n = 0; n < f; ++n) U(q * f + n, k * f + n) = b.states[k](q);
  return U;
}

inline int conjoint_index(int k, int n, int n_tr) { return k * (n_tr + 1) + n; }

enum class Assembly { bare, conjoint };

/// Builds the static and modulated Hamiltonians; optionally drops the
/// ancilla-field counter-rotating term g(a sigma_-^(a) + h.c.).
class HamiltonianBuilder {
 public:
  explicit HamiltonianBuilder(SystemParams p, bool rwa = false) : p_(p), rwa_(rwa) {
    p_.validate();
  }

  const SystemParams& params() const { return p_; }
  bool rwa() const { return rwa_; }

  ComplexMatrix H0(Assembly how = Assembly::bare) const {
    return how == Assembly::bare ? bare() : conjoint();
  }

  /// sigma_e of the t-qubit, embedded.
  ComplexMatrix drive() const {
    const auto q = qubit_operators();
    return tensor3(q.sigma_e, q.identity, ComplexMatrix::Identity(p_.n_tr + 1, p_.n_tr + 1));
  }

  ComplexMatrix H(double t) const { return H0() + p_.eps * std::sin(p_.eta * t) * drive(); }

 private:
  ComplexMatrix bare() const {
    const auto q = qubit_operators();
    const int f = p_.n_tr + 1;
    const ComplexMatrix If = ComplexMatrix::Identity(f, f);
    const ComplexMatrix a = fock_annihilation(p_.n_tr);
    const ComplexMatrix ad = a.adjoint();
    ComplexMatrix H = p_.nu * tensor3(q.identity, q.identity, fock_number(p_.n_tr));
    H += p_.omega0 * tensor3(q.sigma_e, q.identity, If);
    H += p_.omega_a * tensor3(q.identity, q.sigma_e, If);
    H += p_.h * tensor3(q.sigma_x, q.sigma_x, If);
    if (rwa_)
      H += p_.g * (tensor3(q.identity, q.sigma_minus, ad) + tensor3(q.identity, q.sigma_plus, a));
    else
      H += p_.g * tensor3(q.identity, q.sigma_x, a + ad);
    return H;
  }

  ComplexMatrix conjoint() const {
    const AtomicBasis b = conjoint_basis(p_);
    const int f = p_.n_tr + 1;
    RealMatrix Hc = RealMatrix::Zero(4 * f, 4 * f);
    Eigen::Matrix4d coupling = b.sigma_x_a;
    Eigen::Matrix4d lower, raise;
    if (rwa_) {
      // a sigma_+^(a) + a^dag sigma_-^(a) in the conjoint basis
      Eigen::Matrix4d sm = Eigen::Matrix4d::Zero();
      sm(0, 1) = sm(2, 3) = 1;
      const Eigen::Matrix4d A = b.rows();
      raise = A * sm.transpose() * A.transpose();
      lower = A * sm * A.transpose();
    }
    for (int k = 0; k < 4; ++k)
      for (int n = 0; n < f; ++n) Hc(k * f + n, k * f + n) = p_.nu * n + b.lambda[k];
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j)
        for (int n = 0; n + 1 < f; ++n) {
          const double s = std::sqrt(static_cast<double>(n + 1));
          // <A_k, n| a |A_j, n+1> and <A_k, n+1| a^dag |A_j, n>
          const double c_a = rwa_ ? raise(k, j) : coupling(k, j);
          const double c_ad = rwa_ ? lower(k, j) : coupling(k, j);
          Hc(k * f + n, j * f + n + 1) += p_.g * s * c_a;
          Hc(k * f + n + 1, j * f + n) += p_.g * s * c_ad;
        }
    const RealMatrix U = conjoint_transform(b, p_.n_tr);
    return (U * Hc * U.transpose()).cast<Complex>();
  }

  SystemParams p_;
  bool rwa_;
};

inline ComplexMatrix build_H0(const SystemParams& p, Assembly how = Assembly::bare) {
  return HamiltonianBuilder(p).H0(how);
}

inline ComplexMatrix build_H(const SystemParams& p, double t) { return HamiltonianBuilder(p).H(t); }

/// Same parameters with g(a sigma_-^(a) + a^dag sigma_+^(a)) removed.
inline HamiltonianBuilder rwa_toggle(const SystemParams& p) { return HamiltonianBuilder(p, true); }

struct Dissipator {
  std::string name;
  double rate = 0;
  ComplexMatrix jump;
};

/// Zero-temperature channels; the cavity channel appears only when kappa > 0.
inline std::vector<Dissipator> lindblad_dissipators(const SystemParams& p) {
  for (double r : {p.gamma, p.gamma_ph, p.gamma_a, p.gamma_ph_a, p.kappa})
    if (!(r >= 0)) throw ValidationError("dissipation rates must be >= 0");
  const auto q = qubit_operators();
  const int f = p.n_tr + 1;
  const ComplexMatrix If = ComplexMatrix::Identity(f, f);
  std::vector<Dissipator> out;
  out.push_back({"decay_t", p.gamma, tensor3(q.sigma_minus, q.identity, If)});
  out.push_back({"dephasing_t", p.gamma_ph / 2, tensor3(q.sigma_z, q.identity, If)});
  out.push_back({"decay_a", p.gamma_a, tensor3(q.identity, q.sigma_minus, If)});
  out.push_back({"dephasing_a", p.gamma_ph_a / 2, tensor3(q.identity, q.sigma_z, If)});
  if (p.kappa > 0)
    out.push_back({"cavity", p.kappa, tensor3(q.identity, q.identity, fock_annihilation(p.n_tr))});
  return out;
}

}  // namespace dce
