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
#include <string>
#include <utility>
#include <vector>

#include "dce/model.hpp"
#include "dce/quartic.hpp"

namespace dce {

// ---------------------------------------------------------------------------
// Nondegenerate perturbation theory for |A_0, n>

/// Second-order coefficients Xi^(1..5) (index 0..4).
struct XiCoefficients {
  std::array<double, 5> xi{};
};

inline XiCoefficients xi_coefficients(const SystemParams& p, int n) {
  const AtomicBasis b = conjoint_basis(p);
  const double v = p.nu, dp = b.d_plus, dm = b.d_minus;
  const double s1 = b.sigma01, s2 = b.sigma02;
  XiCoefficients out;
  out.xi[0] = (s1 * s1 / (v - dp + dm) + s2 * s2 / (v - dp - dm)) / (2 * v);
  out.xi[1] = (s1 * s1 / (v + dp - dm) + s2 * s2 / (v + dp + dm)) / (2 * v);
  const double lower = n > 0 ? n / ((v - dp + dm) * (v - dp - dm)) : 0.0;
  out.xi[2] = -s1 * s2 * dm / dp * (lower + (n + 1) / ((v + dp + dm) * (v + dp - dm)));
  out.xi[3] = s1 * s2 * dm / ((v - dp) * (v - dp - dm) * (v - dp + dm));
  out.xi[4] = -s1 * s2 * dm / ((v + dp) * (v + dp + dm) * (v + dp - dm));
  return out;
}

struct PerturbativeTerm {
  int k = 0;  ///< conjoint state A_k
  int n = 0;  ///< photon number
  double coefficient = 0;
};

/// Non-normalized second-order expansion of |A_0, n> and its energy.
struct PerturbativeState {
  int n = 0;
  std::vector<PerturbativeTerm> terms;  ///< |A_0^n> first, then the ten corrections
  XiCoefficients xi;
  double lambda_0n = 0;

  double coefficient(int k, int m) const {
    for (const auto& t : terms)
      if (t.k == k && t.n == m) return t.coefficient;
    return 0.0;
  }

  /// Normalized vector in the conjoint (x) Fock basis.
  RealVector conjoint_vector(int n_tr) const {
    RealVector v = RealVector::Zero(4 * (n_tr + 1));
    for (const auto& t : terms)
      if (t.n >= 0 && t.n <= n_tr) v(conjoint_index(t.k, t.n, n_tr)) += t.coefficient;
    return v / v.norm();
  }
};

inline PerturbativeState perturbative_state(const SystemParams& p, int n) {
  p.validate();
  if (n < 0) throw ValidationError("perturbative_state: n must be >= 0");
  const AtomicBasis b = conjoint_basis(p);
  const double v = p.nu, dp = b.d_plus, dm = b.d_minus, g = p.g;
  const double s1 = b.sigma01, s2 = b.sigma02;

  struct Den {
    double value;
    bool active;
    const char* name;
  };
  const Den dens[] = {{v - dp + dm, n >= 1, "nu - D+ + D-"},
                      {v + dp - dm, true, "nu + D+ - D-"},
                      {v - dp - dm, n >= 1, "nu - D+ - D-"},
                      {v + dp + dm, true, "nu + D+ + D-"},
                      {v - dp, n >= 2, "nu - D+"}};
  const double guard = 5.0 * g * std::sqrt(n + 1.0);
  for (const auto& d : dens)
    if (d.active && !(std::abs(d.value) > guard))
      throw ValidationError(std::string("perturbative_state: near degeneracy (|") + d.name +
                            "| = " + std::to_string(std::abs(d.value)) +
                            "); use the subspace solution instead");

  PerturbativeState st;
  st.n = n;
  st.xi = xi_coefficients(p, n);
  const double rn = std::sqrt(static_cast<double>(n));
  const double rn1 = std::sqrt(n + 1.0);
  const double rlow = std::sqrt(static_cast<double>(n) * (n - 1));
  const double rhigh = std::sqrt((n + 1.0) * (n + 2.0));
  auto add = [&](int k, int m, double c) {
    if (m >= 0) st.terms.push_back({k, m, c});
  };
  add(0, n, 1.0);
  if (n >= 1) {
    add(1, n - 1, g * s1 * rn / (v - dp + dm));
    add(2, n - 1, g * s2 * rn / (v - dp - dm));
  }
  add(1, n + 1, -g * s1 * rn1 / (v + dp - dm));
  add(2, n + 1, -g * s2 * rn1 / (v + dp + dm));
  if (n >= 2) {
    add(0, n - 2, g * g * rlow * st.xi.xi[0]);
    add(3, n - 2, g * g * rlow * st.xi.xi[3]);
  }
  add(0, n + 2, g * g * rhigh * st.xi.xi[1]);
  add(3, n + 2, g * g * rhigh * st.xi.xi[4]);
  add(3, n, g * g * st.xi.xi[2]);

  double shift = -s1 * s1 * (n + 1) / (v + dp - dm) - s2 * s2 * (n + 1) / (v + dp + dm);
  if (n >= 1) shift += s1 * s1 * n / (v - dp + dm) + s2 * s2 * n / (v - dp - dm);
  st.lambda_0n = b.lambda[0] + v * n + g * g * shift;
  return st;
}

// ---------------------------------------------------------------------------
// Near-degenerate subspace A_n = {A_0^n, A_1^(n-1), A_2^(n-1), A_3^(n-2)}

struct BlochSiegertShifts {
  int n = 0;
  double delta_0_nm2 = 0;  ///< shift of |A_0^(n-2)>
  double delta_1_nm1 = 0;  ///< shift of |A_1^(n-1)>
  double delta_2_nm1 = 0;  ///< shift of |A_2^(n-1)>
  double delta_3_n = 0;    ///< shift of |A_3^n>
};

namespace detail {

inline QuarticCoefficients m1_coefficients(double a, double b, double c, double d, double x,
                                           double y, double z) {
  QuarticCoefficients q;
  q.B = -(x + y + z);
  q.C = x * y + (x + y) * z - a * a - b * b - c * c - d * d;
  q.D = (a * a + c * c) * y + (b * b + d * d) * x + (a * a + b * b) * z - x * y * z;
  q.E = 2 * a * b * c * d + a * a * d * d + b * b * c * c - a * a * y * z - b * b * x * z;
  return q;
}

inline double sqrt_or_zero(double v) { return v > 0 ? std::sqrt(v) : 0.0; }

/// Shifts from the counter-rotating block at any m >= 0; couplings to
/// states with negative photon number are dropped.
inline BlochSiegertShifts shifts_any(const SystemParams& p, const AtomicBasis& bas, int m) {
  const double g = p.g, v = p.nu;
  const double lo = sqrt_or_zero(m - 1.0), hi = sqrt_or_zero(static_cast<double>(m));
  const double a = g * lo * bas.sigma01, b = g * lo * bas.sigma02;
  const double c = g * hi * bas.sigma02, d = g * hi * bas.sigma01;
  const double x = v + bas.d_plus - bas.d_minus;
  const double y = v + bas.d_plus + bas.d_minus;
  const double z = 2 * (v + bas.d_plus);
  const auto L = ferrari_roots(m1_coefficients(a, b, c, d, x, y, z));
  BlochSiegertShifts s;
  s.n = m;
  s.delta_0_nm2 = L[0];
  s.delta_1_nm1 = L[1] - x;
  s.delta_2_nm1 = L[2] - y;
  s.delta_3_n = L[3] - z;
  return s;
}

}  // namespace detail

inline BlochSiegertShifts bloch_siegert_shifts(const SystemParams& p, int n) {
  if (n < 2) throw ValidationError("bloch_siegert_shifts: n must be >= 2");
  p.validate();
  return detail::shifts_any(p, conjoint_basis(p), n);
}

struct SubspaceSolution {
  int n = 0;
  double X = 0;
  double a = 0, b = 0, c = 0, d = 0, x = 0, y = 0, z = 0;
  QuarticCoefficients coeffs;
  std::array<double, 4> Lambda{};
  /// phi[i][k]: amplitude of the k-th subspace state in root i (0-based here;
  /// 1-based index i of phi_{n,i} maps to phi[i-1]).
  std::array<std::array<double, 4>, 4> phi{};
  std::array<double, 4> lambda_phi{};
  bool bs_corrected = false;
  bool closed_form = true;  ///< false when the numeric fallback produced phi

  Eigen::Matrix4d M1() const {
    Eigen::Matrix4d M;
    M << 0, a, b, 0, a, x, 0, -c, b, 0, y, d, 0, -c, d, z;
    return M;
  }

  /// Subspace basis as (k, photon number) pairs.
  std::array<std::pair<int, int>, 4> members() const {
    return {{{0, n}, {1, n - 1}, {2, n - 1}, {3, n - 2}}};
  }
};

/// Entries of M1 and the quartic coefficients; roots and amplitudes unset.
inline SubspaceSolution subspace_matrix(const SystemParams& p, int n, bool corrected) {
  if (n < 2) throw ValidationError("subspace_matrix: n must be >= 2");
  p.validate();
  const AtomicBasis bas = conjoint_basis(p);
  const double g = p.g, v = p.nu;
  SubspaceSolution s;
  s.n = n;
  s.bs_corrected = corrected;
  s.X = v * n + bas.lambda[0];
  s.a = g * std::sqrt(static_cast<double>(n)) * bas.sigma01;
  s.b = g * std::sqrt(static_cast<double>(n)) * bas.sigma02;
  s.c = g * std::sqrt(n - 1.0) * bas.sigma02;
  s.d = g * std::sqrt(n - 1.0) * bas.sigma01;
  s.x = bas.d_plus - bas.d_minus - v;
  s.y = bas.d_plus + bas.d_minus - v;
  s.z = 2 * (bas.d_plus - v);
  if (corrected) {
    const double d0 = detail::shifts_any(p, bas, n + 2).delta_0_nm2;
    const auto mid = detail::shifts_any(p, bas, n);
    const double d3 = detail::shifts_any(p, bas, n - 2).delta_3_n;
    s.X += d0;
    s.x += mid.delta_1_nm1 - d0;
    s.y += mid.delta_2_nm1 - d0;
    s.z += d3 - d0;
  }
  s.coeffs = detail::m1_coefficients(s.a, s.b, s.c, s.d, s.x, s.y, s.z);
  return s;
}

namespace detail {

inline bool rows_valid(const SubspaceSolution& s, const std::array<std::array<double, 4>, 4>& phi) {
  const Eigen::Matrix4d M = s.M1();
  Eigen::Matrix4d P;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      if (!std::isfinite(phi[i][k])) return false;
      P(i, k) = phi[i][k];
    }
  if ((P * P.transpose() - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() > 1e-9) return false;
  const double scale = std::max(1e-300, M.cwiseAbs().maxCoeff());
  for (int i = 0; i < 4; ++i) {
    const Eigen::Vector4d r = P.row(i).transpose();
    if ((M * r - s.Lambda[i] * r).cwiseAbs().maxCoeff() > 1e-8 * scale) return false;
  }
  return true;
}

inline std::array<std::array<double, 4>, 4> numeric_amplitudes(const SubspaceSolution& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(s.M1());
  std::array<std::array<double, 4>, 4> phi{};
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d v = es.eigenvectors().col(i);
    double ref = v(3);
    if (std::abs(ref) < 1e-12) {
      Eigen::Index k;
      v.cwiseAbs().maxCoeff(&k);
      ref = v(k);
    }
    if (ref < 0) v = -v;
    for (int k = 0; k < 4; ++k) phi[i][k] = v(k);
  }
  return phi;
}

}  // namespace detail

/// Amplitude rows from the closed-form expressions (Theta > 0), with a
/// numeric fallback where the closed form is singular or inaccurate.
inline std::array<std::array<double, 4>, 4> m1_eigenstates(const SubspaceSolution& s,
                                                           bool* used_closed_form = nullptr) {
  const double a = s.a, b = s.b, c = s.c, d = s.d, x = s.x, z = s.z;
  std::array<std::array<double, 4>, 4> phi{};
  bool ok = a != 0.0 && c != 0.0;
  if (ok) {
    for (int i = 0; i < 4; ++i) {
      const double L = s.Lambda[i];
      const double den = b + (L * (x - L) * d / a + a * d) / c;
      const double Phi = ((c - (x - L) * (z - L) / c) * L / a - a * (z - L) / c) / den;
      const double t1 = (d * Phi + z - L) / c;
      const double t2 = (c * c - (x - L) * (z - L) - (x - L) * d * Phi) / (a * c);
      const double Theta = 1.0 / std::sqrt(1.0 + Phi * Phi + t1 * t1 + t2 * t2);
      phi[i][0] = Theta / a * (c - (x - L) / c * ((z - L) + d * Phi));
      phi[i][1] = Theta / c * (d * Phi + z - L);
      phi[i][2] = Theta * Phi;
      phi[i][3] = Theta;
    }
    ok = detail::rows_valid(s, phi);
  }
  if (used_closed_form) *used_closed_form = ok;
  return ok ? phi : detail::numeric_amplitudes(s);
}

/// Full solution: entries, Ferrari roots, amplitudes, energies.
inline SubspaceSolution solve_subspace(const SystemParams& p, int n, bool corrected = true) {
  SubspaceSolution s = subspace_matrix(p, n, corrected);
  s.Lambda = ferrari_roots(s.coeffs);
  bool cf = true;
  s.phi = m1_eigenstates(s, &cf);
  s.closed_form = cf;
  for (int i = 0; i < 4; ++i) s.lambda_phi[i] = s.X + s.Lambda[i];
  return s;
}

/// 1-based root index whose |phi^(k)| is largest; ties go to lower energy.
inline int dominant_root(const SubspaceSolution& s, int k) {
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(s.phi[i][k]) > std::abs(s.phi[best][k]) + 1e-12) best = i;
  return best + 1;
}

// ---------------------------------------------------------------------------
// Analytic transition rates (signed; r = |R| / nu)

inline double analytic_rate_2exc(const SystemParams& p, const SubspaceSolution& s, int i) {
  if (s.n != 2) throw ValidationError("analytic_rate_2exc: needs the n = 2 subspace");
  if (i < 1 || i > 4) throw ValidationError("root index must be 1..4");
  if (p.h == 0 || p.eps == 0) return 0.0;
  const AtomicBasis b = conjoint_basis(p);
  const auto& ph = s.phi[i - 1];
  const double v = p.nu;
  const double T = (b.sigma01 * b.norm[1] / (v + b.d_plus - b.d_minus) +
                    b.sigma02 * b.norm[2] / (v + b.d_plus + b.d_minus)) *
                   (b.norm[1] * ph[1] + b.norm[2] * ph[2]);
  return p.eps * p.h * p.h / 2 * (b.norm[0] * b.norm[3] * ph[3] - p.g * T);
}

inline double analytic_rate_ladder(const SystemParams& p, const SubspaceSolution& sn, int i,
                                   const SubspaceSolution& snp2, int j) {
  if (snp2.n != sn.n + 2) throw ValidationError("analytic_rate_ladder: subspaces must be n, n+2");
  if (i < 1 || i > 4 || j < 1 || j > 4) throw ValidationError("root index must be 1..4");
  if (p.h == 0 || p.eps == 0) return 0.0;
  const AtomicBasis b = conjoint_basis(p);
  return p.eps / 2 * b.norm[0] * b.norm[3] * p.h * p.h * sn.phi[i - 1][0] * snp2.phi[j - 1][3];
}

/// Order-of-magnitude lower bound for |A_0,0> -> |phi_{4,i}>.
inline double analytic_rate_4exc(const SystemParams& p, const SubspaceSolution& s4, int i) {
  if (s4.n != 4) throw ValidationError("analytic_rate_4exc: needs the n = 4 subspace");
  if (i < 1 || i > 4) throw ValidationError("root index must be 1..4");
  if (p.h == 0 || p.eps == 0 || p.g == 0) return 0.0;
  const AtomicBasis b = conjoint_basis(p);
  const XiCoefficients xi = xi_coefficients(p, 0);
  return std::sqrt(2.0) * p.eps / 2 * p.h * p.h * p.g * p.g * s4.phi[i - 1][3] * b.norm[3] *
         (b.norm[0] * xi.xi[1] + b.norm[3] * xi.xi[4]);
}

/// lambda^phi_{n,i} - lambda_{0,0}.
inline double analytic_resonance(const SystemParams& p, const SubspaceSolution& s, int i) {
  return s.lambda_phi[i - 1] - perturbative_state(p, 0).lambda_0n;
}

}  // namespace dce
