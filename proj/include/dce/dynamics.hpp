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
#include <future>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "dce/integrator.hpp"
#include "dce/model.hpp"
#include "dce/spectrum.hpp"

namespace dce {

/// Observables of one pure state or density operator.
struct Observables {
  double n_avg = 0;
  double se_t = 0;  ///< <sigma_e> of the t-qubit
  double se_a = 0;  ///< <sigma_e^(a)>
  double n_tot = 0;
  double q_mandel = 0;
  std::vector<double> pn;        ///< Fock populations P_0..P_ntr
  std::vector<double> fidelity;  ///< per target
  double norm = 1;               ///< |psi|^2 or Tr rho
  double min_eigenvalue = 0;     ///< density operators only
  double hermiticity_error = 0;  ///< density operators only
};

enum class MandelForm { standard, printed };

/// Fidelity targets and options shared by all observable evaluations.
struct ObservableContext {
  int n_tr = 0;
  std::vector<std::string> names;
  std::vector<ComplexVector> targets;
  MandelForm mandel = MandelForm::standard;
};

inline ObservableContext make_context(const DressedSpectrum& s, const std::vector<StateRef>& refs,
                                      MandelForm mandel = MandelForm::standard) {
  ObservableContext c;
  c.n_tr = s.params.n_tr;
  c.mandel = mandel;
  for (const auto& r : refs) {
    c.names.push_back(r.id());
    c.targets.push_back(s.states.col(resolve_or_throw(s, r)));
  }
  return c;
}

namespace detail {

inline void finish_photon_stats(Observables& o, MandelForm form) {
  double n1 = 0, n2 = 0;
  for (std::size_t n = 0; n < o.pn.size(); ++n) {
    n1 += n * o.pn[n];
    n2 += static_cast<double>(n * n) * o.pn[n];
  }
  o.n_avg = n1;
  o.n_tot = o.n_avg + o.se_t + o.se_a;
  if (n1 <= 1e-300) {
    o.q_mandel = 0;
    return;
  }
  const double var = n2 - n1 * n1;
  o.q_mandel = form == MandelForm::standard ? (var - n1) / n1 : (var - n1 * n1) / n1;
}

}  // namespace detail

inline Observables observables(const ComplexVector& psi, const ObservableContext& c) {
  const int f = c.n_tr + 1;
  if (psi.size() != 4 * f) throw ValidationError("observables: state dimension mismatch");
  Observables o;
  o.pn.assign(f, 0.0);
  for (int q = 0; q < 4; ++q)
    for (int n = 0; n < f; ++n) {
      const double p = std::norm(psi(q * f + n));
      o.pn[n] += p;
      if (q >= 2) o.se_t += p;
      if (q % 2 == 1) o.se_a += p;
    }
  o.norm = psi.squaredNorm();
  for (const auto& t : c.targets) o.fidelity.push_back(std::norm(t.dot(psi)));
  detail::finish_photon_stats(o, c.mandel);
  return o;
}

inline Observables observables(const ComplexMatrix& rho, const ObservableContext& c) {
  const int f = c.n_tr + 1;
  if (rho.rows() != 4 * f || rho.cols() != 4 * f)
    throw ValidationError("observables: density operator dimension mismatch");
  Observables o;
  o.pn.assign(f, 0.0);
  for (int q = 0; q < 4; ++q)
    for (int n = 0; n < f; ++n) {
      const double p = rho(q * f + n, q * f + n).real();
      o.pn[n] += p;
      if (q >= 2) o.se_t += p;
      if (q % 2 == 1) o.se_a += p;
    }
  o.norm = rho.trace().real();
  for (const auto& t : c.targets) o.fidelity.push_back((t.adjoint() * rho * t)(0, 0).real());
  const double scale = std::max(1e-300, max_abs(rho));
  o.hermiticity_error = max_abs(rho - rho.adjoint()) / scale;
  const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  o.min_eigenvalue = es.eigenvalues()(0);
  detail::finish_photon_stats(o, c.mandel);
  return o;
}

struct Trajectory {
  std::vector<std::string> fidelity_names;
  std::vector<double> times;
  std::vector<Observables> samples;
  std::vector<ComplexVector> states;  ///< filled when requested (pure runs)
  std::vector<ComplexMatrix> rhos;    ///< filled when requested (dissipative runs)
  std::vector<ComplexVector> amplitudes;  ///< dressed amplitude runs
  bool dissipative = false;
  double eta = 0;
  int steps_per_period = 0;
  double step = 0;
  double max_norm_drift = 0;    ///< max |norm - 1| or |Tr rho - 1|
  double richardson_delta = 0;  ///< final-observable change at half step

  double max_of(double Observables::*field) const {
    double m = -1e300;
    for (const auto& s : samples) m = std::max(m, s.*field);
    return m;
  }
  double max_fidelity(std::size_t i) const {
    double m = 0;
    for (const auto& s : samples) m = std::max(m, s.fidelity.at(i));
    return m;
  }
};

struct EvolveOptions {
  double sample_dt = 0;        ///< 0: every modulation period
  int steps_per_period = 0;    ///< 0: automatic
  bool richardson = true;      ///< rerun at half step and compare
  bool keep_states = false;
  bool use_period_map = true;
  std::size_t period_map_limit = 3000;  ///< largest dimension for a dense period map
  MandelForm mandel = MandelForm::standard;
  SpectrumOptions spectrum;
};

/// Bare product ket |q, q_a, n>.
inline ComplexVector bare_ket(int n_tr, int q, int qa, int n) {
  ComplexVector v = ComplexVector::Zero(4 * (n_tr + 1));
  v(HilbertConfig{n_tr}.index(q, qa, n)) = 1.0;
  return v;
}

/// "g,ga,0" / "e,ea,3" style bare ket, or a dressed state reference.
inline ComplexVector initial_state(const DressedSpectrum& s, std::string_view text) {
  const int n_tr = s.params.n_tr;
  const auto c1 = text.find(',');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(',', c1 + 1);
  if (c1 != std::string_view::npos && c2 != std::string_view::npos) {
    const auto q = text.substr(0, c1);
    const auto qa = text.substr(c1 + 1, c2 - c1 - 1);
    const auto nn = text.substr(c2 + 1);
    auto qubit = [&](std::string_view x, bool anc) {
      if (x == "g" || (anc && (x == "ga" || x == "g_a"))) return 0;
      if (x == "e" || (anc && (x == "ea" || x == "e_a"))) return 1;
      throw ValidationError("bad qubit state '" + std::string(x) + "' in '" + std::string(text) + "'");
    };
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(std::string(nn), &used);
      if (used != nn.size()) throw std::invalid_argument("x");
    } catch (const std::exception&) {
      throw ValidationError("bad photon number in '" + std::string(text) + "'");
    }
    return bare_ket(n_tr, qubit(q, false), qubit(qa, true), n);
  }
  return s.states.col(resolve_or_throw(s, parse_state_ref(text)));
}

namespace detail {

inline double spectral_range(const DressedSpectrum& s) {
  return s.energies(s.size() - 1) - s.energies(0);
}

/// Sample stride in RK4 steps; whole periods when sample_dt >= T.
inline long sample_stride(const PeriodicRK4& rk, double sample_dt) {
  const double T = rk.period();
  if (sample_dt <= 0) return rk.steps_per_period();
  if (sample_dt >= T) return std::max(1L, std::lround(sample_dt / T)) * rk.steps_per_period();
  return std::max(1L, std::lround(sample_dt / rk.step_size()));
}

/// Snaps the horizon and sample spacing to the coarsest step grid so runs at
/// N, 2N, 4N... steps per period sample identical instants.
inline void snap_to_grid(double& t_end, EvolveOptions& opt, double h0) {
  t_end = std::max(1L, std::lround(t_end / h0)) * h0;
  if (opt.sample_dt > 0)
    opt.sample_dt = std::max(1L, std::lround(opt.sample_dt / h0)) * h0;
}

struct RawRun {
  Trajectory traj;
  Observables final_obs;
};

inline RawRun run_pure(const SystemParams& p, const DressedSpectrum& s, const ComplexVector& psi0,
                       double t_end, const ObservableContext& ctx, int N, const EvolveOptions& opt) {
  const HamiltonianBuilder hb(p);
  const double e_ref = s.energies(0);
  const long d = psi0.size();
  SparseMatrix H = to_sparse(hb.H0());
  H -= e_ref * sparse_identity(d);
  const Complex mi(0, -1);
  PeriodicRK4 rk(SparseMatrix(mi * H), SparseMatrix(mi * to_sparse(hb.drive())), p.eps, p.eta, N);
  if (opt.use_period_map && static_cast<std::size_t>(d) <= opt.period_map_limit) rk.build_period_map();

  RawRun out;
  Trajectory& tr = out.traj;
  tr.fidelity_names = ctx.names;
  tr.eta = p.eta;
  tr.steps_per_period = N;
  tr.step = rk.step_size();
  const long total = std::lround(t_end / rk.step_size());
  const long stride = sample_stride(rk, opt.sample_dt);
  ComplexVector y = psi0;
  long j = 0;
  auto record = [&] {
    const double t = static_cast<double>(j) * rk.step_size();
    Observables o = observables(y, ctx);
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(o.norm - 1.0));
    tr.times.push_back(t);
    tr.samples.push_back(std::move(o));
    if (opt.keep_states) tr.states.push_back(std::exp(Complex(0, -e_ref * t)) * y);
  };
  record();
  while (j < total) {
    const long next = std::min(total, j + stride);
    rk.advance(y, j, next);
    j = next;
    record();
  }
  out.final_obs = tr.samples.back();
  return out;
}

inline SparseMatrix liouvillian_hamiltonian(const SparseMatrix& H) {
  const SparseMatrix I = sparse_identity(H.rows());
  const SparseMatrix Ht = H.transpose();
  SparseMatrix L = sparse_kron(I, H) - sparse_kron(Ht, I);
  return Complex(0, -1) * L;
}

inline SparseMatrix liouvillian_dissipator(const std::vector<Dissipator>& ds, long d) {
  const SparseMatrix I = sparse_identity(d);
  SparseMatrix L(d * d, d * d);
  for (const auto& c : ds) {
    if (c.rate == 0) continue;
    const SparseMatrix J = to_sparse(c.jump);
    const SparseMatrix Jc = J.conjugate();
    const SparseMatrix JdJ = SparseMatrix(J.adjoint()) * J;
    const SparseMatrix JdJt = JdJ.transpose();
    L += c.rate * (sparse_kron(Jc, J) - 0.5 * sparse_kron(I, JdJ) - 0.5 * sparse_kron(JdJt, I));
  }
  return L;
}

inline ComplexVector vec(const ComplexMatrix& rho) {
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}
inline ComplexMatrix unvec(const ComplexVector& v, long d) {
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

inline RawRun run_mixed(const SystemParams& p, const ComplexMatrix& rho0, double t_end,
                        const ObservableContext& ctx, int N, const EvolveOptions& opt) {
  const HamiltonianBuilder hb(p);
  const long d = rho0.rows();
  const SparseMatrix L0 =
      liouvillian_hamiltonian(to_sparse(hb.H0())) + liouvillian_dissipator(lindblad_dissipators(p), d);
  const SparseMatrix L1 = liouvillian_hamiltonian(to_sparse(hb.drive()));
  PeriodicRK4 rk(L0, L1, p.eps, p.eta, N);
  if (opt.use_period_map && static_cast<std::size_t>(d * d) <= opt.period_map_limit)
    rk.build_period_map();

  RawRun out;
  Trajectory& tr = out.traj;
  tr.dissipative = true;
  tr.fidelity_names = ctx.names;
  tr.eta = p.eta;
  tr.steps_per_period = N;
  tr.step = rk.step_size();
  const long total = std::lround(t_end / rk.step_size());
  const long stride = sample_stride(rk, opt.sample_dt);
  ComplexVector y = vec(rho0);
  long j = 0;
  auto record = [&] {
    const ComplexMatrix rho = unvec(y, d);
    Observables o = observables(rho, ctx);
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(o.norm - 1.0));
    if (o.min_eigenvalue < -1e-6)
      throw NumericalError("evolve_lindblad: positivity violated (min eigenvalue " +
                           std::to_string(o.min_eigenvalue) + "); reduce the step");
    tr.times.push_back(static_cast<double>(j) * rk.step_size());
    tr.samples.push_back(std::move(o));
    if (opt.keep_states) tr.rhos.push_back(rho);
  };
  record();
  while (j < total) {
    const long next = std::min(total, j + stride);
    rk.advance(y, j, next);
    j = next;
    record();
  }
  out.final_obs = tr.samples.back();
  return out;
}

inline double final_difference(const Observables& a, const Observables& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.fidelity.size(); ++i) d = std::max(d, std::abs(a.fidelity[i] - b.fidelity[i]));
  for (std::size_t i = 0; i < a.pn.size(); ++i) d = std::max(d, std::abs(a.pn[i] - b.pn[i]));
  return d;
}

template <class Run>
Trajectory with_richardson(Run run, int N, bool check, const char* who) {
  if (!check) return run(N).traj;
  auto half = std::async(std::launch::async, [&] { return run(2 * N); });
  RawRun full = run(N);
  RawRun fine = half.get();
  full.traj.richardson_delta = final_difference(full.final_obs, fine.final_obs);
  if (full.traj.richardson_delta >= 1e-6)
    throw NumericalError(std::string(who) + ": half-step rerun changed final observables by " +
                         std::to_string(full.traj.richardson_delta));
  return std::move(full.traj);
}

/// Doubles the step count until consecutive runs agree; keeps the finer run.
template <class Run>
Trajectory refine_until_converged(Run run, int N, bool check, const char* who, int max_doublings = 5) {
  RawRun coarse = run(N);
  if (!check) return std::move(coarse.traj);
  double delta = 0;
  for (int k = 0; k < max_doublings; ++k) {
    N *= 2;
    RawRun fine = run(N);
    delta = final_difference(coarse.final_obs, fine.final_obs);
    if (delta < 1e-6) {
      fine.traj.richardson_delta = delta;
      return std::move(fine.traj);
    }
    coarse = std::move(fine);
  }
  throw NumericalError(std::string(who) + ": step halving did not converge (last change " +
                       std::to_string(delta) + ")");
}

}  // namespace detail

/// Unitary propagation under H0 + eps sin(eta t) sigma_e from psi0.
inline Trajectory evolve_schrodinger(const SystemParams& p, const ComplexVector& psi0, double t_end,
                                     const std::vector<StateRef>& targets = {},
                                     EvolveOptions opt = {}) {
  p.validate();
  if (!(t_end > 0)) throw ValidationError("t_end must be > 0");
  if (psi0.size() != 4 * (p.n_tr + 1)) throw ValidationError("psi0 dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ValidationError("psi0 must be normalized");
  const DressedSpectrum s = dressed_spectrum(p, opt.spectrum);
  const ObservableContext ctx = make_context(s, targets, opt.mandel);
  const double T = 2 * std::numbers::pi / p.eta;
  const int N = opt.steps_per_period > 0
                    ? opt.steps_per_period
                    : steps_for_drift(T, detail::spectral_range(s) + p.eps, t_end);
  detail::snap_to_grid(t_end, opt, T / N);
  Trajectory tr = detail::with_richardson(
      [&](int n) { return detail::run_pure(p, s, psi0, t_end, ctx, n, opt); }, N, opt.richardson,
      "evolve_schrodinger");
  if (tr.max_norm_drift > 1e-6)
    throw NumericalError("evolve_schrodinger: norm drift " + std::to_string(tr.max_norm_drift) +
                         " exceeds 1e-6; increase steps per period");
  return tr;
}

/// Lindblad propagation with the model's zero-temperature dissipators.
inline Trajectory evolve_lindblad(const SystemParams& p, const ComplexMatrix& rho0, double t_end,
                                  const std::vector<StateRef>& targets = {},
                                  EvolveOptions opt = {}) {
  p.validate();
  if (!(t_end > 0)) throw ValidationError("t_end must be > 0");
  const long d = 4 * (p.n_tr + 1);
  if (rho0.rows() != d || rho0.cols() != d) throw ValidationError("rho0 dimension mismatch");
  if (std::abs(rho0.trace().real() - 1.0) > 1e-10 || !is_hermitian(rho0, 1e-10))
    throw ValidationError("rho0 must be a unit-trace Hermitian operator");
  const DressedSpectrum s = dressed_spectrum(p, opt.spectrum);
  const ObservableContext ctx = make_context(s, targets, opt.mandel);
  const double T = 2 * std::numbers::pi / p.eta;
  const int N = opt.steps_per_period > 0 ? opt.steps_per_period
                                         : steps_for_phase(T, detail::spectral_range(s) + p.eps);
  detail::snap_to_grid(t_end, opt, T / N);
  Trajectory tr = detail::refine_until_converged(
      [&](int n) { return detail::run_mixed(p, rho0, t_end, ctx, n, opt); }, N, opt.richardson,
      "evolve_lindblad");
  if (tr.max_norm_drift > 1e-6)
    throw NumericalError("evolve_lindblad: trace drift " + std::to_string(tr.max_norm_drift));
  return tr;
}

inline ComplexMatrix pure_density(const ComplexVector& psi) { return psi * psi.adjoint(); }

enum class AmplitudeMode { full, rwa };

/// Integrates the dressed-basis amplitude equations for A_l(t), with
/// psi(t) = sum_l exp(-i E_l t) A_l(t) |phi_l>. `keep` selects a subset of
/// dressed states (all when empty); A0 is indexed like `keep`.
inline Trajectory evolve_dressed_amplitudes(const DressedSpectrum& s, double eps, double eta,
                                            const ComplexVector& A0, double t_end, AmplitudeMode mode,
                                            double sample_dt = 0, std::vector<int> keep = {},
                                            int steps_per_period = 0) {
  if (!(eta > 0) || !(t_end > 0)) throw ValidationError("eta and t_end must be > 0");
  if (keep.empty())
    for (int l = 0; l < s.size(); ++l) keep.push_back(l);
  const long m = static_cast<long>(keep.size());
  if (A0.size() != m) throw ValidationError("A0 size must match the retained states");
  if (std::abs(A0.norm() - 1.0) > 1e-10) throw ValidationError("A0 must be normalized");

  RealVector E(m);
  ComplexMatrix V(s.states.rows(), m);
  for (long i = 0; i < m; ++i) {
    E(i) = s.energies(keep[i]) - s.energies(keep[0]);
    V.col(i) = s.states.col(keep[i]);
  }
  const int f = s.params.n_tr + 1;
  const ComplexMatrix Sd = V.bottomRows(2 * f).adjoint() * V.bottomRows(2 * f);  // <phi_m|sigma_e|phi_l>
  ComplexMatrix Rup = ComplexMatrix::Zero(m, m), Rdn = ComplexMatrix::Zero(m, m);
  for (long a = 0; a < m; ++a)
    for (long b = 0; b < m; ++b) {
      if (E(b) > E(a)) Rup(a, b) = 0.5 * eps * Sd(a, b);
      if (E(b) < E(a)) Rdn(a, b) = 0.5 * eps * Sd(a, b);
    }

  const double T = 2 * std::numbers::pi / eta;
  const double rho = E.maxCoeff() - E.minCoeff() + eps;
  int N = steps_per_period;
  if (N <= 0) N = mode == AmplitudeMode::rwa ? 200 : steps_for_drift(T, rho, t_end);
  const double h = T / N;

  auto rhs = [&](double t, const ComplexVector& A) {
    ComplexVector ph(m);
    for (long i = 0; i < m; ++i) ph(i) = std::exp(Complex(0, -E(i) * t));
    const ComplexVector B = ph.cwiseProduct(A);
    ComplexVector out;
    if (mode == AmplitudeMode::full) {
      out = Complex(0, -eps * std::sin(eta * t)) * ph.conjugate().cwiseProduct(Sd * B);
    } else {
      const Complex up = std::exp(Complex(0, eta * t)), dn = std::exp(Complex(0, -eta * t));
      out = -ph.conjugate().cwiseProduct(up * (Rup * B) - dn * (Rdn * B));
    }
    return out;
  };

  Trajectory tr;
  tr.eta = eta;
  tr.steps_per_period = N;
  tr.step = h;
  const long total = std::lround(t_end / h);
  long stride = N;
  if (sample_dt > 0) stride = std::max(1L, std::lround(sample_dt / h));
  ComplexVector A = A0;
  auto record = [&](long j) {
    tr.times.push_back(static_cast<double>(j) * h);
    tr.amplitudes.push_back(A);
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(A.squaredNorm() - 1.0));
  };
  record(0);
  for (long j = 0; j < total; ++j) {
    const double t = static_cast<double>(j) * h;
    const ComplexVector k1 = rhs(t, A);
    const ComplexVector k2 = rhs(t + 0.5 * h, A + (0.5 * h) * k1);
    const ComplexVector k3 = rhs(t + 0.5 * h, A + (0.5 * h) * k2);
    const ComplexVector k4 = rhs(t + h, A + h * k3);
    A += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((j + 1) % stride == 0 || j + 1 == total) record(j + 1);
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Resonance tuning

struct TunedResonance {
  double eta = 0;
  double peak_fidelity = 0;
};

/// Modulation frequency within [eta0 - width, eta0 + width] maximizing the
/// peak population of `dst` over [0, t_end], starting from psi0. Runs use a
/// looser accuracy budget than production trajectories.
inline TunedResonance tune_resonance(const SystemParams& p, const ComplexVector& psi0,
                                     const StateRef& dst, double eta0, double width, double t_end,
                                     int coarse = 21, double budget = 1e-5) {
  p.validate();
  if (coarse < 3 || !(width > 0)) throw ValidationError("tune_resonance: need coarse >= 3, width > 0");
  const DressedSpectrum s = dressed_spectrum(p);
  const ObservableContext ctx = make_context(s, {dst});
  EvolveOptions opt;
  opt.richardson = false;
  auto peak = [&](double eta) {
    SystemParams q = p;
    q.eta = eta;
    const double T = 2 * std::numbers::pi / eta;
    const int N = steps_for_drift(T, detail::spectral_range(s) + q.eps, t_end, budget);
    return detail::run_pure(q, s, psi0, t_end, ctx, N, opt).traj.max_fidelity(0);
  };
  std::vector<double> xs(coarse), ys(coarse);
  int best = 0;
  for (int i = 0; i < coarse; ++i) {
    xs[i] = eta0 - width + 2 * width * i / (coarse - 1);
    ys[i] = peak(xs[i]);
    if (ys[i] > ys[best]) best = i;
  }
  const double step = 2 * width / (coarse - 1);
  double a = xs[best] - step, b = xs[best] + step;
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = peak(c), fd = peak(d);
  for (int it = 0; it < 12; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = peak(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = peak(d);
    }
  }
  TunedResonance out{xs[best], ys[best]};
  if (fc > out.peak_fidelity) out = {c, fc};
  if (fd > out.peak_fidelity) out = {d, fd};
  return out;
}

inline TunedResonance tune_resonance(const SystemParams& p, const StateRef& src, const StateRef& dst,
                                     double eta0, double width, double t_end, int coarse = 21) {
  const DressedSpectrum s = dressed_spectrum(p);
  return tune_resonance(p, ComplexVector(s.states.col(resolve_or_throw(s, src))), dst, eta0, width,
                        t_end, coarse);
}

/// Least-squares fit of y = A sin^2(w t + phi) + c; returns pi / w.
inline double fit_rabi_period(const std::vector<double>& t, const std::vector<double>& y,
                              double guess) {
  if (t.size() != y.size() || t.size() < 4) throw ValidationError("fit_rabi_period: need >= 4 samples");
  // fixed w: linear in (1, cos 2wt, sin 2wt)
  auto sse = [&](double w) {
    Eigen::MatrixXd X(t.size(), 3);
    Eigen::VectorXd Y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      X(i, 0) = 1;
      X(i, 1) = std::cos(2 * w * t[i]);
      X(i, 2) = std::sin(2 * w * t[i]);
      Y(i) = y[i];
    }
    const Eigen::Vector3d beta = X.colPivHouseholderQr().solve(Y);
    return (X * beta - Y).squaredNorm();
  };
  const double w0 = std::numbers::pi / guess;
  double bw = w0, be = sse(w0);
  for (int i = -200; i <= 200; ++i) {
    const double w = w0 * (1 + 0.002 * i);
    const double e = sse(w);
    if (e < be) {
      be = e;
      bw = w;
    }
  }
  double a = bw * 0.998, b = bw * 1.002;
  const double gr = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 60; ++it) {
    const double c = b - gr * (b - a), d = a + gr * (b - a);
    if (sse(c) < sse(d)) b = d;
    else a = c;
  }
  return std::numbers::pi / (0.5 * (a + b));
}

}  // namespace dce
