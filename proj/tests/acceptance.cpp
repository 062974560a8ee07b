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


#include <cstdio>
#include <random>
#include <set>

#include "dce/dce.hpp"

using namespace dce;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void note(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

Outcome checks_of(const std::vector<Check>& checks, const std::set<std::string>& only = {},
                  bool exclude = false) {
  Outcome o;
  int n = 0;
  for (const auto& c : checks) {
    const bool listed = only.count(c.target) > 0;
    if (!only.empty() && listed == exclude) continue;
    ++n;
    o.note(c.pass, c.target + " = " + fmt(c.measured) + " (" + c.tolerance + ")");
  }
  if (n == 0) o.note(false, "no checks");
  if (o.pass) o.detail = std::to_string(n) + " checks";
  return o;
}

Outcome preset(const std::filesystem::path& out, const std::string& id, PresetOptions opt = {}) {
  try {
    run_preset(id, out, opt);
    return checks_of(verify_preset(id, out));
  } catch (const std::exception& e) {
    return {false, std::string("error: ") + e.what()};
  }
}

Outcome ferrari_suite() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  for (int k = 0; k < 10000; ++k) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng), x = u(rng), y = u(rng), z = u(rng);
    Eigen::Matrix4d M;
    M << 0, a, b, 0, a, x, 0, -c, b, 0, y, d, 0, -c, d, z;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(M, Eigen::EigenvaluesOnly);
    const auto r = ferrari_roots(detail::m1_coefficients(a, b, c, d, x, y, z));
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(r[i] - es.eigenvalues()(i)));
  }
  Outcome o;
  o.note(worst < 1e-9, "ferrari max error " + fmt(worst));
  return o;
}

SystemParams small_params() {
  SystemParams p;
  p.omega0 = 0.95;
  p.omega_a = 0.6;
  p.eps = 0.095;
  p.eta = 1.58635;
  p.n_tr = 3;
  return p;
}

Outcome lindblad_suite() {
  SystemParams p = small_params();
  p.n_tr = 4;
  p.gamma = 0.01;
  p.gamma_ph = 0.005;
  p.gamma_a = 0.002;
  p.gamma_ph_a = 0.001;
  p.kappa = 0.003;
  EvolveOptions opt;
  opt.sample_dt = 2.0;
  opt.spectrum.check_convergence = false;
  const Trajectory tr = evolve_lindblad(p, pure_density(bare_ket(4, 0, 0, 0)), 200.0, {}, opt);
  double tr_err = 0, herm = 0, min_eig = 1;
  for (const auto& s : tr.samples) {
    tr_err = std::max(tr_err, std::abs(s.norm - 1));
    herm = std::max(herm, s.hermiticity_error);
    min_eig = std::min(min_eig, s.min_eigenvalue);
  }
  Outcome o;
  o.note(tr_err < 1e-8, "trace error " + fmt(tr_err));
  o.note(herm < 1e-10, "hermiticity error " + fmt(herm));
  o.note(min_eig > -1e-6, "min eigenvalue " + fmt(min_eig));
  return o;
}

Outcome perturbative_suite() {
  double cmax = 0;
  std::vector<double> errs;
  for (double g : {0.01, 0.02, 0.04}) {
    SystemParams p;
    p.omega0 = 0.5;
    p.omega_a = 0.6;
    p.g = g;
    p.h = 0.05;
    p.n_tr = 15;
    const DressedSpectrum s = dressed_spectrum(p);
    double e = 0;
    for (int n = 0; n <= 2; ++n)
      e = std::max(e, std::abs(s.energies(s.find(0, n)) - perturbative_state(p, n).lambda_0n));
    errs.push_back(e);
    cmax = std::max(cmax, e / (g * g * g));
  }
  Outcome o;
  o.note(cmax < 100, "error/g^3 " + fmt(cmax));
  o.note(errs[2] > errs[0], "error does not grow with g");
  return o;
}

Outcome unitary_limit_suite() {
  const SystemParams p = small_params();
  const std::vector<StateRef> targets = {StateRef::from_label(0, 0), StateRef::from_label(1, 1)};
  EvolveOptions opt;
  opt.steps_per_period = 2000;
  opt.richardson = false;
  opt.spectrum.check_convergence = false;
  const ComplexVector psi = bare_ket(3, 0, 0, 0);
  const Trajectory a = evolve_schrodinger(p, psi, 100.0, targets, opt);
  const Trajectory b = evolve_lindblad(p, pure_density(psi), 100.0, targets, opt);
  double worst = a.samples.size() == b.samples.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min(a.samples.size(), b.samples.size()); ++i) {
    worst = std::max(worst, std::abs(a.samples[i].n_avg - b.samples[i].n_avg));
    for (int k = 0; k < 2; ++k)
      worst = std::max(worst, std::abs(a.samples[i].fidelity[k] - b.samples[i].fidelity[k]));
  }
  Outcome o;
  o.note(worst < 1e-7, "propagator difference " + fmt(worst));
  return o;
}

Outcome combine(std::initializer_list<std::pair<const char*, Outcome>> parts) {
  Outcome o;
  std::string ok;
  for (const auto& [name, part] : parts) {
    if (!part.pass) o.note(false, std::string(name) + ": " + part.detail);
    ok += (ok.empty() ? "" : ", ") + std::string(name);
  }
  if (o.pass) o.detail = ok;
  return o;
}

Outcome guarded(Outcome (*f)()) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("error: ") + e.what()};
  }
}

void report(int n, const Outcome& o) {
  std::printf("criterion %d: %s %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path out = argc > 1 ? argv[1] : "acceptance_out";

  report(1, combine({{"table1", preset(out, "table1")}, {"table2", preset(out, "table2")}}));

  const std::set<std::string> twin = {"d.n_tot_max_dissipative", "n_tot_max_free"};
  std::vector<Check> fig1;
  std::string fig1_error;
  try {
    run_preset("fig1", out);
    fig1 = verify_preset("fig1", out);
  } catch (const std::exception& e) {
    fig1_error = e.what();
  }
  if (fig1_error.empty()) {
    report(2, checks_of(fig1, twin, true));
  } else {
    report(2, {false, "error: " + fig1_error});
  }

  report(3, preset(out, "fig2"));
  PresetOptions unitary_only;
  unitary_only.dissipative = false;
  report(4, preset(out, "fig3", unitary_only));
  report(5, preset(out, "fig4"));
  report(6, preset(out, "fig5"));
  report(7, preset(out, "fig6"));

  if (fig1_error.empty()) {
    report(8, checks_of(fig1, twin));
  } else {
    report(8, {false, "error: " + fig1_error});
  }

  report(9, combine({{"ferrari", guarded(ferrari_suite)},
                     {"lindblad invariants", guarded(lindblad_suite)},
                     {"third-order scaling", guarded(perturbative_suite)},
                     {"unitary limit", guarded(unitary_limit_suite)}}));
  return 0;
}
