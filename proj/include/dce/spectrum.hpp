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
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dce/model.hpp"

namespace dce {

/// Dominant |A_k^n> component of a dressed state.
struct StateLabel {
  int k = 0;
  int n = 0;
  double overlap = 0;  ///< |<A_k^n|phi>|^2
  bool mixed = false;  ///< overlap < 0.5

  std::string str() const { return "A" + std::to_string(k) + "," + std::to_string(n); }
};

struct DressedSpectrum {
  SystemParams params;
  bool rwa = false;
  RealVector energies;          ///< ascending
  ComplexMatrix states;         ///< columns, bare product basis
  ComplexMatrix conjoint;       ///< columns, conjoint (x) Fock basis
  std::vector<StateLabel> labels;

  int size() const { return static_cast<int>(energies.size()); }
  int n_tr() const { return params.n_tr; }

  /// Weight of state l on |A_k^n>.
  double weight(int l, int k, int n) const {
    return std::norm(conjoint(conjoint_index(k, n, params.n_tr), l));
  }

  /// State carrying label (k, n); the largest overlap wins. -1 if none.
  int find(int k, int n) const {
    int best = -1;
    for (int l = 0; l < size(); ++l)
      if (labels[l].k == k && labels[l].n == n &&
          (best < 0 || labels[l].overlap > labels[best].overlap))
        best = l;
    return best;
  }

  /// phi_{n,i}: the four states with largest weight in the subspace A_n,
  /// ordered by energy; i is 1-based.
  int subspace_state(int n, int i) const {
    if (n < 2 || i < 1 || i > 4) throw ValidationError("subspace_state: need n >= 2, i in 1..4");
    if (n > params.n_tr) throw ValidationError("subspace_state: n exceeds n_tr");
    std::vector<std::pair<double, int>> w;
    for (int l = 0; l < size(); ++l)
      w.push_back({weight(l, 0, n) + weight(l, 1, n - 1) + weight(l, 2, n - 1) + weight(l, 3, n - 2),
                   l});
    std::stable_sort(w.begin(), w.end(), [](auto& a, auto& b) { return a.first > b.first; });
    std::vector<int> top = {w[0].second, w[1].second, w[2].second, w[3].second};
    std::sort(top.begin(), top.end());
    return top[i - 1];
  }

  /// Amplitudes of state l on the subspace A_n members (A_0^n, A_1^(n-1), A_2^(n-1), A_3^(n-2)).
  std::array<double, 4> subspace_amplitudes(int l, int n) const {
    const int f = params.n_tr;
    return {conjoint(conjoint_index(0, n, f), l).real(), conjoint(conjoint_index(1, n - 1, f), l).real(),
            conjoint(conjoint_index(2, n - 1, f), l).real(),
            conjoint(conjoint_index(3, n - 2, f), l).real()};
  }
};

/// A dressed state named by label, subspace root or ground.
struct StateRef {
  enum Kind { label, subspace, ground } kind = ground;
  int a = 0;  ///< k for labels, n for subspace states
  int b = 0;  ///< n for labels, i for subspace states

  static StateRef from_label(int k, int n) { return {label, k, n}; }
  static StateRef from_subspace(int n, int i) { return {subspace, n, i}; }

  std::string str() const {
    if (kind == ground) return "ground";
    return (kind == label ? "A" : "phi") + std::to_string(a) + "," + std::to_string(b);
  }
  /// Column-safe name, e.g. "A0_4".
  std::string id() const {
    std::string s = str();
    std::replace(s.begin(), s.end(), ',', '_');
    return s;
  }
};

/// Parses "A<k>,<n>", "phi<n>,<i>" or "ground".
inline StateRef parse_state_ref(std::string_view s) {
  auto num = [&](std::string_view t) {
    if (t.empty()) throw ValidationError("bad state reference '" + std::string(s) + "'");
    int v = 0;
    for (char c : t) {
      if (c < '0' || c > '9') throw ValidationError("bad state reference '" + std::string(s) + "'");
      v = v * 10 + (c - '0');
    }
    return v;
  };
  if (s == "ground") return {};
  std::string_view body;
  StateRef r;
  if (s.rfind("phi", 0) == 0) {
    r.kind = StateRef::subspace;
    body = s.substr(3);
  } else if (s.rfind("A", 0) == 0) {
    r.kind = StateRef::label;
    body = s.substr(1);
  } else {
    throw ValidationError("bad state reference '" + std::string(s) + "'");
  }
  const auto sep = body.find_first_of(",_");
  if (sep == std::string_view::npos) throw ValidationError("bad state reference '" + std::string(s) + "'");
  r.a = num(body.substr(0, sep));
  r.b = num(body.substr(sep + 1));
  if (r.kind == StateRef::label && r.a > 3) throw ValidationError("label index k must be 0..3");
  if (r.kind == StateRef::subspace && (r.a < 2 || r.b < 1 || r.b > 4))
    throw ValidationError("subspace reference needs n >= 2 and i in 1..4");
  return r;
}

/// Index of the referenced state, or -1 when no state carries the label.
inline int resolve(const DressedSpectrum& s, const StateRef& r) {
  switch (r.kind) {
    case StateRef::ground: return 0;
    case StateRef::label: return s.find(r.a, r.b);
    case StateRef::subspace: return s.subspace_state(r.a, r.b);
  }
  return -1;
}

inline int resolve_or_throw(const DressedSpectrum& s, const StateRef& r) {
  const int l = resolve(s, r);
  if (l < 0) throw ValidationError("no dressed state carries label " + r.str());
  return l;
}

struct SpectrumOptions {
  bool check_convergence = true;
  double tolerance = 1e-6;  ///< allowed energy change at n_tr + 5
};

namespace detail {

inline std::vector<StateLabel> label_states(const ComplexMatrix& conj, int n_tr) {
  const int f = n_tr + 1;
  std::vector<StateLabel> out(conj.cols());
  for (Eigen::Index l = 0; l < conj.cols(); ++l) {
    int best = 0;
    double w = -1;
    // scan n outermost so equal weights keep the smaller photon number
    for (int n = 0; n < f; ++n)
      for (int k = 0; k < 4; ++k) {
        const double p = std::norm(conj(k * f + n, l));
        if (p > w + 1e-12) {
          w = p;
          best = k * f + n;
        }
      }
    out[l] = {best / f, best % f, w, w < 0.5};
  }
  return out;
}

inline DressedSpectrum diagonalize(const HamiltonianBuilder& hb) {
  const SystemParams& p = hb.params();
  DressedSpectrum s;
  s.params = p;
  s.rwa = hb.rwa();
  const EigenDecomposition ed = eig_hermitian(hb.H0());
  s.energies = ed.values;
  s.states = ed.vectors;
  const RealMatrix U = conjoint_transform(conjoint_basis(p), p.n_tr);
  s.conjoint = U.transpose().cast<Complex>() * s.states;
  s.labels = label_states(s.conjoint, p.n_tr);
  return s;
}

}  // namespace detail

/// Largest energy change of low-photon states when n_tr grows by 5.
inline double truncation_error(const DressedSpectrum& s) {
  SystemParams big = s.params;
  big.n_tr += 5;
  const DressedSpectrum t = detail::diagonalize(HamiltonianBuilder(big, s.rwa));
  double worst = 0;
  for (int l = 0; l < s.size(); ++l) {
    if (s.labels[l].n > s.params.n_tr / 2) continue;
    double d = 1e300;
    for (int m = 0; m < t.size(); ++m) d = std::min(d, std::abs(t.energies(m) - s.energies(l)));
    worst = std::max(worst, d);
  }
  return worst;
}

inline DressedSpectrum dressed_spectrum(const HamiltonianBuilder& hb, SpectrumOptions opt = {}) {
  DressedSpectrum s = detail::diagonalize(hb);
  if (opt.check_convergence) {
    const double err = truncation_error(s);
    if (err > opt.tolerance)
      throw NumericalError("spectrum not converged at n_tr=" + std::to_string(hb.params().n_tr) +
                           " (energy change " + std::to_string(err) + "); increase n_tr");
  }
  return s;
}

inline DressedSpectrum dressed_spectrum(const SystemParams& p, SpectrumOptions opt = {}) {
  return dressed_spectrum(HamiltonianBuilder(p), opt);
}

/// (eps/2) <phi_m|sigma_e|phi_l>.
inline Complex transition_rate(const DressedSpectrum& s, int m, int l, double eps) {
  if (m == l) throw ValidationError("transition_rate: m == l");
  if (m < 0 || l < 0 || m >= s.size() || l >= s.size())
    throw ValidationError("transition_rate: state index out of range");
  const int f = s.params.n_tr + 1;
  // sigma_e is diagonal: the t-qubit excited half of the bare basis
  Complex acc = 0;
  for (int i = 2 * f; i < 4 * f; ++i) acc += std::conj(s.states(i, m)) * s.states(i, l);
  return 0.5 * eps * acc;
}

inline double resonant_frequency(const DressedSpectrum& s, int m, int l) {
  if (m == l) throw ValidationError("resonant_frequency: m == l");
  return std::abs(s.energies(l) - s.energies(m));
}

struct TransitionRow {
  int m = 0, l = 0;
  double E_lm = 0;
  Complex R;
  StateLabel label_m, label_l;
};

struct TransitionTable {
  std::vector<TransitionRow> rows;
};

/// All ordered pairs among the lowest `count` states.
inline TransitionTable transition_table(const DressedSpectrum& s, double eps, int count) {
  count = std::min(count, s.size());
  TransitionTable t;
  for (int m = 0; m < count; ++m)
    for (int l = 0; l < count; ++l)
      if (m != l)
        t.rows.push_back({m, l, s.energies(l) - s.energies(m), transition_rate(s, m, l, eps),
                          s.labels[m], s.labels[l]});
  return t;
}

// ---------------------------------------------------------------------------
// Scans over omega0

struct TransitionSpec {
  StateRef src, dst;
  std::string id() const { return src.id() + "->" + dst.id(); }
};

/// "A0,0:A1,1" style.
inline TransitionSpec parse_transition(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) throw ValidationError("transition must be src:dst");
  return {parse_state_ref(s.substr(0, colon)), parse_state_ref(s.substr(colon + 1))};
}

struct ScanRow {
  double omega0 = 0;
  std::string transition_id;
  double rate = 0;   ///< |R| / nu
  double eta_r = 0;  ///< |E_dst - E_src| / nu
  std::string flag;  ///< ok | mixed | continued | missing
};

struct ScanOptions {
  int jobs = 0;  ///< 0: hardware concurrency
  bool rwa = false;
  bool eps_follows_omega0 = false;  ///< eps = eps_ratio * omega0 at each point
  double eps_ratio = 0.1;
  bool check_convergence_ends = true;
};

/// Parses "start:stop:step" into an inclusive grid.
inline std::vector<double> parse_grid(std::string_view s) {
  std::vector<double> v;
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const auto c = s.find(':', pos);
    const std::string part(s.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("grid must be start:stop:step");
    }
    if (c == std::string_view::npos) {
      if (i != 2) throw ValidationError("grid must be start:stop:step");
      break;
    }
    pos = c + 1;
  }
  if (!(v[2] > 0) || v[1] < v[0]) throw ValidationError("grid needs step > 0 and stop >= start");
  std::vector<double> g;
  const long count = std::lround(std::floor((v[1] - v[0]) / v[2] + 1e-9));
  for (long i = 0; i <= count; ++i) g.push_back(v[0] + static_cast<double>(i) * v[2]);
  return g;
}

namespace detail {

template <class F>
void parallel_for(int count, int jobs, F&& body) {
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(jobs);
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += jobs) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Rates and resonances along an omega0 grid. Labels resolve per point; a
/// label no state carries continues from the previous point's state by
/// maximal overlap and is flagged.
inline std::vector<ScanRow> scan_omega0(const SystemParams& base, const std::vector<double>& grid,
                                        const std::vector<TransitionSpec>& transitions,
                                        ScanOptions opt = {}) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("scan grid must be increasing");
  std::vector<ScanRow> rows;
  const int chunk = 64;
  std::vector<std::optional<ComplexVector>> prev_src(transitions.size()), prev_dst(transitions.size());

  for (std::size_t c0 = 0; c0 < grid.size(); c0 += chunk) {
    const int cn = static_cast<int>(std::min<std::size_t>(chunk, grid.size() - c0));
    std::vector<DressedSpectrum> specs(cn);
    detail::parallel_for(cn, opt.jobs, [&](int i) {
      SystemParams p = base;
      p.omega0 = grid[c0 + i];
      if (opt.eps_follows_omega0) p.eps = opt.eps_ratio * p.omega0;
      const std::size_t gi = c0 + i;
      const bool end = gi == 0 || gi + 1 == grid.size();
      SpectrumOptions so;
      so.check_convergence = opt.check_convergence_ends && end;
      specs[i] = dressed_spectrum(HamiltonianBuilder(p, opt.rwa), so);
    });
    for (int i = 0; i < cn; ++i) {
      const DressedSpectrum& s = specs[i];
      for (std::size_t t = 0; t < transitions.size(); ++t) {
        std::string flag = "ok";
        auto pick = [&](const StateRef& r, std::optional<ComplexVector>& prev) {
          int l = resolve(s, r);
          if (l < 0 && prev) {
            double best = -1;
            for (int m = 0; m < s.size(); ++m) {
              const double o = std::norm(prev->dot(s.states.col(m)));
              if (o > best) {
                best = o;
                l = m;
              }
            }
            flag = "continued";
          }
          if (l >= 0 && r.kind == StateRef::label && s.labels[l].mixed && flag == "ok") flag = "mixed";
          if (l >= 0) prev = s.states.col(l);
          return l;
        };
        const int m = pick(transitions[t].src, prev_src[t]);
        const int l = pick(transitions[t].dst, prev_dst[t]);
        ScanRow row;
        row.omega0 = s.params.omega0;
        row.transition_id = transitions[t].id();
        if (m < 0 || l < 0 || m == l) {
          row.flag = "missing";
          row.rate = row.eta_r = std::nan("");
        } else {
          row.rate = std::abs(transition_rate(s, m, l, s.params.eps)) / s.params.nu;
          row.eta_r = resonant_frequency(s, m, l) / s.params.nu;
          row.flag = flag;
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace dce
