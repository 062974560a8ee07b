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


#include <charconv>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dce/dce.hpp"

namespace {

struct Common {
  std::string config;
  std::vector<std::string> set;
  std::string out;
  std::string format = "csv";
  int jobs = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "key=value config file");
  app->add_option("--set", c.set, "override key=value (repeatable, applied after --config)");
  app->add_option("--out", c.out, "output directory (default: standard output)");
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--jobs", c.jobs, "worker threads for scans (0: all cores)");
  std::string keys;
  for (const auto& k : dce::config_keys()) keys += " " + k;
  app->footer("Config keys:" + keys +
              "\nFrequencies are in units of nu, times in units of 1/nu.");
}

dce::SystemParams load(const Common& c) {
  dce::SystemParams p;
  if (!c.config.empty()) p = dce::load_config(c.config, p);
  for (const auto& kv : c.set) dce::apply_override(p, kv);
  p.validate();
  for (const auto& w : p.warnings()) std::cerr << "warning: " << w << "\n";
  return p;
}

std::string render(const dce::Table& t, const std::string& format) {
  if (format == "csv") return t.csv();
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < r.size(); ++i) {
      double v = 0;
      const char* b = r[i].data();
      auto [ptr, ec] = std::from_chars(b, b + r[i].size(), v);
      if (ec == std::errc() && ptr == b + r[i].size()) o[t.columns[i]] = v;
      else o[t.columns[i]] = r[i];
    }
    j.push_back(o);
  }
  return j.dump(2) + "\n";
}

void emit(const Common& c, const std::string& name, const dce::Table& t) {
  const std::string text = render(t, c.format);
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  const auto path = std::filesystem::path(c.out) / (name + "." + c.format);
  dce::write_text(path, text);
  std::cerr << "wrote " << path.string() << "\n";
}

std::vector<std::string> expand(const std::string& id) {
  if (id == "all") return dce::preset_ids();
  return {id};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dressed-state spectra and modulation dynamics of a cavity with a driven qubit"};
  app.require_subcommand(1);

  Common spec_c, scan_c, evo_c, rep_c, ver_c;
  int count = 20;
  auto* spectrum = app.add_subcommand("spectrum", "lowest labeled dressed states");
  add_common(spectrum, spec_c);
  spectrum->add_option("--count", count, "number of states");

  std::string grid;
  std::vector<std::string> transitions;
  double eps_ratio = 0;
  bool rwa = false;
  auto* scan = app.add_subcommand("scan", "transition rates and resonances along omega0");
  add_common(scan, scan_c);
  scan->add_option("--omega0", grid, "start:stop:step (units of nu)")->required();
  scan->add_option("--transition", transitions, "src:dst, e.g. A0,0:A1,1 (repeatable)")->required();
  scan->add_option("--eps-ratio", eps_ratio, "if > 0, eps = ratio * omega0 at each point");
  scan->add_flag("--rwa", rwa, "drop the ancilla-field counter-rotating term");

  double t_end = 0, sample_dt = 0;
  bool lindblad = false, printed_mandel = false;
  std::string initial = "g,ga,0";
  std::vector<std::string> targets;
  auto* evolve = app.add_subcommand("evolve", "time evolution under the modulated Hamiltonian");
  add_common(evolve, evo_c);
  evolve->add_option("--t-end", t_end, "final time (units of 1/nu)")->required();
  evolve->add_option("--sample-dt", sample_dt, "sampling interval (units of 1/nu; 0: every period)");
  evolve->add_flag("--lindblad", lindblad, "master equation with the configured decay rates");
  evolve->add_option("--initial", initial, "bare ket like g,ga,0 or a dressed label like A0,0");
  evolve->add_option("--target", targets, "fidelity target label (repeatable; default A0,0)");
  evolve->add_flag("--mandel-printed", printed_mandel, "Q = (var - <n>^2)/<n> instead of (var - <n>)/<n>");

  std::string rep_id, ver_id;
  bool no_dissipative = false;
  auto* reproduce = app.add_subcommand("reproduce", "run a figure or table preset");
  add_common(reproduce, rep_c);
  reproduce->add_option("preset", rep_id, "fig1..fig6, table1, table2 or all")->required();
  reproduce->add_flag("--no-dissipative", no_dissipative, "skip master-equation twin runs");
  auto* verify = app.add_subcommand("verify", "check preset outputs against golden targets");
  add_common(verify, ver_c);
  verify->add_option("preset", ver_id, "fig1..fig6, table1, table2 or all")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*spectrum) {
      const dce::SystemParams p = load(spec_c);
      emit(spec_c, "spectrum", dce::spectrum_table(dce::dressed_spectrum(p), count));
    } else if (*scan) {
      const dce::SystemParams p = load(scan_c);
      std::vector<dce::TransitionSpec> trs;
      for (const auto& t : transitions) trs.push_back(dce::parse_transition(t));
      dce::ScanOptions so;
      so.jobs = scan_c.jobs;
      so.rwa = rwa;
      so.eps_follows_omega0 = eps_ratio > 0;
      so.eps_ratio = eps_ratio;
      emit(scan_c, "scan", dce::scan_table(dce::scan_omega0(p, dce::parse_grid(grid), trs, so)));
    } else if (*evolve) {
      const dce::SystemParams p = load(evo_c);
      const dce::DressedSpectrum s = dce::dressed_spectrum(p);
      std::vector<dce::StateRef> refs;
      if (targets.empty()) targets = {"A0,0"};
      for (const auto& t : targets) refs.push_back(dce::parse_state_ref(t));
      dce::EvolveOptions opt;
      opt.sample_dt = sample_dt;
      opt.mandel = printed_mandel ? dce::MandelForm::printed : dce::MandelForm::standard;
      const dce::ComplexVector psi0 = dce::initial_state(s, initial);
      const dce::Trajectory tr =
          lindblad ? dce::evolve_lindblad(p, dce::pure_density(psi0), t_end, refs, opt)
                   : dce::evolve_schrodinger(p, psi0, t_end, refs, opt);
      emit(evo_c, "trajectory", dce::trajectory_table(tr));
    } else if (*reproduce) {
      const std::string out = rep_c.out.empty() ? "results" : rep_c.out;
      dce::PresetOptions po;
      po.jobs = rep_c.jobs;
      po.dissipative = !no_dissipative;
      for (const auto& id : expand(rep_id)) {
        const auto r = dce::run_preset(id, out, po);
        for (const auto& f : r.files) std::cerr << "wrote " << f.string() << "\n";
      }
    } else if (*verify) {
      const std::string out = ver_c.out.empty() ? "results" : ver_c.out;
      bool ok = true;
      for (const auto& id : expand(ver_id)) {
        for (const auto& c : dce::verify_preset(id, out)) {
          std::cout << id << " " << (c.pass ? "PASS" : "FAIL") << " " << c.target << " = "
                    << dce::fmt(c.measured) << " (" << c.tolerance << ")\n";
          ok = ok && c.pass;
        }
      }
      return ok ? 0 : 2;
    }
  } catch (const dce::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dce::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
