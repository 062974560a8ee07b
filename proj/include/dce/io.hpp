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
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dce/dynamics.hpp"
#include "dce/spectrum.hpp"

namespace dce {

/// Shortest round-trip representation; "nan" for NaN.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

/// Column-oriented numeric table.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw ValidationError("table row width mismatch");
    rows.push_back(std::move(row));
  }
  std::string csv() const {
    std::ostringstream o;
    for (std::size_t i = 0; i < columns.size(); ++i) o << (i ? "," : "") << columns[i];
    o << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << r[i];
      o << "\n";
    }
    return o.str();
  }
  std::vector<double> numeric(const std::string& col) const {
    const auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) throw ValidationError("no column '" + col + "'");
    const auto c = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r[c] == "nan" ? std::nan("") : std::stod(r[c]));
    return v;
  }
};

constexpr int kCsvFockColumns = 9;

inline Table trajectory_table(const Trajectory& tr) {
  Table t;
  t.columns = {"t", "n_avg", "se_t", "se_a", "n_tot", "q_mandel"};
  for (int n = 0; n < kCsvFockColumns; ++n) t.columns.push_back("p" + std::to_string(n));
  for (const auto& f : tr.fidelity_names) t.columns.push_back("f_" + f);
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const auto& o = tr.samples[i];
    std::vector<std::string> r = {fmt(tr.times[i]), fmt(o.n_avg), fmt(o.se_t), fmt(o.se_a),
                                  fmt(o.n_tot), fmt(o.q_mandel)};
    for (int n = 0; n < kCsvFockColumns; ++n)
      r.push_back(fmt(n < static_cast<int>(o.pn.size()) ? o.pn[n] : 0.0));
    for (double f : o.fidelity) r.push_back(fmt(f));
    t.add(std::move(r));
  }
  return t;
}

inline Table scan_table(const std::vector<ScanRow>& rows) {
  Table t;
  t.columns = {"omega0", "transition_id", "rate", "eta_r", "flag"};
  for (const auto& r : rows)
    t.add({fmt(r.omega0), r.transition_id, fmt(r.rate), fmt(r.eta_r), r.flag});
  return t;
}

inline Table spectrum_table(const DressedSpectrum& s, int count) {
  Table t;
  t.columns = {"index", "energy", "label", "overlap", "mixed"};
  for (int l = 0; l < std::min(count, s.size()); ++l)
    t.add({std::to_string(l), fmt(s.energies(l) - s.energies(0)), s.labels[l].str(),
           fmt(s.labels[l].overlap), s.labels[l].mixed ? "1" : "0"});
  return t;
}

inline Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  Table t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> v;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(cell);
    return v;
  };
  if (!std::getline(in, line)) throw ValidationError("empty csv " + path.string());
  t.columns = split(line);
  while (std::getline(in, line))
    if (!line.empty()) t.add(split(line));
  return t;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// SVG line charts

struct Series {
  std::string name;
  std::vector<double> x, y;
};

struct Chart {
  std::string title, xlabel, ylabel;
  std::vector<Series> series;
  bool log_y = false;
};

inline std::string render_svg(const Chart& c) {
  const double W = 640, H = 400, L = 70, R = 150, T = 30, B = 50;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  auto ty = [&](double y) { return c.log_y ? (y > 0 ? std::log10(y) : std::nan("")) : y; };
  for (const auto& s : c.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = ty(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f", "#17becf"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << L << "\" y=\"18\">" << c.title << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    o << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
      << fmt(std::round(xv * 1e4) / 1e4) << "</text>\n";
    o << "<text x=\"" << L - 4 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
      << (c.log_y ? "1e" : "") << fmt(std::round(yv * 1e3) / 1e3) << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">"
    << c.xlabel << "</text>\n";
  o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\" text-anchor=\"middle\">" << c.ylabel << "</text>\n";
  for (std::size_t k = 0; k < c.series.size(); ++k) {
    const auto& s = c.series[k];
    const char* col = colors[k % 10];
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.2\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = ty(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      o << (first ? "" : " ") << fmt(std::round(px(s.x[i]) * 100) / 100) << ","
        << fmt(std::round(py(y) * 100) / 100);
      first = false;
    }
    o << "\"/>\n";
    const double ly = T + 16 * (k + 1);
    o << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
      << "\" stroke=\"" << col << "\"/>\n";
    o << "<text x=\"" << W - R + 34 << "\" y=\"" << ly + 4 << "\">" << s.name << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

inline Chart chart_from(const Table& t, const std::string& x, const std::vector<std::string>& ys,
                        std::string title, bool log_y = false) {
  Chart c;
  c.title = std::move(title);
  c.xlabel = x;
  c.ylabel = ys.size() == 1 ? ys[0] : "";
  c.log_y = log_y;
  const auto xv = t.numeric(x);
  for (const auto& y : ys) c.series.push_back({y, xv, t.numeric(y)});
  return c;
}

/// Key/value measurements written next to preset outputs.
using Measurements = std::map<std::string, double>;

inline std::string measurements_csv(const Measurements& m) {
  Table t;
  t.columns = {"key", "value"};
  for (const auto& [k, v] : m) t.add({k, fmt(v)});
  return t.csv();
}

inline Measurements read_measurements(const std::filesystem::path& path) {
  const Table t = read_csv(path);
  Measurements m;
  for (const auto& r : t.rows) m[r.at(0)] = r.at(1) == "nan" ? std::nan("") : std::stod(r.at(1));
  return m;
}

}  // namespace dce
