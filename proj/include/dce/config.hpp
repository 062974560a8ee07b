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

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dce/model.hpp"

namespace dce {

/// Accepted config keys, in canonical output order.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "nu",    "omega0", "omega_a",  "g",       "h",          "eps",   "eta",
      "gamma", "gamma_ph", "gamma_a", "gamma_ph_a", "kappa", "n_tr"};
  return keys;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view key, std::string_view v) {
  double out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty())
    throw ValidationError("invalid number for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Sets one key; unknown keys throw.
inline void set_param(SystemParams& p, std::string_view key, std::string_view value) {
  key = detail::trim(key);
  value = detail::trim(value);
  if (key == "n_tr") {
    int n = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
      throw ValidationError("invalid integer for 'n_tr': '" + std::string(value) + "'");
    p.n_tr = n;
    return;
  }
  const double v = detail::parse_double(key, value);
  if (key == "nu") p.nu = v;
  else if (key == "omega0") p.omega0 = v;
  else if (key == "omega_a") p.omega_a = v;
  else if (key == "g") p.g = v;
  else if (key == "h") p.h = v;
  else if (key == "eps") p.eps = v;
  else if (key == "eta") p.eta = v;
  else if (key == "gamma") p.gamma = v;
  else if (key == "gamma_ph") p.gamma_ph = v;
  else if (key == "gamma_a") p.gamma_a = v;
  else if (key == "gamma_ph_a") p.gamma_ph_a = v;
  else if (key == "kappa") p.kappa = v;
  else throw ValidationError("unknown config key '" + std::string(key) + "'");
}

/// Applies "key=value".
inline void apply_override(SystemParams& p, std::string_view kv) {
  const auto eq = kv.find('=');
  if (eq == std::string_view::npos)
    throw ValidationError("expected key=value, got '" + std::string(kv) + "'");
  set_param(p, kv.substr(0, eq), kv.substr(eq + 1));
}

/// Parses the flat key=value format; '#' starts a comment.
inline SystemParams parse_config(std::string_view text, SystemParams base = {}) {
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    try {
      apply_override(base, line);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

inline SystemParams load_config(const std::string& path, SystemParams base = {}) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

inline std::string to_config(const SystemParams& p) {
  std::string out;
  auto put = [&](const char* k, double v) {
    out += k;
    out += '=';
    out += detail::format_double(v);
    out += '\n';
  };
  put("nu", p.nu);
  put("omega0", p.omega0);
  put("omega_a", p.omega_a);
  put("g", p.g);
  put("h", p.h);
  put("eps", p.eps);
  put("eta", p.eta);
  put("gamma", p.gamma);
  put("gamma_ph", p.gamma_ph);
  put("gamma_a", p.gamma_a);
  put("gamma_ph_a", p.gamma_ph_a);
  if (p.kappa != 0) put("kappa", p.kappa);
  out += "n_tr=" + std::to_string(p.n_tr) + "\n";
  return out;
}

}  // namespace dce
