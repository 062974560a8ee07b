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


#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "dce/experiments.hpp"

using namespace dce;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("dce_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Presets, QuartetErrorIgnoresGlobalSign) {
  EXPECT_NEAR(quartet_error({0.1, -0.2, 0.3, 0.4}, {-0.1, 0.2, -0.3, -0.41}), 0.01, 1e-12);
  EXPECT_NEAR(quartet_error({0.1, -0.2, 0.3, 0.4}, {0.1, -0.2, 0.3, 0.4}), 0.0, 1e-15);
}

TEST(Presets, TableReproducesAndVerifies) {
  const auto dir = scratch("table1");
  const PresetResult r = run_preset("table1", dir);
  EXPECT_FALSE(r.files.empty());
  const Table t = read_csv(dir / "table1" / "amplitudes.csv");
  int analytic = 0, numeric = 0;
  for (const auto& row : t.rows) (row[1] == "analytic" ? analytic : numeric)++;
  EXPECT_EQ(analytic, 7);
  EXPECT_EQ(numeric, 7);

  const auto checks = verify_preset("table1", dir);
  EXPECT_EQ(checks.size(), 14u);
  for (const auto& c : checks) {
    EXPECT_TRUE(c.pass) << c.target << " " << c.measured;
    EXPECT_FALSE(c.cited.empty());
  }
  const auto report = nlohmann::json::parse(slurp(dir / "table1" / "report.json"));
  ASSERT_TRUE(report.is_array());
  EXPECT_EQ(report.size(), 14u);
  for (const auto& e : report)
    for (const char* k : {"target", "cited", "measured", "tolerance", "pass"}) EXPECT_TRUE(e.contains(k));
}

TEST(Presets, RerunIsByteIdentical) {
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  run_preset("table2", a);
  run_preset("table2", b);
  for (const auto& f : std::filesystem::directory_iterator(a / "table2"))
    if (f.path().extension() == ".csv")
      EXPECT_EQ(slurp(f.path()), slurp(b / "table2" / f.path().filename())) << f.path();
}

TEST(Presets, UnknownIdAndMissingOutputs) {
  const auto dir = scratch("missing");
  EXPECT_THROW(run_preset("fig9", dir), ValidationError);
  EXPECT_THROW(verify_preset("fig9", dir), ValidationError);
  EXPECT_THROW(verify_preset("fig1", dir), ValidationError);
}

TEST(Io, CsvRoundTrip) {
  const auto dir = scratch("io");
  Table t;
  t.columns = {"a", "b"};
  t.add({fmt(0.1), fmt(std::nan(""))});
  EXPECT_THROW(t.add({"1"}), ValidationError);
  write_text(dir / "x.csv", t.csv());
  const Table u = read_csv(dir / "x.csv");
  EXPECT_EQ(u.columns, t.columns);
  EXPECT_EQ(u.numeric("a")[0], 0.1);
  EXPECT_TRUE(std::isnan(u.numeric("b")[0]));
  Measurements m{{"k", 1.5e-4}};
  write_text(dir / "m.csv", measurements_csv(m));
  EXPECT_EQ(read_measurements(dir / "m.csv"), m);
}

TEST(Io, SvgContainsSeries) {
  Chart c;
  c.title = "demo";
  c.series.push_back({"s1", {0, 1, 2}, {1, 2, 3}});
  const std::string svg = render_svg(c);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("polyline"), std::string::npos);
  EXPECT_NE(svg.find("s1"), std::string::npos);
}
