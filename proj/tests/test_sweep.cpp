#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "support/fixtures.hpp"
#include "wgm/config.hpp"
#include "wgm/errors.hpp"
#include "wgm/sweep.hpp"

using namespace wgm;
using test::kPi;

namespace {

SweepSpec small_grid() {
  SweepSpec s;
  s.name = "test";
  s.base = default_config();
  s.axes = {{"drive.theta", 0.0, 2.0 * kPi, 9, AxisScale::linear},
            {"drive.detuning_ratio", -0.5, 2.0, 11, AxisScale::linear}};
  s.outputs = {"E_N", "stable", "max_real_part"};
  return s;
}

std::string csv_of(const SweepResult& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

// CSV without provenance lines that mention threads or time.
std::string data_of(const SweepResult& r) {
  std::istringstream in(csv_of(r));
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# threads", 0) == 0 || line.rfind("# generated", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

std::string field_of(const SweepSpec& s) {
  try {
    validate(s);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<accepted>";
}

std::size_t column(const SweepResult& r, const std::string& name) {
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (r.columns[i] == name) return i;
  }
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("sweep definitions are validated") {
  CHECK(field_of(small_grid()) == "<accepted>");
  SweepSpec s = small_grid();
  s.axes.clear();
  CHECK(field_of(s) == "sweep.axes");
  s = small_grid();
  s.axes.push_back({"system.temperature", 0.1, 1.0, 2, AxisScale::linear});
  CHECK(field_of(s) == "sweep.axes");
  s = small_grid();
  s.axes[1].count = 1;
  CHECK(field_of(s) == "sweep.axes[1].count");
  s = small_grid();
  s.axes[0].name = "drive.thta";
  CHECK(field_of(s) == "sweep.axes[0].name");
  s = small_grid();
  s.axes[1].max = std::nan("");
  CHECK(field_of(s) == "sweep.axes[1]");
  s = small_grid();
  s.axes[1] = {"system.temperature", 0.0, 1.0, 3, AxisScale::log};
  CHECK(field_of(s) == "sweep.axes[1].scale");
  s = small_grid();
  s.axes[1].name = "drive.theta";
  CHECK(field_of(s) == "sweep.axes");
  s = small_grid();
  s.max_points = 98;
  CHECK(field_of(s) == "sweep.max_points");
  s = small_grid();
  s.outputs = {"E_N", "entropy"};
  CHECK(field_of(s) == "sweep.outputs");
  s = small_grid();
  s.outputs.clear();
  CHECK(field_of(s) == "sweep.outputs");
  s = small_grid();
  s.axes[1] = {"system.temperature", -1.0, 1.0, 3, AxisScale::linear};
  CHECK(field_of(s) == "system.temperature");
  CHECK_THROWS_AS(run_sweep(s, {1, false}), ValidationError);
}

TEST_CASE("row-major layout and column expansion") {
  SweepSpec s = small_grid();
  s.outputs = {"E_N", "photons", "hurwitz", "ellipse_qX", "theta", "detuning_ratio", "stable"};
  const auto cols = column_names(s);
  // axis columns come first and are not repeated by the matching outputs
  REQUIRE(cols.size() == 2 + 2 + 2 + 6 + 8 + 1);
  CHECK(cols[0] == "theta");
  CHECK(cols[1] == "detuning_ratio");
  CHECK(cols[2] == "E_N_cw");
  CHECK(cols[4] == "N_cw");
  CHECK(cols[6] == "lambda1");
  CHECK(cols[12] == "qX_cw_minor");
  CHECK(cols[19] == "qX_ccw_squeezed");
  CHECK(cols.back() == "stable");
  CHECK(point_count(s) == 99);

  const SweepResult r = run_sweep(s, {1, false});
  REQUIRE(r.rows.size() == 99);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CAPTURE(i);
    REQUIRE(r.rows[i].values.size() == cols.size());
    CHECK(r.rows[i].values[0] == s.axes[0].value(static_cast<int>(i / 11)));
    CHECK(r.rows[i].values[1] == s.axes[1].value(static_cast<int>(i % 11)));
  }
  CHECK(r.ok + r.unstable + r.no_converge == 99);
}

TEST_CASE("two-node axes and one-axis sweeps") {
  SweepSpec s = small_grid();
  s.axes = {{"drive.theta", 0.0, 0.0, 2, AxisScale::linear}};
  const SweepResult r = run_sweep(s, {1, false});
  REQUIRE(r.rows.size() == 2);
  CHECK(csv_of(r).find("\n0.00000000000e+00,") != std::string::npos);
  for (std::size_t k = 0; k < r.rows[0].values.size(); ++k) CHECK(r.rows[0].values[k] == r.rows[1].values[k]);
}

TEST_CASE("status accounting and empty entanglement for unstable rows") {
  const SweepResult r = run_sweep(small_grid(), {1, false});
  const std::size_t en = column(r, "E_N_cw");
  const std::size_t st = column(r, "stable");
  const std::size_t mr = column(r, "max_real_part");
  CHECK(r.unstable > 0);
  CHECK(r.ok > 0);
  for (const auto& row : r.rows) {
    if (row.status == PointStatus::ok) {
      CHECK(row.values[st] == 1.0);
      CHECK(row.values[mr] < 0.0);
      CHECK(row.values[en] >= 0.0);
    } else if (row.status == PointStatus::unstable) {
      CHECK(row.values[st] == 0.0);
      CHECK(std::isnan(row.values[en]));
      CHECK(std::isnan(row.values[en + 1]));
    }
  }
  // no "0" stands in for a missing value
  const std::string csv = csv_of(r);
  std::istringstream in(csv);
  std::string line;
  int unstable_lines = 0;
  while (std::getline(in, line)) {
    if (line.size() > 9 && line.compare(line.size() - 9, 9, ",unstable") == 0) {
      ++unstable_lines;
      const auto a = line.find(',');
      const auto b = line.find(',', a + 1);
      CHECK(line.substr(b, 3) == ",,,");
    }
  }
  CHECK(unstable_lines == static_cast<int>(r.unstable));
}

TEST_CASE("csv and json shapes") {
  SweepSpec s = small_grid();
  s.axes[1].count = 3;
  const SweepResult r = run_sweep(s, {1, true});
  const std::string csv = csv_of(r);
  std::istringstream in(csv);
  std::string line;
  int comments = 0;
  while (std::getline(in, line) && line.rfind("# ", 0) == 0) ++comments;
  CHECK(comments == static_cast<int>(r.provenance.size()));
  CHECK(line == "theta,detuning_ratio,E_N_cw,E_N_ccw,stable,max_real_part,status");
  CHECK(csv.find("# tool wgment ") == 0);
  CHECK(csv.find("# generated ") != std::string::npos);
  CHECK(csv.find("# config {") != std::string::npos);
  CHECK(format_number(1.0) == "1.00000000000e+00");
  CHECK(format_number(-2.5e-7) == "-2.50000000000e-07");
  CHECK(format_number(std::nan("")).empty());

  std::ostringstream js;
  write(js, r, OutputFormat::json);
  const auto doc = nlohmann::json::parse(js.str());
  CHECK(doc["columns"].size() == 7);
  CHECK(doc["rows"].size() == r.rows.size());
  bool saw_null = false;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = doc["rows"][i];
    CHECK(row.back() == std::string(to_string(r.rows[i].status)));
    for (std::size_t k = 0; k < r.rows[i].values.size(); ++k) {
      if (std::isnan(r.rows[i].values[k])) {
        CHECK(row[k].is_null());
        saw_null = true;
      } else {
        CHECK(row[k].get<double>() == r.rows[i].values[k]);
      }
    }
  }
  CHECK(saw_null);
}

TEST_CASE("output is independent of the thread count") {
  const SweepSpec s = small_grid();
  const SweepResult one = run_sweep(s, {1, false});
  const SweepResult four = run_sweep(s, {4, false});
  CHECK(data_of(one) == data_of(four));
  CHECK(data_of(one) == data_of(run_sweep(s, {3, false})));
}

TEST_CASE("a node evaluated alone reproduces its row") {
  const SweepSpec s = small_grid();
  const SweepResult r = run_sweep(s, {2, false});
  for (std::size_t i : {std::size_t{0}, std::size_t{17}, std::size_t{50}, std::size_t{98}}) {
    const ResolvedPoint p = resolve(node_config(s, i));
    const PointResult pr = evaluate_point(p.system, p.drive, p.solver);
    const std::vector<double> coords{r.rows[i].values[0], r.rows[i].values[1]};
    const auto v = row_values(s, coords, p, pr);
    REQUIRE(v.size() == r.rows[i].values.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
      CHECK((v[k] == r.rows[i].values[k] || (std::isnan(v[k]) && std::isnan(r.rows[i].values[k]))));
    }
    CHECK(pr.status == r.rows[i].status);
  }
}

TEST_CASE("mirror symmetry across a theta grid") {
  SweepSpec s = scenario("fig3ab");
  s.axes[0].count = 17;
  s.axes[1].count = 21;
  const SweepResult r = run_sweep(s, {0, false});
  const std::size_t cw = column(r, "E_N_cw"), ccw = column(r, "E_N_ccw");
  for (int i = 0; i < 17; ++i) {
    for (int j = 0; j < 21; ++j) {
      const auto& a = r.rows[static_cast<std::size_t>(i * 21 + j)];
      const auto& b = r.rows[static_cast<std::size_t>((16 - i) * 21 + j)];
      CHECK(a.status == b.status);
      if (a.status != PointStatus::ok) continue;
      CHECK(std::abs(a.values[cw] - b.values[ccw]) <= 1e-8);
    }
  }
}

TEST_CASE("scenarios") {
  for (const auto& name : scenario_names()) {
    CAPTURE(name);
    const SweepSpec s = scenario(name);
    CHECK(s.name == name);
    CHECK_NOTHROW(validate(s));
  }
  try {
    (void)scenario("fig9");
    FAIL("accepted an unknown scenario");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("fig3ab") != std::string::npos);
  }
  const SweepSpec f4 = scenario("fig4a");
  CHECK(column_names(f4) == std::vector<std::string>{"theta", "detuning_ratio", "lambda6", "max_real_part", "stable"});
  const SweepSpec f5 = scenario("fig5");
  const SweepResult r = run_sweep(f5, {1, false});
  REQUIRE(r.rows.size() == 2);
  CHECK(r.ok == 2);
  CHECK(r.rows[0].values[column(r, "qX_cw_squeezed")] == 1.0);
  CHECK(r.rows[0].values[column(r, "qX_ccw_squeezed")] == 0.0);
  CHECK(r.rows[1].values[column(r, "qX_cw_squeezed")] == 0.0);
  CHECK(r.rows[1].values[column(r, "qX_ccw_squeezed")] == 1.0);
}

TEST_CASE("single-pump scenario keeps the second pump off") {
  SweepSpec s = scenario("fig2a");
  s.axes[1].count = 5;
  s.outputs.push_back("photons");
  const SweepResult r = run_sweep(s, {1, false});
  const std::size_t nccw = column(r, "N_ccw");
  const std::size_t jcol = column(r, "J_over_Gamma");
  for (const auto& row : r.rows) {
    if (row.values[jcol] == 0.0) CHECK(row.values[nccw] == 0.0);
  }
}

TEST_CASE("thread count from the environment") {
  CHECK(resolve_thread_count(3) == 3);
  ::setenv("WGMENT_THREADS", "5", 1);
  CHECK(resolve_thread_count(0) == 5);
  for (const char* bad : {"0", "-2", "two", "3x", "5000"}) {
    ::setenv("WGMENT_THREADS", bad, 1);
    CHECK_THROWS_AS(resolve_thread_count(0), ValidationError);
  }
  ::setenv("WGMENT_THREADS", "", 1);
  CHECK(resolve_thread_count(0) >= 1);
  ::unsetenv("WGMENT_THREADS");
  CHECK(resolve_thread_count(0) >= 1);
}
