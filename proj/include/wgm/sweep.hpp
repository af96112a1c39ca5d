#pragma once

// Grid execution over 1-2 parameter axes, CSV/JSON export and the named
// presets.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wgm/config.hpp"
#include "wgm/pipeline.hpp"

namespace wgm {

struct SweepSpec {
  std::string name = "custom";
  Config base;                         // base.sweep is ignored; the fields below rule
  std::vector<AxisSpec> axes;          // 1 or 2, first axis is the slow (row-major outer) one
  std::vector<std::string> outputs;    // see output_names()
  OutputFormat format = OutputFormat::csv;
  std::size_t max_points = 1'000'000;
  bool status_column = true;
  std::vector<std::string> notes;      // free-form provenance lines
};

SweepSpec spec_from_config(const Config& cfg, std::string name = "custom");

// Throws ValidationError: axis count, names, counts >= 2, log ranges > 0,
// budget, output names, and every grid corner must resolve.
void validate(const SweepSpec& spec);

const std::vector<std::string>& output_names();
std::vector<std::string> column_names(const SweepSpec& spec);
std::size_t point_count(const SweepSpec& spec);

// Config for grid node `index` (row-major).
Config node_config(const SweepSpec& spec, std::size_t index);

struct SweepRow {
  std::vector<double> values;  // NaN marks "not available"
  PointStatus status = PointStatus::no_converge;
};

struct SweepResult {
  std::string name;
  std::vector<std::string> columns;     // numeric columns (status excluded)
  bool status_column = true;
  std::vector<SweepRow> rows;
  std::vector<std::string> provenance;  // comment lines without the leading '#'
  std::size_t ok = 0, unstable = 0, no_converge = 0;
};

struct SweepOptions {
  unsigned threads = 0;  // 0: WGMENT_THREADS, else hardware concurrency
  bool timestamp = true;
};

unsigned resolve_thread_count(unsigned requested);

// Values of one row for an already evaluated point.
std::vector<double> row_values(const SweepSpec& spec, const std::vector<double>& coords,
                               const ResolvedPoint& point, const PointResult& result);

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

std::string format_number(double v);  // %.11e, empty for NaN
void write_csv(std::ostream& os, const SweepResult& result);
void write_json(std::ostream& os, const SweepResult& result);
void write(std::ostream& os, const SweepResult& result, OutputFormat format);

const std::vector<std::string>& scenario_names();
SweepSpec scenario(std::string_view name);

}  // namespace wgm
