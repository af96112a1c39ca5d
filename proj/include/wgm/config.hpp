#pragma once

// JSON configuration: parsing with strict key checking, dotted-path
// overrides, and resolution into the SI/angular parameter structs.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wgm/params.hpp"
#include "wgm/steady_state.hpp"

namespace wgm {

enum class FrequencyConvention { angular, ordinary };
enum class AxisScale { linear, log };
enum class OutputFormat { csv, json };

std::string_view to_string(FrequencyConvention c) noexcept;
std::string_view to_string(AxisScale s) noexcept;
std::string_view to_string(OutputFormat f) noexcept;
OutputFormat parse_output_format(std::string_view s);

struct SystemSection {
  double omega_m = 6.3e7;
  double gamma_m = 500.0;
  double temperature = 0.13;
  double mass = 1e-11;
  double wavelength = 1550e-9;
  double quality_c = 6.4e7;
  double radius = 1.1e-3;
  std::optional<double> kappa_ex;
  // exactly one of these two
  std::optional<double> coupling_J;
  std::optional<double> J_over_Gamma = 1.0;
  // ordinary: omega_m, gamma_m, kappa_ex, coupling_J and detuning are given
  // in Hz and multiplied by 2 pi on resolution
  FrequencyConvention convention = FrequencyConvention::angular;
};

struct DriveSection {
  double power_cw = 0.028;
  double power_ccw = 0.028;
  // theta (symmetric split) or the explicit pair
  std::optional<double> theta = 0.0;
  std::optional<double> phase_cw;
  std::optional<double> phase_ccw;
  // exactly one of these two
  std::optional<double> detuning;
  std::optional<double> detuning_ratio = 0.4;  // Delta_c / omega_m
};

struct AxisSpec {
  std::string name;  // parameter path, see parameter_names()
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  AxisScale scale = AxisScale::linear;

  double value(int i) const;
};

struct SweepSection {
  std::vector<AxisSpec> axes;
  std::vector<std::string> outputs{"E_N", "stable"};
  OutputFormat format = OutputFormat::csv;
  std::size_t max_points = 1'000'000;
};

struct Config {
  SystemSection system;
  DriveSection drive;
  SteadyStateOptions solver;
  SweepSection sweep;
};

struct ResolvedPoint {
  SystemParams system;
  DriveConfig drive;
  SteadyStateOptions solver;
};

Config default_config();

// Starts from default_config(). Unknown keys, wrong types and conflicting
// alternatives throw ValidationError.
Config parse_config(const nlohmann::json& doc);
nlohmann::json to_json(const Config& cfg);

// Missing keys keep their defaults, so a document may be partial.
nlohmann::json load_config_document(const std::filesystem::path& path);

// Overlay `patch` onto `base`; keys that select one of two alternatives
// (theta vs phases, detuning vs detuning_ratio, coupling_J vs J_over_Gamma)
// displace the other alternative.
void overlay(nlohmann::json& base, const nlohmann::json& patch);

// Plain numbers and multiples of pi: "0.4", "pi", "2pi", "pi/5", "9pi/5".
double parse_scalar(const std::string& text);

// "section.key=value"; value is parsed as JSON, then as parse_scalar, and
// finally kept as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

ResolvedPoint resolve(const Config& cfg);

// Numeric parameter paths usable as sweep axes and with set_parameter.
const std::vector<std::string>& parameter_names();
bool is_parameter_name(std::string_view name);
void set_parameter(Config& cfg, std::string_view name, double value);

}  // namespace wgm
