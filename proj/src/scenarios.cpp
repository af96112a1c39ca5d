#include <numbers>

#include "wgm/errors.hpp"
#include "wgm/sweep.hpp"

namespace wgm {

namespace {

constexpr double kPi = std::numbers::pi;

AxisSpec axis(std::string name, double min, double max, int count,
              AxisScale scale = AxisScale::linear) {
  return AxisSpec{std::move(name), min, max, count, scale};
}

SweepSpec base(std::string name) {
  SweepSpec s;
  s.name = std::move(name);
  s.base = default_config();
  return s;
}

SweepSpec single_pump(std::string name) {
  SweepSpec s = base(std::move(name));
  s.base.drive.power_ccw = 0.0;
  s.notes.push_back("single pump: power_ccw = 0");
  return s;
}

SweepSpec fig2(std::string name, bool double_pump, const char* measure) {
  SweepSpec s = double_pump ? base(std::move(name)) : single_pump(std::move(name));
  if (double_pump) {
    s.base.drive.theta = 0.0;
    s.notes.push_back("double pump with equal powers and theta = 0");
  }
  s.axes = {axis("system.J_over_Gamma", 0.0, 1.0, 3), axis("drive.detuning_ratio", 0.0, 2.0, 201)};
  s.outputs = {measure, "stable", "max_real_part"};
  return s;
}

SweepSpec fig6(std::string name, double theta, double ratio, bool double_pump) {
  SweepSpec s = double_pump ? base(std::move(name)) : single_pump(std::move(name));
  s.base.system.J_over_Gamma = 1.0;
  s.base.drive.theta = theta;
  s.base.drive.detuning_ratio = ratio;
  s.axes = {axis("system.temperature", 0.01, 10.0, 31, AxisScale::log),
            axis("system.quality_c", 1e6, 1e9, 31, AxisScale::log)};
  s.outputs = {"E_N_cw", "stable", "max_real_part"};
  s.notes.push_back("axis ranges bracket the operating point (T = 0.13 K, Q_c = 6.4e7)");
  return s;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"fig2a", "fig2b", "fig2c",      "fig2d",  "fig3ab", "fig3c",
                                              "fig4a", "fig4b", "fig5",       "fig6",   "fig6-theta0",
                                              "fig6-theta-pi5"};
  return names;
}

SweepSpec scenario(std::string_view name) {
  if (name == "fig2a") return fig2("fig2a", false, "E_N_cw");
  if (name == "fig2b") return fig2("fig2b", false, "E_N_ccw");
  if (name == "fig2c") return fig2("fig2c", true, "E_N_cw");
  if (name == "fig2d") return fig2("fig2d", true, "E_N_ccw");
  if (name == "fig3ab") {
    SweepSpec s = base("fig3ab");
    s.axes = {axis("drive.theta", 0.0, 2.0 * kPi, 73), axis("drive.detuning_ratio", 0.0, 2.0, 201)};
    s.outputs = {"E_N", "stable"};
    s.notes.push_back("double pump, J/Gamma = 1; theta grid closes at 2pi so the last row repeats the first");
    return s;
  }
  if (name == "fig3c") {
    SweepSpec s = base("fig3c");
    s.axes = {axis("drive.detuning_ratio", 0.4, 0.8, 2), axis("drive.theta", 0.0, 2.0 * kPi, 181)};
    s.outputs = {"E_N", "stable"};
    s.notes.push_back("double pump, J/Gamma = 1; polar cuts at detuning ratio 0.4 and 0.8");
    return s;
  }
  if (name == "fig4a") {
    SweepSpec s = base("fig4a");
    s.axes = {axis("drive.theta", 0.0, 2.0 * kPi, 73), axis("drive.detuning_ratio", 0.0, 2.0, 201)};
    s.outputs = {"lambda6", "max_real_part", "stable"};
    s.notes.push_back("double pump, J/Gamma = 1");
    return s;
  }
  if (name == "fig4b") {
    SweepSpec s = base("fig4b");
    s.axes = {axis("drive.theta", 0.0, kPi / 5.0, 2), axis("drive.detuning_ratio", 0.0, 2.0, 201)};
    s.outputs = {"E_N_cw", "stable"};
    s.notes.push_back("double pump, J/Gamma = 1, theta in {0, pi/5}; the single-pump reference is the J/Gamma = 1 row of fig2a");
    return s;
  }
  if (name == "fig5") {
    SweepSpec s = base("fig5");
    s.base.drive.detuning_ratio = 0.4;
    s.axes = {axis("drive.theta", kPi / 5.0, 9.0 * kPi / 5.0, 2)};
    s.outputs = {"ellipse_qX", "E_N", "stable"};
    s.notes.push_back("double pump, J/Gamma = 1, detuning ratio 0.4; ellipse semi-axes of the 1/e contour, vacuum radius 1");
    return s;
  }
  if (name == "fig6") return fig6("fig6", 0.0, 1.1, false);
  if (name == "fig6-theta0") return fig6("fig6-theta0", 0.0, 0.27, true);
  if (name == "fig6-theta-pi5") return fig6("fig6-theta-pi5", kPi / 5.0, 0.4, true);

  std::string list;
  for (const auto& n : scenario_names()) list += " " + n;
  throw ValidationError("scenario", "unknown scenario '" + std::string(name) + "'; available:" + list);
}

}  // namespace wgm
