#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace etpla {

/// Piecewise-linear switch parameters. The shipped calibration file may
/// override any of these; the part name is bookkeeping only.
struct BjtModel {
  std::string model = "BC547B";
  double vbe_on = 0.7;
  double vce_sat = 0.2;
  double beta = 200.0;

  friend bool operator==(const BjtModel&, const BjtModel&) = default;
};

struct LedModel {
  double vf = 1.8;
  double i_on = 1e-3;
  double i_dim = 5e-5;

  friend bool operator==(const LedModel&, const LedModel&) = default;
};

enum class Strategy { Single, Multi };
enum class StretchAxis { Vertical, Horizontal };
enum class ParasiticScenario { Nominal, WorstCase };

struct PanelSpec {
  double width_cm = 60.0;
  double height_cm = 50.0;

  friend bool operator==(const PanelSpec&, const PanelSpec&) = default;
};

/// Monte-Carlo fault sampling parameters. All draws derive from the run
/// seed plus the trial index; nothing reads wall-clock entropy.
struct FaultScenario {
  double p_short_high = 0.25;
  double p_short_medium = 0.08;
  double p_joint_loosen = 0.05;
  double p_joint_loosen_strained = 0.25;
  double joint_loosen_ohm = 10000.0;
  double stretch_strain = 0.0;
  StretchAxis stretch_axis = StretchAxis::Vertical;
  int trials = 40;

  friend bool operator==(const FaultScenario&, const FaultScenario&) = default;
};

struct PipelineConfig {
  int schema_version = 1;
  double thread_ohm_per_m = 100.0;
  double supply_volts = 9.0;
  BjtModel bjt;
  std::map<std::string, LedModel> led_models = {{"red", {1.8, 1e-3, 5e-5}},
                                                {"blue", {2.6, 1e-3, 5e-5}}};
  std::vector<std::string> led_assignment = {"red", "blue"};
  double led_series_ohm = 0.0;
  double contact_ohm = 5.0;
  double bridge_contact_ohm = 50.0;
  double battery_contact_ohm = 1.0;
  double input_contact_ohm = 380.0;
  double leak_high_ohm = 110.0;
  double leak_medium_ohm = 100000.0;
  double logic_threshold_volts = 2.0;
  double gmin = 1e-12;
  int max_solver_iterations = 100;
  PanelSpec panel;
  Strategy strategy = Strategy::Multi;
  ParasiticScenario parasitics = ParasiticScenario::WorstCase;
  FaultScenario scenario;
  std::uint64_t seed = 42;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

/// Parses a config JSON document; absent fields keep the shipped defaults.
PipelineConfig parse_config(const std::string& text);
std::string config_to_json(const PipelineConfig& config);

}  // namespace etpla
