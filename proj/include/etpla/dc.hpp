#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "etpla/config.hpp"
#include "etpla/netlist.hpp"
#include "etpla/truth_table.hpp"

namespace etpla {

enum class BjtState { Cutoff, Active, Saturation };
enum class LedState { Off, Dim, On };

const char* bjt_state_name(BjtState s);
const char* led_state_name(LedState s);

struct SolverOptions {
  BjtModel bjt;
  std::map<std::string, LedModel> led_models = {{"red", {1.8, 1e-3, 5e-5}},
                                                {"blue", {2.6, 1e-3, 5e-5}}};
  double gmin = 1e-12;
  int max_state_iterations = 100;
  double drive_high = 9.0;
  double drive_low = 0.0;
  double logic_threshold = 2.0;
};

SolverOptions solver_options_from(const PipelineConfig& config);

struct DcSolution {
  std::map<std::string, double> node_voltages;
  std::map<std::string, double> branch_currents;  // BJT entry = collector current
  std::map<std::string, BjtState> bjt_states;
  std::map<std::string, LedState> led_states;
  int iterations = 0;
  double max_kcl_residual = 0.0;
};

/// Fixed-point piecewise-linear operating point: assume a state per
/// BJT/LED, stamp the linearized devices into an MNA system, solve, check
/// each state's consistency, repeat until stable.
DcSolution solve_dc(const Netlist& net, const std::string& input_vector,
                    const SolverOptions& options);

LedState classify_led(const DcSolution& solution, const Netlist& net,
                      const std::string& led_component, const SolverOptions& options);

struct SweepEntry {
  std::string vector;
  std::optional<DcSolution> solution;
  std::string error;  // solver failure for this vector, empty otherwise
  std::string logic;  // one char per output
  bool matches = false;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  bool all_match = false;
};

/// Solves all 2^n vectors; an output reads logic 1 iff its LED is On
/// (voltage threshold for LED-less outputs). Per-vector solver failures are
/// recorded, not propagated.
SweepResult sweep_all(const Netlist& net, const TruthTable& table, const SolverOptions& options);

}  // namespace etpla
