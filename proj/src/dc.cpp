#include "etpla/dc.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace etpla {

const char* bjt_state_name(BjtState s) {
  switch (s) {
    case BjtState::Cutoff: return "CUTOFF";
    case BjtState::Active: return "ACTIVE";
    case BjtState::Saturation: return "SATURATION";
  }
  return "unknown";
}

const char* led_state_name(LedState s) {
  switch (s) {
    case LedState::Off: return "OFF";
    case LedState::Dim: return "DIM";
    case LedState::On: return "ON";
  }
  return "unknown";
}

SolverOptions solver_options_from(const PipelineConfig& config) {
  SolverOptions options;
  options.bjt = config.bjt;
  options.led_models = config.led_models;
  options.gmin = config.gmin;
  options.max_state_iterations = config.max_solver_iterations;
  options.drive_high = config.supply_volts;
  options.drive_low = 0.0;
  options.logic_threshold = config.logic_threshold_volts;
  return options;
}

namespace {

constexpr double kVoltEps = 1e-9;
constexpr double kAmpEps = 1e-12;

struct DeviceStates {
  std::vector<BjtState> bjt;
  std::vector<bool> led_conducting;

  friend bool operator==(const DeviceStates&, const DeviceStates&) = default;
};

struct Assembly {
  std::map<std::string, int> node_index;  // GND excluded
  std::vector<std::string> node_names;
  std::vector<const Component*> bjts;
  std::vector<const Component*> leds;
  std::vector<std::pair<std::string, double>> drives;  // node -> volts
};

int node_id(const Assembly& asmbl, const std::string& node) {
  if (node == "GND") return -1;
  return asmbl.node_index.at(node);
}

const LedModel& led_model(const SolverOptions& options, const Component& led) {
  const auto it = options.led_models.find(led.model);
  if (it == options.led_models.end()) {
    throw Error(ErrorCode::UnknownLed, "no model parameters for led '" + led.model + "'");
  }
  return it->second;
}

}  // namespace

DcSolution solve_dc(const Netlist& net, const std::string& input_vector,
                    const SolverOptions& options) {
  if (input_vector.size() != net.inputs.size()) {
    throw Error(ErrorCode::LengthMismatch, "vector '" + input_vector + "' drives " +
                                               std::to_string(net.inputs.size()) + " inputs");
  }

  Assembly asmbl;
  for (const auto& comp : net.components) {
    for (const auto& node : comp.nodes) {
      if (node == "GND") continue;
      if (!asmbl.node_index.count(node)) {
        asmbl.node_index[node] = static_cast<int>(asmbl.node_names.size());
        asmbl.node_names.push_back(node);
      }
    }
    if (comp.kind == ComponentKind::BjtNpn) asmbl.bjts.push_back(&comp);
    if (comp.kind == ComponentKind::Led) asmbl.leds.push_back(&comp);
  }
  for (std::size_t i = 0; i < net.inputs.size(); ++i) {
    const char bit = input_vector[i];
    if (bit != '0' && bit != '1') {
      throw Error(ErrorCode::BadSymbol, "drive character '" + std::string(1, bit) + "'");
    }
    asmbl.drives.emplace_back(net.inputs[i].second,
                              bit == '1' ? options.drive_high : options.drive_low);
  }

  const int nodes = static_cast<int>(asmbl.node_names.size());
  DeviceStates states;
  states.bjt.assign(asmbl.bjts.size(), BjtState::Cutoff);
  states.led_conducting.assign(asmbl.leds.size(), false);

  Eigen::VectorXd solution;
  int extra = 0;
  std::vector<int> bjt_unknown, led_unknown;
  int source_unknowns = 0;

  auto assemble_and_solve = [&]() {
    // extra unknowns: one per voltage-source-like branch
    extra = 0;
    source_unknowns = 0;
    for (const auto& comp : net.components) {
      if (comp.kind == ComponentKind::VSource) ++source_unknowns;
    }
    source_unknowns += static_cast<int>(asmbl.drives.size());
    extra += source_unknowns;
    bjt_unknown.assign(asmbl.bjts.size(), -1);
    for (std::size_t i = 0; i < asmbl.bjts.size(); ++i) {
      if (states.bjt[i] == BjtState::Active) {
        bjt_unknown[i] = extra;
        extra += 1;
      } else if (states.bjt[i] == BjtState::Saturation) {
        bjt_unknown[i] = extra;
        extra += 2;
      }
    }
    led_unknown.assign(asmbl.leds.size(), -1);
    for (std::size_t i = 0; i < asmbl.leds.size(); ++i) {
      if (states.led_conducting[i]) {
        led_unknown[i] = extra;
        extra += 1;
      }
    }

    const int size = nodes + extra;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(size, size);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(size);

    for (int i = 0; i < nodes; ++i) A(i, i) += options.gmin;

    auto stamp_conductance = [&](int a, int b, double g) {
      if (a >= 0) A(a, a) += g;
      if (b >= 0) A(b, b) += g;
      if (a >= 0 && b >= 0) {
        A(a, b) -= g;
        A(b, a) -= g;
      }
    };
    auto stamp_source = [&](int p, int n, int x, double volts) {
      if (p >= 0) {
        A(p, nodes + x) += 1;
        A(nodes + x, p) += 1;
      }
      if (n >= 0) {
        A(n, nodes + x) -= 1;
        A(nodes + x, n) -= 1;
      }
      z(nodes + x) = volts;
    };

    int source_slot = 0;
    for (const auto& comp : net.components) {
      switch (comp.kind) {
        case ComponentKind::Resistor:
        case ComponentKind::ThreadSegment:
        case ComponentKind::Contact: {
          if (comp.value <= 0) {
            throw Error(ErrorCode::Internal, "non-positive resistance on " + comp.name);
          }
          stamp_conductance(node_id(asmbl, comp.nodes[0]), node_id(asmbl, comp.nodes[1]),
                            1.0 / comp.value);
          break;
        }
        case ComponentKind::VSource: {
          stamp_source(node_id(asmbl, comp.nodes[0]), node_id(asmbl, comp.nodes[1]),
                       source_slot++, comp.value);
          break;
        }
        case ComponentKind::BjtNpn:
        case ComponentKind::Led:
          break;
      }
    }
    for (const auto& [node, volts] : asmbl.drives) {
      stamp_source(node_id(asmbl, node), -1, source_slot++, volts);
    }

    for (std::size_t i = 0; i < asmbl.bjts.size(); ++i) {
      const Component& bjt = *asmbl.bjts[i];
      const int b = node_id(asmbl, bjt.nodes[0]);
      const int c = node_id(asmbl, bjt.nodes[1]);
      const int e = node_id(asmbl, bjt.nodes[2]);
      if (states.bjt[i] == BjtState::Active) {
        const int x = bjt_unknown[static_cast<std::size_t>(i)];
        // vbe source carrying ib; collector sinks beta*ib
        if (b >= 0) {
          A(b, nodes + x) += 1;
          A(nodes + x, b) += 1;
        }
        if (e >= 0) {
          A(e, nodes + x) -= (1.0 + options.bjt.beta);
          A(nodes + x, e) -= 1;
        }
        if (c >= 0) A(c, nodes + x) += options.bjt.beta;
        z(nodes + x) = options.bjt.vbe_on;
      } else if (states.bjt[i] == BjtState::Saturation) {
        const int xb = bjt_unknown[static_cast<std::size_t>(i)];
        const int xc = xb + 1;
        stamp_source(b, e, xb, options.bjt.vbe_on);
        stamp_source(c, e, xc, options.bjt.vce_sat);
      }
    }
    for (std::size_t i = 0; i < asmbl.leds.size(); ++i) {
      if (!states.led_conducting[i]) continue;
      const Component& led = *asmbl.leds[i];
      stamp_source(node_id(asmbl, led.nodes[0]), node_id(asmbl, led.nodes[1]), led_unknown[i],
                   led_model(options, led).vf);
    }

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) {
      throw Error(ErrorCode::SingularSystem, "nodal system is singular");
    }
    solution = lu.solve(z);
  };

  auto voltage = [&](const std::string& node) {
    const int id = node_id(asmbl, node);
    return id < 0 ? 0.0 : solution(id);
  };

  int iterations = 0;
  for (int iter = 1; iter <= options.max_state_iterations; ++iter) {
    assemble_and_solve();
    iterations = iter;

    DeviceStates next = states;
    for (std::size_t i = 0; i < asmbl.bjts.size(); ++i) {
      const Component& bjt = *asmbl.bjts[i];
      const double vb = voltage(bjt.nodes[0]);
      const double vc = voltage(bjt.nodes[1]);
      const double ve = voltage(bjt.nodes[2]);
      switch (states.bjt[i]) {
        case BjtState::Cutoff:
          if (vb - ve >= options.bjt.vbe_on - kVoltEps) next.bjt[i] = BjtState::Active;
          break;
        case BjtState::Active: {
          const double ib = solution(nodes + bjt_unknown[i]);
          if (ib < -kAmpEps) {
            next.bjt[i] = BjtState::Cutoff;
          } else if (vc - ve < options.bjt.vce_sat - kVoltEps) {
            next.bjt[i] = BjtState::Saturation;
          }
          break;
        }
        case BjtState::Saturation: {
          const double ib = solution(nodes + bjt_unknown[i]);
          const double ic = solution(nodes + bjt_unknown[i] + 1);
          if (ib < -kAmpEps) {
            next.bjt[i] = BjtState::Cutoff;
          } else if (options.bjt.beta * ib < ic - kAmpEps) {
            next.bjt[i] = BjtState::Active;
          }
          break;
        }
      }
    }
    for (std::size_t i = 0; i < asmbl.leds.size(); ++i) {
      const Component& led = *asmbl.leds[i];
      if (states.led_conducting[i]) {
        if (solution(nodes + led_unknown[i]) < -kAmpEps) next.led_conducting[i] = false;
      } else {
        const double vak = voltage(led.nodes[0]) - voltage(led.nodes[1]);
        if (vak > led_model(options, led).vf + kVoltEps) next.led_conducting[i] = true;
      }
    }

    if (next == states) break;
    states = next;
    if (iter == options.max_state_iterations) {
      throw Error(ErrorCode::NoConvergence, "device states still changing after " +
                                                std::to_string(iter) + " iterations");
    }
  }

  DcSolution result;
  result.iterations = iterations;
  result.node_voltages["GND"] = 0.0;
  for (const auto& name : asmbl.node_names) result.node_voltages[name] = voltage(name);

  // branch currents and KCL bookkeeping
  std::map<std::string, double> node_residual;
  auto inject = [&](const std::string& node, double current) {
    if (node != "GND") node_residual[node] += current;
  };
  for (const auto& name : asmbl.node_names) {
    node_residual[name] = -options.gmin * voltage(name);
  }

  int source_slot = 0;
  for (const auto& comp : net.components) {
    switch (comp.kind) {
      case ComponentKind::Resistor:
      case ComponentKind::ThreadSegment:
      case ComponentKind::Contact: {
        const double i = (voltage(comp.nodes[0]) - voltage(comp.nodes[1])) / comp.value;
        result.branch_currents[comp.name] = i;
        inject(comp.nodes[0], -i);
        inject(comp.nodes[1], i);
        break;
      }
      case ComponentKind::VSource: {
        const double i = solution(nodes + source_slot++);
        result.branch_currents[comp.name] = i;
        inject(comp.nodes[0], -i);
        inject(comp.nodes[1], i);
        break;
      }
      default:
        break;
    }
  }
  for (std::size_t d = 0; d < asmbl.drives.size(); ++d) {
    const double i = solution(nodes + source_slot++);
    inject(asmbl.drives[d].first, -i);
  }
  for (std::size_t i = 0; i < asmbl.bjts.size(); ++i) {
    const Component& bjt = *asmbl.bjts[i];
    result.bjt_states[bjt.name] = states.bjt[i];
    double ib = 0.0, ic = 0.0;
    if (states.bjt[i] == BjtState::Active) {
      ib = solution(nodes + bjt_unknown[i]);
      ic = options.bjt.beta * ib;
    } else if (states.bjt[i] == BjtState::Saturation) {
      ib = solution(nodes + bjt_unknown[i]);
      ic = solution(nodes + bjt_unknown[i] + 1);
    }
    result.branch_currents[bjt.name] = ic;
    inject(bjt.nodes[0], -ib);
    inject(bjt.nodes[1], -ic);
    inject(bjt.nodes[2], ib + ic);
  }
  for (std::size_t i = 0; i < asmbl.leds.size(); ++i) {
    const Component& led = *asmbl.leds[i];
    const double current = states.led_conducting[i] ? solution(nodes + led_unknown[i]) : 0.0;
    result.branch_currents[led.name] = current;
    inject(led.nodes[0], -current);
    inject(led.nodes[1], current);
    const LedModel& model = led_model(options, led);
    LedState state = LedState::Off;
    if (current >= model.i_on) {
      state = LedState::On;
    } else if (current >= model.i_dim) {
      state = LedState::Dim;
    }
    result.led_states[led.name] = state;
  }

  for (const auto& [node, residual] : node_residual) {
    result.max_kcl_residual = std::max(result.max_kcl_residual, std::abs(residual));
  }
  return result;
}

LedState classify_led(const DcSolution& solution, const Netlist& net,
                      const std::string& led_component, const SolverOptions& options) {
  const Component* comp = net.find_component(led_component);
  if (!comp || comp->kind != ComponentKind::Led) {
    throw Error(ErrorCode::UnknownLed, "no led named '" + led_component + "'");
  }
  const LedModel& model = led_model(options, *comp);
  const double current = solution.branch_currents.at(led_component);
  if (current >= model.i_on) return LedState::On;
  if (current >= model.i_dim) return LedState::Dim;
  return LedState::Off;
}

SweepResult sweep_all(const Netlist& net, const TruthTable& table, const SolverOptions& options) {
  if (table.inputs.size() != net.inputs.size()) {
    throw Error(ErrorCode::DimensionMismatch, "table drives " +
                                                  std::to_string(table.inputs.size()) +
                                                  " inputs, netlist has " +
                                                  std::to_string(net.inputs.size()));
  }
  SweepResult result;
  result.all_match = true;
  const std::uint32_t total = 1u << table.n();
  for (std::uint32_t v = 0; v < total; ++v) {
    SweepEntry entry;
    entry.vector = vector_string(v, table.n());
    try {
      entry.solution = solve_dc(net, entry.vector, options);
      for (const auto& [name, anode] : net.outputs) {
        const std::string led_name = "led." + name;
        char bit = '0';
        if (entry.solution->led_states.count(led_name)) {
          bit = entry.solution->led_states.at(led_name) == LedState::On ? '1' : '0';
        } else {
          bit = entry.solution->node_voltages.at(anode) >= options.logic_threshold ? '1' : '0';
        }
        entry.logic += bit;
      }
      entry.matches = true;
      for (int k = 0; k < table.m(); ++k) {
        const char want = table.rows[v][static_cast<std::size_t>(k)];
        if (want != '-' && want != entry.logic[static_cast<std::size_t>(k)]) {
          entry.matches = false;
        }
      }
    } catch (const Error& e) {
      entry.error = e.what();
      entry.matches = false;
    }
    if (!entry.matches) result.all_match = false;
    result.entries.push_back(std::move(entry));
  }
  return result;
}

}  // namespace etpla
