#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "etpla/config.hpp"
#include "etpla/error.hpp"
#include "etpla/parasitics.hpp"
#include "etpla/pla.hpp"

namespace etpla {

enum class ComponentKind { Resistor, BjtNpn, ThreadSegment, Contact, Led, VSource };

const char* component_kind_name(ComponentKind kind);
ComponentKind component_kind_from_name(const std::string& name);

/// Two-terminal element, or three for a BJT (base, collector, emitter).
/// `value` is ohms for resistive kinds and volts for the source; BJT and
/// LED carry a model name instead.
struct Component {
  std::string name;
  ComponentKind kind = ComponentKind::Resistor;
  double value = 0.0;
  std::string model;
  std::vector<std::string> nodes;

  friend bool operator==(const Component&, const Component&) = default;
};

enum class GateKind { Not, And2, Or2 };

const char* gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(const std::string& name);

struct GateInstance {
  std::string name;
  GateKind kind = GateKind::Not;
  std::vector<std::string> input_nets;
  std::string output_net;
  std::string label;
  std::map<std::string, std::string> terminals;  // terminal name -> net

  friend bool operator==(const GateInstance&, const GateInstance&) = default;
};

struct JointBinding {
  int index = -1;
  std::string component;

  friend bool operator==(const JointBinding&, const JointBinding&) = default;
};

struct ShortCandidateBinding {
  int index = -1;
  std::string node_a;
  std::string node_b;
  Severity severity = Severity::Medium;
  bool enabled = false;  // a shunt.<index> contact exists in the component list

  friend bool operator==(const ShortCandidateBinding&, const ShortCandidateBinding&) = default;
};

struct Netlist {
  double supply_volts = 9.0;
  std::vector<Component> components;
  std::vector<std::pair<std::string, std::string>> inputs;   // variable -> driven node
  std::vector<std::pair<std::string, std::string>> outputs;  // output -> LED anode node
  std::vector<GateInstance> gates;
  std::map<std::string, std::string> probes;  // plane net -> far-end node
  std::vector<JointBinding> joints;
  std::vector<ShortCandidateBinding> short_candidates;

  std::set<std::string> node_names() const;
  const Component* find_component(const std::string& name) const;

  friend bool operator==(const Netlist&, const Netlist&) = default;
};

/// Connectivity (all nodes reachable from VCC or GND) and single-source
/// invariants; throws on violation.
void validate_netlist(const Netlist& net);

/// Fixed RTL gate topologies with open terminal nodes in1/in2/out/vcc/gnd
/// (NOT uses in/out). Component values are the stock 10k base and 1k pull
/// resistors.
Netlist gate_template(GateKind kind);

/// One inverter per input, one series-pass AND per product term, one
/// parallel-pass OR per output, an LED in each output's pulldown path, one
/// shared 9 V source. Terms are limited to two literals and outputs to two
/// terms (the garment stocks 2-input gates); single-literal terms and
/// single-term outputs tie both gate inputs together.
Netlist expand_netlist(const PlaMatrix& matrix, const PipelineConfig& config);

/// Inserts thread segments, stitched-joint contacts and input-clip contacts
/// from the extraction, re-homing load pins onto the split subnodes. Under
/// WorstCase every short candidate also gains a leakage contact; Nominal
/// only records the candidate bindings.
Netlist attach_parasitics(const Netlist& net, const ParasiticExtraction& extraction,
                          const PipelineConfig& config, ParasiticScenario scenario);

/// Removes everything attach_parasitics added and re-merges split nodes.
Netlist strip_parasitics(const Netlist& net);

}  // namespace etpla
