#include "etpla/netlist.hpp"

#include <algorithm>
#include <queue>

namespace etpla {

const char* severity_name(Severity s) { return s == Severity::High ? "high" : "medium"; }

const char* component_kind_name(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Resistor: return "resistor";
    case ComponentKind::BjtNpn: return "bjt_npn";
    case ComponentKind::ThreadSegment: return "thread_segment";
    case ComponentKind::Contact: return "contact";
    case ComponentKind::Led: return "led";
    case ComponentKind::VSource: return "vsource";
  }
  return "unknown";
}

ComponentKind component_kind_from_name(const std::string& name) {
  if (name == "resistor") return ComponentKind::Resistor;
  if (name == "bjt_npn") return ComponentKind::BjtNpn;
  if (name == "thread_segment") return ComponentKind::ThreadSegment;
  if (name == "contact") return ComponentKind::Contact;
  if (name == "led") return ComponentKind::Led;
  if (name == "vsource") return ComponentKind::VSource;
  throw Error(ErrorCode::Malformed, "component kind '" + name + "'");
}

const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::Not: return "NOT";
    case GateKind::And2: return "AND2";
    case GateKind::Or2: return "OR2";
  }
  return "unknown";
}

GateKind gate_kind_from_name(const std::string& name) {
  if (name == "NOT") return GateKind::Not;
  if (name == "AND2") return GateKind::And2;
  if (name == "OR2") return GateKind::Or2;
  throw Error(ErrorCode::Malformed, "gate kind '" + name + "'");
}

std::set<std::string> Netlist::node_names() const {
  std::set<std::string> names;
  for (const auto& comp : components) {
    for (const auto& node : comp.nodes) names.insert(node);
  }
  return names;
}

const Component* Netlist::find_component(const std::string& name) const {
  for (const auto& comp : components) {
    if (comp.name == name) return &comp;
  }
  return nullptr;
}

void validate_netlist(const Netlist& net) {
  int sources = 0;
  for (const auto& comp : net.components) {
    const std::size_t want = comp.kind == ComponentKind::BjtNpn ? 3 : 2;
    if (comp.nodes.size() != want) {
      throw Error(ErrorCode::Internal, "component " + comp.name + " has wrong terminal count");
    }
    if (comp.kind == ComponentKind::VSource) ++sources;
  }
  if (sources != 1) {
    throw Error(ErrorCode::Internal, "netlist needs exactly one source, has " +
                                         std::to_string(sources));
  }
  // every node reachable from VCC or GND
  std::map<std::string, std::vector<const Component*>> adjacency;
  for (const auto& comp : net.components) {
    for (const auto& node : comp.nodes) adjacency[node].push_back(&comp);
  }
  std::set<std::string> seen;
  std::queue<std::string> frontier;
  for (const char* rail : {"VCC", "GND"}) {
    if (adjacency.count(rail)) {
      seen.insert(rail);
      frontier.push(rail);
    }
  }
  while (!frontier.empty()) {
    const std::string node = frontier.front();
    frontier.pop();
    for (const Component* comp : adjacency[node]) {
      for (const auto& next : comp->nodes) {
        if (seen.insert(next).second) frontier.push(next);
      }
    }
  }
  for (const auto& [node, comps] : adjacency) {
    if (!seen.count(node)) {
      throw Error(ErrorCode::Internal, "node " + node + " unreachable from the rails");
    }
  }
}

Netlist gate_template(GateKind kind) {
  Netlist net;
  auto resistor = [&](const std::string& name, double ohms, const std::string& a,
                      const std::string& b) {
    net.components.push_back({name, ComponentKind::Resistor, ohms, "", {a, b}});
  };
  auto bjt = [&](const std::string& name, const std::string& b, const std::string& c,
                 const std::string& e) {
    net.components.push_back({name, ComponentKind::BjtNpn, 0.0, "BC547B", {b, c, e}});
  };
  switch (kind) {
    case GateKind::Not:
      resistor("rb", 10000, "in", "b");
      resistor("rc", 1000, "vcc", "out");
      bjt("t", "b", "out", "gnd");
      break;
    case GateKind::And2:
      resistor("rb1", 10000, "in1", "b1");
      resistor("rb2", 10000, "in2", "b2");
      bjt("t1", "b1", "vcc", "m");
      bjt("t2", "b2", "m", "out");
      resistor("rp", 1000, "out", "gnd");
      break;
    case GateKind::Or2:
      resistor("rb1", 10000, "in1", "b1");
      resistor("rb2", 10000, "in2", "b2");
      bjt("t1", "b1", "vcc", "out");
      bjt("t2", "b2", "vcc", "out");
      resistor("rp", 1000, "out", "gnd");
      break;
  }
  return net;
}

Netlist expand_netlist(const PlaMatrix& matrix, const PipelineConfig& config) {
  validate(matrix);
  if (matrix.term_count() == 0) {
    throw Error(ErrorCode::EmptyMatrix, "matrix has no product terms");
  }
  for (std::size_t t = 0; t < matrix.term_count(); ++t) {
    const Implicant imp = term_implicant(matrix, t);
    if (implicant_literal_count(imp, matrix.n()) > 2) {
      throw Error(ErrorCode::FaninExceeded,
                  "term " + matrix.term_labels[t] + " needs more than 2 gate inputs");
    }
  }
  for (int k = 0; k < matrix.m(); ++k) {
    int refs = 0;
    for (std::size_t t = 0; t < matrix.term_count(); ++t) {
      if (matrix.or_plane.at(static_cast<std::size_t>(k), t)) ++refs;
    }
    if (refs > 2) {
      throw Error(ErrorCode::FaninExceeded,
                  "output " + matrix.outputs[static_cast<std::size_t>(k)] +
                      " references more than 2 terms");
    }
  }

  Netlist net;
  net.supply_volts = config.supply_volts;
  auto resistor = [&](const std::string& name, double ohms, const std::string& a,
                      const std::string& b) {
    net.components.push_back({name, ComponentKind::Resistor, ohms, "", {a, b}});
  };
  auto bjt = [&](const std::string& name, const std::string& b, const std::string& c,
                 const std::string& e) {
    net.components.push_back({name, ComponentKind::BjtNpn, 0.0, config.bjt.model, {b, c, e}});
  };

  net.components.push_back(
      {"bat", ComponentKind::VSource, config.supply_volts, "", {"VCC", "GND"}});

  // one inverter per input; the raw line taps the input node, the
  // complement line taps the collector
  for (int i = 0; i < matrix.n(); ++i) {
    const std::string& name = matrix.inputs[static_cast<std::size_t>(i)];
    const std::string gate = "not." + name;
    const std::string raw = "in." + name;
    const std::string inv = "inv." + name;
    resistor(gate + ".rb", 10000, raw, gate + ".b");
    resistor(gate + ".rc", 1000, "VCC", inv);
    bjt(gate + ".t", gate + ".b", inv, "GND");
    net.inputs.emplace_back(name, raw);
    GateInstance inst;
    inst.name = gate;
    inst.kind = GateKind::Not;
    inst.input_nets = {raw};
    inst.output_net = inv;
    inst.label = name + "'";
    inst.terminals = {{"in", raw}, {"out", inv}, {"vcc", "VCC"}, {"gnd", "GND"}};
    net.gates.push_back(std::move(inst));
  }

  auto line_net = [&](int input, bool positive) {
    const std::string& name = matrix.inputs[static_cast<std::size_t>(input)];
    return (positive ? "in." : "inv.") + name;
  };

  for (std::size_t t = 0; t < matrix.term_count(); ++t) {
    const Implicant imp = term_implicant(matrix, t);
    std::vector<std::string> lines;
    for (int i = 0; i < matrix.n(); ++i) {
      if (imp.care & (1u << i)) lines.push_back(line_net(i, imp.value & (1u << i)));
    }
    if (lines.size() == 1) lines.push_back(lines[0]);  // duplicate-input tie
    const std::string gate = "and." + std::to_string(t);
    const std::string out = "term." + std::to_string(t);
    resistor(gate + ".rb1", 10000, lines[0], gate + ".b1");
    resistor(gate + ".rb2", 10000, lines[1], gate + ".b2");
    bjt(gate + ".t1", gate + ".b1", "VCC", gate + ".m");
    bjt(gate + ".t2", gate + ".b2", gate + ".m", out);
    resistor(gate + ".rp", 1000, out, "GND");
    GateInstance inst;
    inst.name = gate;
    inst.kind = GateKind::And2;
    inst.input_nets = lines;
    inst.output_net = out;
    inst.label = matrix.term_labels[t];
    inst.terminals = {{"in1", lines[0]}, {"in2", lines[1]}, {"out", out},
                      {"vcc", "VCC"},    {"gnd", "GND"}};
    net.gates.push_back(std::move(inst));
  }

  for (int k = 0; k < matrix.m(); ++k) {
    const std::string& name = matrix.outputs[static_cast<std::size_t>(k)];
    std::vector<std::string> terms;
    for (std::size_t t = 0; t < matrix.term_count(); ++t) {
      if (matrix.or_plane.at(static_cast<std::size_t>(k), t)) {
        terms.push_back("term." + std::to_string(t));
      }
    }
    if (terms.size() == 1) terms.push_back(terms[0]);
    const std::string gate = "or." + name;
    const std::string out = "out." + name;
    const std::string ret = out + ".r";
    resistor(gate + ".rb1", 10000, terms[0], gate + ".b1");
    resistor(gate + ".rb2", 10000, terms[1], gate + ".b2");
    bjt(gate + ".t1", gate + ".b1", "VCC", out);
    bjt(gate + ".t2", gate + ".b2", "VCC", out);
    resistor(gate + ".rp", 1000, ret, "GND");
    // alert path: the gate's own 1k pulldown limits the LED current
    const std::string& model =
        config.led_assignment[static_cast<std::size_t>(k) % config.led_assignment.size()];
    std::string anode = out;
    if (config.led_series_ohm > 0.0) {
      anode = out + ".a";
      resistor("led." + name + ".rs", config.led_series_ohm, out, anode);
    }
    net.components.push_back({"led." + name, ComponentKind::Led, 0.0, model, {anode, ret}});
    net.outputs.emplace_back(name, anode);
    GateInstance inst;
    inst.name = gate;
    inst.kind = GateKind::Or2;
    inst.input_nets = terms;
    inst.output_net = out;
    inst.label = name;
    inst.terminals = {{"in1", terms[0]}, {"in2", terms[1]}, {"out", out},
                      {"ret", ret},      {"vcc", "VCC"},    {"gnd", "GND"}};
    net.gates.push_back(std::move(inst));
  }

  validate_netlist(net);
  return net;
}

namespace {

double joint_resistance(const ParasiticEdge& edge, const PipelineConfig& config) {
  if (edge.bridge) return config.bridge_contact_ohm;
  switch (edge.joint_kind) {
    case JointKind::Battery: return config.battery_contact_ohm;
    case JointKind::Rail:
    case JointKind::Plane: return config.contact_ohm;
  }
  return config.contact_ohm;
}

}  // namespace

Netlist attach_parasitics(const Netlist& net, const ParasiticExtraction& extraction,
                          const PipelineConfig& config, ParasiticScenario scenario) {
  // every routed net must exist; every gate-facing net must be routed
  const std::set<std::string> nodes = net.node_names();
  std::set<std::string> routed(extraction.routed_nets.begin(), extraction.routed_nets.end());
  for (const auto& name : extraction.routed_nets) {
    if (!nodes.count(name)) {
      throw Error(ErrorCode::UnroutedNet, "layout routes unknown net " + name);
    }
  }
  std::set<std::string> needed = {"VCC", "GND"};
  for (const auto& gate : net.gates) {
    needed.insert(gate.output_net);
    for (const auto& in : gate.input_nets) needed.insert(in);
    if (gate.terminals.count("ret")) needed.insert(gate.terminals.at("ret"));
  }
  for (const auto& [name, node] : net.inputs) needed.insert(node);
  for (const auto& name : needed) {
    if (!routed.count(name)) {
      throw Error(ErrorCode::UnroutedNet, "net " + name + " has no trace in the layout");
    }
  }

  Netlist out = net;

  // load pins of the attachment's gate move onto the split subnode
  for (const auto& attach : extraction.attachments) {
    bool moved = false;
    for (auto& comp : out.components) {
      if (comp.name != attach.gate && comp.name.rfind(attach.gate + ".", 0) != 0) continue;
      for (auto& node : comp.nodes) {
        if (node == attach.net) {
          node = attach.node;
          moved = true;
        }
      }
    }
    if (!moved) {
      throw Error(ErrorCode::Internal,
                  "attachment for " + attach.gate + " found no pin on " + attach.net);
    }
  }

  for (const auto& edge : extraction.edges) {
    switch (edge.kind) {
      case ParasiticEdge::Kind::Thread: {
        const double ohms = edge.length_cm / 100.0 * config.thread_ohm_per_m;
        out.components.push_back({"seg.t" + std::to_string(edge.trace_index) + "." + edge.node_b,
                                  ComponentKind::ThreadSegment, ohms, "",
                                  {edge.node_a, edge.node_b}});
        break;
      }
      case ParasiticEdge::Kind::Joint: {
        out.components.push_back({"joint." + std::to_string(edge.joint_index),
                                  ComponentKind::Contact, joint_resistance(edge, config), "",
                                  {edge.node_a, edge.node_b}});
        out.joints.push_back({edge.joint_index, "joint." + std::to_string(edge.joint_index)});
        break;
      }
      case ParasiticEdge::Kind::InputClip: {
        out.components.push_back({"clip." + edge.input_name, ComponentKind::Contact,
                                  config.input_contact_ohm, "", {edge.node_a, edge.node_b}});
        break;
      }
    }
  }

  for (const auto& shunt : extraction.shunts) {
    ShortCandidateBinding binding;
    binding.index = shunt.candidate_index;
    binding.node_a = shunt.node_a;
    binding.node_b = shunt.node_b;
    binding.severity = shunt.severity;
    binding.enabled = scenario == ParasiticScenario::WorstCase;
    if (binding.enabled) {
      const double ohms =
          shunt.severity == Severity::High ? config.leak_high_ohm : config.leak_medium_ohm;
      out.components.push_back({"shunt." + std::to_string(shunt.candidate_index),
                                ComponentKind::Contact, ohms, "",
                                {shunt.node_a, shunt.node_b}});
    }
    out.short_candidates.push_back(binding);
  }

  out.probes = extraction.probes;
  std::sort(out.joints.begin(), out.joints.end(),
            [](const JointBinding& a, const JointBinding& b) { return a.index < b.index; });
  validate_netlist(out);
  return out;
}

Netlist strip_parasitics(const Netlist& net) {
  Netlist out = net;
  auto inserted = [](const Component& comp) {
    return comp.kind == ComponentKind::ThreadSegment || comp.kind == ComponentKind::Contact;
  };
  out.components.erase(std::remove_if(out.components.begin(), out.components.end(), inserted),
                       out.components.end());
  for (auto& comp : out.components) {
    for (auto& node : comp.nodes) {
      const auto pos = node.find('#');
      if (pos != std::string::npos) node = node.substr(0, pos);
    }
  }
  out.probes.clear();
  out.joints.clear();
  out.short_candidates.clear();
  return out;
}

}  // namespace etpla
