#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "etpla/minimize.hpp"
#include "etpla/netlist.hpp"
#include "test_helpers.hpp"

using namespace etpla;

namespace {

int count_kind(const Netlist& net, ComponentKind kind) {
  int count = 0;
  for (const auto& comp : net.components) {
    if (comp.kind == kind) ++count;
  }
  return count;
}

int count_kind_value(const Netlist& net, ComponentKind kind, double value) {
  int count = 0;
  for (const auto& comp : net.components) {
    if (comp.kind == kind && comp.value == value) ++count;
  }
  return count;
}

int count_gates(const Netlist& net, GateKind kind) {
  int count = 0;
  for (const auto& gate : net.gates) {
    if (gate.kind == kind) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("gate templates carry the stock component sets") {
  const auto and2 = gate_template(GateKind::And2);
  CHECK(and2.components.size() == 5);
  CHECK(count_kind_value(and2, ComponentKind::Resistor, 1000) == 1);
  CHECK(count_kind_value(and2, ComponentKind::Resistor, 10000) == 2);
  CHECK(count_kind(and2, ComponentKind::BjtNpn) == 2);

  const auto or2 = gate_template(GateKind::Or2);
  CHECK(or2.components.size() == 5);
  CHECK(count_kind_value(or2, ComponentKind::Resistor, 1000) == 1);
  CHECK(count_kind_value(or2, ComponentKind::Resistor, 10000) == 2);
  CHECK(count_kind(or2, ComponentKind::BjtNpn) == 2);

  const auto inv = gate_template(GateKind::Not);
  CHECK(inv.components.size() == 3);

  // AND2 is a series pass: t1 collector on vcc, t1 emitter feeds t2 collector
  const Component* t1 = and2.find_component("t1");
  const Component* t2 = and2.find_component("t2");
  REQUIRE(t1);
  REQUIRE(t2);
  CHECK(t1->nodes[1] == "vcc");
  CHECK(t1->nodes[2] == t2->nodes[1]);
  CHECK(t2->nodes[2] == "out");

  // OR2 is a parallel pass: both collectors on vcc, emitters joined
  const Component* o1 = or2.find_component("t1");
  const Component* o2 = or2.find_component("t2");
  CHECK(o1->nodes[1] == "vcc");
  CHECK(o2->nodes[1] == "vcc");
  CHECK(o1->nodes[2] == o2->nodes[2]);
}

TEST_CASE("expand_netlist reproduces the reference inventory") {
  PipelineConfig config;
  const auto matrix = from_sop(minimize(testing::reference_table()));
  const auto net = expand_netlist(matrix, config);

  CHECK(count_gates(net, GateKind::Not) == 3);
  CHECK(count_gates(net, GateKind::And2) == 3);
  CHECK(count_gates(net, GateKind::Or2) == 2);
  CHECK(count_kind(net, ComponentKind::Led) == 2);
  CHECK(count_kind(net, ComponentKind::VSource) == 1);
  CHECK(net.inputs.size() == 3);
  CHECK(net.outputs.size() == 2);

  // per-gate inventories: NOT = 1k + 10k + bjt, 2-input gates add one 10k + bjt
  CHECK(count_kind_value(net, ComponentKind::Resistor, 10000) == 3 + 2 * 3 + 2 * 2);
  CHECK(count_kind_value(net, ComponentKind::Resistor, 1000) == 3 + 3 + 2);
  CHECK(count_kind(net, ComponentKind::BjtNpn) == 3 + 2 * 3 + 2 * 2);

  // LEDs sit inside the pulldown path: out -> led -> 1k -> GND
  const Component* led = net.find_component("led.Z1");
  REQUIRE(led);
  CHECK(led->model == "red");
  CHECK(led->nodes[0] == "out.Z1");
  const Component* pull = net.find_component("or.Z1.rp");
  REQUIRE(pull);
  CHECK(led->nodes[1] == pull->nodes[0]);
  CHECK(pull->nodes[1] == "GND");
  CHECK(net.find_component("led.Z2")->model == "blue");

  // complemented lines tap inverter collectors, raw lines the input nodes
  const Component* and0_rb1 = net.find_component("and.0.rb1");
  REQUIRE(and0_rb1);
  CHECK(and0_rb1->nodes[0] == "inv.A");  // term A'B
  CHECK(net.find_component("and.0.rb2")->nodes[0] == "in.B");
}

TEST_CASE("expand_netlist rejects wide terms and empty matrices") {
  PipelineConfig config;

  SopExpression wide;
  wide.inputs = {"A", "B", "C"};
  wide.outputs = {"Z"};
  wide.terms = {implicant_from_pattern("111")};
  wide.cover = {{0}};
  const auto matrix = from_sop(wide);
  try {
    expand_netlist(matrix, config);
    FAIL("expected FANIN_EXCEEDED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FaninExceeded);
  }

  PlaMatrix empty;
  empty.inputs = {"A"};
  empty.outputs = {"Z"};
  empty.and_plane = BoolMatrix(0, 2);
  empty.or_plane = BoolMatrix(1, 0);
  try {
    expand_netlist(empty, config);
    FAIL("expected EMPTY_MATRIX");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyMatrix);
  }
}

TEST_CASE("single-literal terms and single-term outputs tie both gate inputs") {
  PipelineConfig config;
  SopExpression expr;
  expr.inputs = {"A"};
  expr.outputs = {"Z"};
  expr.terms = {implicant_from_pattern("1")};
  expr.cover = {{0}};
  const auto net = expand_netlist(from_sop(expr), config);

  CHECK(count_gates(net, GateKind::Not) == 1);
  CHECK(count_gates(net, GateKind::And2) == 1);
  CHECK(count_gates(net, GateKind::Or2) == 1);
  CHECK(net.find_component("and.0.rb1")->nodes[0] == "in.A");
  CHECK(net.find_component("and.0.rb2")->nodes[0] == "in.A");
  CHECK(net.find_component("or.Z.rb1")->nodes[0] == "term.0");
  CHECK(net.find_component("or.Z.rb2")->nodes[0] == "term.0");
}

TEST_CASE("component-count law over random matrices") {
  PipelineConfig config;
  std::mt19937 rng(31);
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const auto table = testing::random_table(rng, n, 1 + static_cast<int>(rng() % 3));
    const auto expr = minimize(table);
    // stay inside the 2-input gate contract
    bool fits = !expr.terms.empty();
    for (const auto& term : expr.terms) {
      if (implicant_literal_count(term, n) > 2 || implicant_literal_count(term, n) == 0) {
        fits = false;
      }
    }
    for (const auto& terms : expr.cover) {
      if (terms.size() > 2 || terms.empty()) fits = false;
    }
    if (!fits) continue;
    ++checked;
    const auto matrix = from_sop(expr);
    const auto net = expand_netlist(matrix, config);
    CHECK(count_gates(net, GateKind::Not) == n);
    CHECK(count_gates(net, GateKind::And2) == static_cast<int>(matrix.term_count()));
    CHECK(count_gates(net, GateKind::Or2) == matrix.m());
    // all gates share the two rails
    for (const auto& gate : net.gates) {
      CHECK(gate.terminals.at("vcc") == "VCC");
      CHECK(gate.terminals.at("gnd") == "GND");
    }
    CHECK_NOTHROW(validate_netlist(net));
  }
  CHECK(checked >= 10);
}

TEST_CASE("attach_parasitics arithmetic and recovery") {
  PipelineConfig config;
  const auto matrix = from_sop(minimize(testing::reference_table()));
  const auto net = expand_netlist(matrix, config);

  // hand-built extraction: one 14.5 cm zig-zag bus on in.A, a 24 cm line on
  // in.B, bare names for everything else
  ParasiticExtraction ext;
  for (const auto& gate : net.gates) {
    for (const auto& [term, node] : gate.terminals) {
      if (node != "VCC" && node != "GND") ext.routed_nets.push_back(node);
    }
  }
  ext.routed_nets.push_back("VCC");
  ext.routed_nets.push_back("GND");
  std::sort(ext.routed_nets.begin(), ext.routed_nets.end());
  ext.routed_nets.erase(std::unique(ext.routed_nets.begin(), ext.routed_nets.end()),
                        ext.routed_nets.end());

  ParasiticEdge bus_edge;
  bus_edge.kind = ParasiticEdge::Kind::Thread;
  bus_edge.net = "in.A";
  bus_edge.node_a = "in.A";
  bus_edge.node_b = "in.A#1";
  bus_edge.length_cm = 14.5;
  bus_edge.trace_index = 0;
  ext.edges.push_back(bus_edge);

  ParasiticEdge line_edge = bus_edge;
  line_edge.net = "in.B";
  line_edge.node_a = "in.B";
  line_edge.node_b = "in.B#1";
  line_edge.length_cm = 24.0;
  line_edge.trace_index = 1;
  ext.edges.push_back(line_edge);

  ext.attachments.push_back({"in.A", "in.A#1", "not.A", "in"});

  const auto attached = attach_parasitics(net, ext, config, ParasiticScenario::Nominal);
  const Component* bus = attached.find_component("seg.t0.in.A#1");
  REQUIRE(bus);
  CHECK(bus->value == doctest::Approx(14.5));
  const Component* line = attached.find_component("seg.t1.in.B#1");
  REQUIRE(line);
  CHECK(line->value == doctest::Approx(24.0));

  // the inverter base resistor moved to the far end of the bus
  CHECK(attached.find_component("not.A.rb")->nodes[0] == "in.A#1");
  // nominal scenario adds no shunt contacts
  CHECK(count_kind(attached, ComponentKind::Contact) == 0);

  // stripping the inserted elements recovers the input netlist
  CHECK(strip_parasitics(attached) == net);
}

TEST_CASE("attach_parasitics flags unrouted nets") {
  PipelineConfig config;
  const auto matrix = from_sop(minimize(testing::reference_table()));
  const auto net = expand_netlist(matrix, config);
  ParasiticExtraction ext;  // routes nothing
  try {
    attach_parasitics(net, ext, config, ParasiticScenario::Nominal);
    FAIL("expected UNROUTED_NET");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnroutedNet);
  }
}
