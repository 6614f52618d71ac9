#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "etpla/dc.hpp"

using namespace etpla;

namespace {

Netlist bare_inverter() {
  Netlist net;
  net.components.push_back({"bat", ComponentKind::VSource, 9.0, "", {"VCC", "GND"}});
  net.components.push_back({"rb", ComponentKind::Resistor, 10000, "", {"in.A", "b"}});
  net.components.push_back({"rc", ComponentKind::Resistor, 1000, "", {"VCC", "out"}});
  net.components.push_back({"t", ComponentKind::BjtNpn, 0.0, "BC547B", {"b", "out", "GND"}});
  net.inputs.emplace_back("A", "in.A");
  return net;
}

// Straightforward nodal oracle for resistor-only networks with one ideal
// source: eliminate the source nodes, assemble G V = I, gaussian solve.
std::map<std::string, double> resistor_oracle(const Netlist& net) {
  std::vector<std::string> unknowns;
  std::map<std::string, int> index;
  double source_volts = 0.0;
  std::string plus_node;
  for (const auto& comp : net.components) {
    if (comp.kind == ComponentKind::VSource) {
      source_volts = comp.value;
      plus_node = comp.nodes[0];
    }
  }
  auto known = [&](const std::string& node) { return node == "GND" || node == plus_node; };
  for (const auto& comp : net.components) {
    for (const auto& node : comp.nodes) {
      if (!known(node) && !index.count(node)) {
        index[node] = static_cast<int>(unknowns.size());
        unknowns.push_back(node);
      }
    }
  }
  const int n = static_cast<int>(unknowns.size());
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) a[i][i] += 1e-12;  // the model's gmin shunt
  auto fixed_voltage = [&](const std::string& node) { return node == plus_node ? source_volts : 0.0; };
  for (const auto& comp : net.components) {
    if (comp.kind == ComponentKind::VSource) continue;
    const double g = 1.0 / comp.value;
    const std::string& u = comp.nodes[0];
    const std::string& v = comp.nodes[1];
    for (int side = 0; side < 2; ++side) {
      const std::string& self = side == 0 ? u : v;
      const std::string& other = side == 0 ? v : u;
      if (known(self)) continue;
      const int i = index[self];
      a[i][i] += g;
      if (known(other)) {
        a[i][n] += g * fixed_voltage(other);
      } else {
        a[i][index[other]] -= g;
      }
    }
  }
  for (int col = 0; col < n; ++col) {  // gaussian elimination, partial pivot
    int pivot = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    std::swap(a[col], a[pivot]);
    for (int row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0.0) continue;
      const double f = a[row][col] / a[col][col];
      for (int k = col; k <= n; ++k) a[row][k] -= f * a[col][k];
    }
  }
  std::map<std::string, double> voltages;
  voltages["GND"] = 0.0;
  voltages[plus_node] = source_volts;
  for (int i = 0; i < n; ++i) voltages[unknowns[i]] = a[i][n] / a[i][i];
  return voltages;
}

}  // namespace

TEST_CASE("bare inverter hits the exact piecewise levels") {
  const auto net = bare_inverter();
  SolverOptions options;

  const auto high = solve_dc(net, "1", options);
  CHECK(high.node_voltages.at("out") == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(high.bjt_states.at("t") == BjtState::Saturation);
  CHECK(high.max_kcl_residual < 1e-9);
  // base current (9 - 0.7) / 10k
  CHECK(high.branch_currents.at("rb") == doctest::Approx(8.3e-4).epsilon(1e-9));

  const auto low = solve_dc(net, "0", options);
  CHECK(low.node_voltages.at("out") == doctest::Approx(9.0).epsilon(1e-6));
  CHECK(low.bjt_states.at("t") == BjtState::Cutoff);
  CHECK(low.max_kcl_residual < 1e-9);
}

TEST_CASE("resistor divider splits the supply") {
  Netlist net;
  net.components.push_back({"bat", ComponentKind::VSource, 9.0, "", {"VCC", "GND"}});
  net.components.push_back({"r1", ComponentKind::Resistor, 1000, "", {"VCC", "mid"}});
  net.components.push_back({"r2", ComponentKind::Resistor, 1000, "", {"mid", "GND"}});
  SolverOptions options;
  const auto sol = solve_dc(net, "", options);
  // gmin shifts the ideal midpoint by ~2e-9
  CHECK(sol.node_voltages.at("mid") == doctest::Approx(4.5).epsilon(1e-8));
}

TEST_CASE("pure-resistor networks match the direct oracle to 1e-9") {
  std::mt19937 rng(41);
  SolverOptions options;
  for (int trial = 0; trial < 12; ++trial) {
    Netlist net;
    net.components.push_back({"bat", ComponentKind::VSource, 9.0, "", {"VCC", "GND"}});
    const int internal = 3 + static_cast<int>(rng() % 5);
    std::vector<std::string> nodes = {"VCC", "GND"};
    for (int i = 0; i < internal; ++i) {
      const std::string name = "n" + std::to_string(i);
      // chain keeps everything connected
      net.components.push_back({"rc" + std::to_string(i), ComponentKind::Resistor,
                                100.0 + static_cast<double>(rng() % 9000), "",
                                {nodes[rng() % nodes.size()], name}});
      nodes.push_back(name);
    }
    for (int extra = 0; extra < internal; ++extra) {
      const std::string a = nodes[rng() % nodes.size()];
      const std::string b = nodes[rng() % nodes.size()];
      if (a == b) continue;
      net.components.push_back({"rx" + std::to_string(extra), ComponentKind::Resistor,
                                100.0 + static_cast<double>(rng() % 9000), "",
                                {a, b}});
    }
    const auto sol = solve_dc(net, "", options);
    const auto oracle = resistor_oracle(net);
    for (const auto& [node, volts] : oracle) {
      CHECK(std::abs(sol.node_voltages.at(node) - volts) < 1e-9);
    }
    CHECK(sol.max_kcl_residual < 1e-9);
  }
}

TEST_CASE("led classification thresholds") {
  SolverOptions options;
  auto led_fixture = [&](double volts, const std::string& model) {
    Netlist net;
    net.components.push_back({"bat", ComponentKind::VSource, volts, "", {"VCC", "GND"}});
    net.components.push_back({"led.Z", ComponentKind::Led, 0.0, model, {"VCC", "mid"}});
    net.components.push_back({"rp", ComponentKind::Resistor, 1000, "", {"mid", "GND"}});
    return solve_dc(net, "", options);
  };

  // 4.7 V through the 1k path: (4.7 - 1.8) / 1k = 2.9 mA
  const auto bright = led_fixture(4.7, "red");
  CHECK(bright.branch_currents.at("led.Z") == doctest::Approx(2.9e-3).epsilon(1e-9));
  CHECK(bright.led_states.at("led.Z") == LedState::On);

  // blue at 2.0 V never reaches its forward voltage
  const auto dark = led_fixture(2.0, "blue");
  CHECK(dark.branch_currents.at("led.Z") == doctest::Approx(0.0));
  CHECK(dark.led_states.at("led.Z") == LedState::Off);

  // red at 2.0 V: 0.2 mA, between i_dim and i_on
  const auto faint = led_fixture(2.0, "red");
  CHECK(faint.led_states.at("led.Z") == LedState::Dim);

  // classify_led agrees with the stored state and rejects unknown names
  Netlist net;
  net.components.push_back({"bat", ComponentKind::VSource, 4.7, "", {"VCC", "GND"}});
  net.components.push_back({"led.Z", ComponentKind::Led, 0.0, "red", {"VCC", "mid"}});
  net.components.push_back({"rp", ComponentKind::Resistor, 1000, "", {"mid", "GND"}});
  const auto sol = solve_dc(net, "", options);
  CHECK(classify_led(sol, net, "led.Z", options) == LedState::On);
  CHECK_THROWS_AS((void)classify_led(sol, net, "led.Q", options), Error);
}

TEST_CASE("solver is deterministic") {
  const auto net = bare_inverter();
  SolverOptions options;
  const auto a = solve_dc(net, "1", options);
  const auto b = solve_dc(net, "1", options);
  CHECK(a.node_voltages == b.node_voltages);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("passivity: converged voltages stay within the supply window") {
  const auto net = bare_inverter();
  SolverOptions options;
  for (const char* vec : {"0", "1"}) {
    const auto sol = solve_dc(net, vec, options);
    for (const auto& [node, volts] : sol.node_voltages) {
      CHECK(volts >= -0.8);
      CHECK(volts <= 9.0 + 1e-9);
    }
  }
}

TEST_CASE("unknown led model is reported") {
  Netlist net;
  net.components.push_back({"bat", ComponentKind::VSource, 5.0, "", {"VCC", "GND"}});
  net.components.push_back({"led.Z", ComponentKind::Led, 0.0, "ultraviolet", {"VCC", "mid"}});
  net.components.push_back({"rp", ComponentKind::Resistor, 1000, "", {"mid", "GND"}});
  SolverOptions options;
  CHECK_THROWS_AS((void)solve_dc(net, "", options), Error);
}
