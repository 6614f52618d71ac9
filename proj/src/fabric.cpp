#include "etpla/fabric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace etpla {

const char* stitch_name(Stitch s) {
  switch (s) {
    case Stitch::Zigzag: return "zigzag";
    case Stitch::Straight: return "straight";
    case Stitch::Satin: return "satin";
  }
  return "unknown";
}

Stitch stitch_from_name(const std::string& name) {
  if (name == "zigzag") return Stitch::Zigzag;
  if (name == "straight") return Stitch::Straight;
  if (name == "satin") return Stitch::Satin;
  throw Error(ErrorCode::Malformed, "stitch '" + name + "'");
}

GateFootprint footprint(GateKind kind) {
  GateFootprint fp;
  fp.kind = kind;
  switch (kind) {
    case GateKind::Not:
      fp.width_cm = 4.5;
      fp.height_cm = 4.5;
      fp.terminal_offsets = {
          {"in", {1.0, 0.0}}, {"out", {2.8, 0.0}}, {"vcc", {0.0, 1.0}}, {"gnd", {0.0, 3.5}}};
      break;
    case GateKind::And2:
      fp.width_cm = 5.5;
      fp.height_cm = 6.5;
      fp.terminal_offsets = {{"in1", {0.0, 4.5}},
                             {"in2", {0.0, 2.0}},
                             {"out", {5.5, 0.6}},
                             {"vcc", {1.65, 0.0}},
                             {"gnd", {2.85, 0.0}}};
      break;
    case GateKind::Or2:
      fp.width_cm = 6.5;
      fp.height_cm = 6.5;
      fp.terminal_offsets = {{"in1", {0.0, 4.5}}, {"in2", {0.0, 2.0}}, {"out", {6.5, 3.25}},
                             {"ret", {6.5, 1.2}}, {"vcc", {0.0, 5.5}}, {"gnd", {0.0, 0.5}}};
      break;
  }
  return fp;
}

namespace {

Point terminal_world(const Placement& place, const std::string& terminal) {
  const GateFootprint fp = footprint(place.kind);
  const Point local = fp.terminal_offsets.at(terminal);
  const Point rotated = rotate_deg(local, place.rotation_deg);
  return {place.origin.x + rotated.x, place.origin.y + rotated.y};
}

struct TermWiring {
  Implicant imp;
  std::vector<std::pair<int, bool>> literals;  // input index, positive
};

struct Shape {
  int n = 0;
  int t = 0;
  int m = 0;
  std::vector<TermWiring> terms;
  std::vector<std::vector<int>> output_terms;
};

Shape analyze(const PlaMatrix& matrix) {
  Shape shape;
  shape.n = matrix.n();
  shape.t = static_cast<int>(matrix.term_count());
  shape.m = matrix.m();
  if (shape.n > 4 || shape.t > 6 || shape.m > 3) {
    throw Error(ErrorCode::UnsupportedScale, "placement supports up to 4 inputs, 6 terms, 3 outputs");
  }
  for (std::size_t t = 0; t < matrix.term_count(); ++t) {
    TermWiring wiring;
    wiring.imp = term_implicant(matrix, t);
    for (int i = 0; i < shape.n; ++i) {
      if (wiring.imp.care & (1u << i)) {
        wiring.literals.emplace_back(i, (wiring.imp.value & (1u << i)) != 0);
      }
    }
    if (wiring.literals.empty() || wiring.literals.size() > 2) {
      throw Error(ErrorCode::UnsupportedScale,
                  "term " + matrix.term_labels[t] + " does not fit a 2-input gate");
    }
    if (wiring.literals.size() == 1) wiring.literals.push_back(wiring.literals[0]);
    shape.terms.push_back(std::move(wiring));
  }
  for (int k = 0; k < shape.m; ++k) {
    std::vector<int> terms;
    for (std::size_t t = 0; t < matrix.term_count(); ++t) {
      if (matrix.or_plane.at(static_cast<std::size_t>(k), t)) terms.push_back(static_cast<int>(t));
    }
    if (terms.empty() || terms.size() > 2) {
      throw Error(ErrorCode::UnsupportedScale,
                  "output " + matrix.outputs[static_cast<std::size_t>(k)] +
                      " does not fit a 2-input gate");
    }
    if (terms.size() == 1) terms.push_back(terms[0]);
    shape.output_terms.push_back(std::move(terms));
  }
  return shape;
}

struct Builder {
  FabricLayout layout;
  double max_x = 0.0;
  double max_y = 0.0;

  int add_trace(Trace trace) {
    for (const auto& p : trace.polyline) {
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
    layout.traces.push_back(std::move(trace));
    return static_cast<int>(layout.traces.size()) - 1;
  }

  void add_joint(int a, int b, Point at, JointKind kind) {
    layout.joints.push_back({a, b, at, kind, 1.0});
  }

  Placement& add_placement(const std::string& gate, GateKind kind, int layer, Point origin,
                           double rotation) {
    layout.placements.push_back({gate, kind, layer, origin, rotation});
    const GateFootprint fp = footprint(kind);
    for (const auto& corner : rect_corners({origin, fp.width_cm, fp.height_cm, rotation})) {
      max_x = std::max(max_x, corner.x);
      max_y = std::max(max_y, corner.y);
    }
    return layout.placements.back();
  }
};

AttachRef gate_ref(const std::string& gate, const std::string& terminal, bool driver = false) {
  return {AttachRef::Kind::GateTerminal, gate, terminal, driver};
}

std::string line_net(const PlaMatrix& matrix, int input, bool positive) {
  return (positive ? "in." : "inv.") + matrix.inputs[static_cast<std::size_t>(input)];
}

void check_panel(const Builder& builder, const PanelSpec& panel) {
  const double margin = 0.5;
  if (builder.max_x + margin > panel.width_cm || builder.max_y + margin > panel.height_cm) {
    throw Error(ErrorCode::PanelTooSmall,
                "design needs " + std::to_string(builder.max_x + margin) + " x " +
                    std::to_string(builder.max_y + margin) + " cm, panel is " +
                    std::to_string(panel.width_cm) + " x " + std::to_string(panel.height_cm));
  }
}

// ---------------------------------------------------------------------------
// multi-layer: layer 0 input/NOT plane, layer 1 AND plane, layer 2 OR plane;
// insulated rails run to the left-hand trunks, one battery point on top
// ---------------------------------------------------------------------------
FabricLayout place_multi(const PlaMatrix& matrix, const PanelSpec& panel) {
  const Shape shape = analyze(matrix);
  Builder b;
  b.layout.panel = panel;
  b.layout.strategy = Strategy::Multi;
  b.layout.layer_count = 3;

  const double y_bat = panel.height_cm - 1.5;
  const double vcc_x = 2.0;
  const double gnd_x = 0.8;

  // layer 0: inverter row across the top, plane lines run down
  const double not_y = panel.height_cm - 7.0;
  std::vector<double> line_x(static_cast<std::size_t>(2 * shape.n), 0.0);
  for (int i = 0; i < shape.n; ++i) {
    const std::string gate = "not." + matrix.inputs[static_cast<std::size_t>(i)];
    const double xg = 4.0 + 6.0 * i;
    b.add_placement(gate, GateKind::Not, 0, {xg, not_y}, 0.0);
    line_x[static_cast<std::size_t>(2 * i)] = xg + 1.0;      // raw
    line_x[static_cast<std::size_t>(2 * i) + 1] = xg + 2.8;  // complement
  }

  // layer 1: AND row, staggered so every horizontal track is unique
  const double and_y = not_y - 21.0;
  const double and_x0 = line_x.back() + 2.0;
  const double and_pitch = 6.7;
  std::vector<Point> and_origin;
  for (int t = 0; t < shape.t; ++t) {
    const std::string gate = "and." + std::to_string(t);
    const Point origin{and_x0 + and_pitch * t, and_y + 0.7 * t};
    and_origin.push_back(origin);
    b.add_placement(gate, GateKind::And2, 1, origin, 0.0);
  }

  // AND output columns to the right of the row, rightmost column first so
  // later output tracks stop short of earlier columns
  const double col_x0 = and_origin.back().x + 5.5 + 1.2;
  std::vector<double> col_x(static_cast<std::size_t>(shape.t));
  for (int t = 0; t < shape.t; ++t) {
    col_x[static_cast<std::size_t>(t)] = col_x0 + 0.9 * (shape.t - 1 - t);
  }

  // layer 2: OR stack to the right of the columns
  const double or_x = col_x0 + 0.9 * (shape.t - 1) + 1.6;
  std::vector<Point> or_origin;
  for (int k = 0; k < shape.m; ++k) {
    const std::string gate = "or." + matrix.outputs[static_cast<std::size_t>(k)];
    const Point origin{or_x, and_y + 4.5 + 7.7 * k};
    or_origin.push_back(origin);
    b.add_placement(gate, GateKind::Or2, 2, origin, 0.0);
  }

  // AND input stubs and the joints they stitch onto the input lines
  struct StubJoint {
    int line = 0;
    double y = 0.0;
    int stub_trace = -1;
  };
  std::vector<StubJoint> stub_joints;
  for (int t = 0; t < shape.t; ++t) {
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + t)];
    for (int p = 0; p < 2; ++p) {
      if (p == 1 && shape.terms[static_cast<std::size_t>(t)].literals[1] ==
                        shape.terms[static_cast<std::size_t>(t)].literals[0]) {
        // duplicated input of a single-literal term: one stitch serves both
        continue;
      }
      const auto [input, positive] = shape.terms[static_cast<std::size_t>(t)].literals[static_cast<std::size_t>(p)];
      const int line = 2 * input + (positive ? 0 : 1);
      const std::string terminal = p == 0 ? "in1" : "in2";
      const Point term = terminal_world(pl, terminal);
      Trace stub;
      stub.net = line_net(matrix, input, positive);
      stub.layer = 1;
      stub.polyline = {term, {line_x[static_cast<std::size_t>(line)], term.y}};
      stub.stitch = Stitch::Straight;
      stub.end_a = gate_ref(pl.gate, terminal);
      stub.purpose = "and_input";
      const int idx = b.add_trace(std::move(stub));
      stub_joints.push_back({line, term.y, idx});
    }
  }

  // input plane lines: long enough to reach their lowest stitch, 15-24 cm
  std::vector<int> line_trace(static_cast<std::size_t>(2 * shape.n), -1);
  for (int line = 0; line < 2 * shape.n; ++line) {
    const int input = line / 2;
    const bool positive = (line % 2) == 0;
    const std::string gate = "not." + matrix.inputs[static_cast<std::size_t>(input)];
    double lowest = not_y - (15.0 + 0.4 * line);
    for (const auto& sj : stub_joints) {
      if (sj.line == line) lowest = std::min(lowest, sj.y - 1.0);
    }
    double length = not_y - lowest;
    length = std::clamp(length, 15.0, 24.0);
    Trace trace;
    trace.net = line_net(matrix, input, positive);
    trace.layer = 0;
    trace.polyline = {{line_x[static_cast<std::size_t>(line)], not_y},
                      {line_x[static_cast<std::size_t>(line)], not_y - length}};
    trace.stitch = Stitch::Straight;
    trace.end_a = gate_ref(gate, positive ? "in" : "out", true);
    if (positive) trace.drive_input = matrix.inputs[static_cast<std::size_t>(input)];
    trace.probe_at_end = true;
    trace.purpose = positive ? "input_line" : "complement_line";
    line_trace[static_cast<std::size_t>(line)] = b.add_trace(std::move(trace));
  }
  for (const auto& sj : stub_joints) {
    b.add_joint(line_trace[static_cast<std::size_t>(sj.line)], sj.stub_trace,
                {line_x[static_cast<std::size_t>(sj.line)], sj.y}, JointKind::Plane);
  }

  // OR input stubs, then the output columns sized to their highest joint
  struct ColJoint {
    int term = 0;
    double y = 0.0;
    int stub_trace = -1;
  };
  std::vector<ColJoint> col_joints;
  for (int k = 0; k < shape.m; ++k) {
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + shape.t + k)];
    for (int p = 0; p < 2; ++p) {
      if (p == 1 && shape.output_terms[static_cast<std::size_t>(k)][1] ==
                        shape.output_terms[static_cast<std::size_t>(k)][0]) {
        continue;
      }
      const int term = shape.output_terms[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
      const std::string terminal = p == 0 ? "in1" : "in2";
      const Point tp = terminal_world(pl, terminal);
      Trace stub;
      stub.net = "term." + std::to_string(term);
      stub.layer = 2;
      stub.polyline = {tp, {col_x[static_cast<std::size_t>(term)], tp.y}};
      stub.stitch = Stitch::Straight;
      stub.end_a = gate_ref(pl.gate, terminal);
      stub.purpose = "or_input";
      const int idx = b.add_trace(std::move(stub));
      col_joints.push_back({term, tp.y, idx});
    }
  }
  for (int t = 0; t < shape.t; ++t) {
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + t)];
    const Point out = terminal_world(pl, "out");
    double top = out.y + 2.0;
    for (const auto& cj : col_joints) {
      if (cj.term == t) top = std::max(top, cj.y + 1.0);
    }
    Trace column;
    column.net = "term." + std::to_string(t);
    column.layer = 1;
    column.polyline = {out,
                       {col_x[static_cast<std::size_t>(t)], out.y},
                       {col_x[static_cast<std::size_t>(t)], top}};
    column.stitch = Stitch::Straight;
    column.end_a = gate_ref(pl.gate, "out", true);
    column.purpose = "and_output";
    const int idx = b.add_trace(std::move(column));
    for (const auto& cj : col_joints) {
      if (cj.term == t) {
        b.add_joint(idx, cj.stub_trace, {col_x[static_cast<std::size_t>(t)], cj.y},
                    JointKind::Plane);
      }
    }
  }

  // alert path per output: out -> LED anode, cathode -> ret terminal
  for (int k = 0; k < shape.m; ++k) {
    const std::string& name = matrix.outputs[static_cast<std::size_t>(k)];
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + shape.t + k)];
    const Point out = terminal_world(pl, "out");
    const Point ret = terminal_world(pl, "ret");
    Trace out_trace;
    out_trace.net = "out." + name;
    out_trace.layer = 2;
    out_trace.polyline = {out, {out.x + 2.0, out.y}};
    out_trace.end_a = gate_ref(pl.gate, "out", true);
    out_trace.end_b = gate_ref("led." + name, "a");
    out_trace.purpose = "or_output";
    b.add_trace(std::move(out_trace));
    Trace ret_trace;
    ret_trace.net = "out." + name + ".r";
    ret_trace.layer = 2;
    ret_trace.polyline = {{out.x + 2.0, ret.y}, ret};
    ret_trace.end_a = gate_ref("led." + name, "k");
    ret_trace.end_b = gate_ref(pl.gate, "ret", true);
    ret_trace.purpose = "led_return";
    b.add_trace(std::move(ret_trace));
  }

  // insulated rails: every gate stub runs to the left-hand trunk of its
  // layer; trunks meet the battery at one stitched point on top
  struct RailPlan {
    std::string net;
    double trunk_x;
  };
  const RailPlan rails[2] = {{"VCC", vcc_x}, {"GND", gnd_x}};
  std::vector<std::vector<double>> trunk_connect(6);  // [rail][layer] -> ys
  auto rail_stub = [&](const Placement& pl, int rail, const std::vector<Point>& polyline) {
    Trace stub;
    stub.net = rails[rail].net;
    stub.layer = pl.layer;
    stub.polyline = polyline;
    stub.insulated = true;
    stub.end_a = gate_ref(pl.gate, rail == 0 ? "vcc" : "gnd");
    stub.purpose = "rail_stub";
    const int idx = b.add_trace(std::move(stub));
    trunk_connect[static_cast<std::size_t>(rail * 3 + pl.layer)].push_back(
        polyline.back().y);
    return idx;
  };
  std::vector<std::pair<int, Point>> trunk_joints;  // stub trace, joint point
  // rail tracks under the AND row are shared per rail so vcc and gnd runs
  // keep a clean 1.2 cm clearance regardless of the gate stagger
  const double and_vcc_track = and_y - 0.8;
  const double and_gnd_track = and_y - 2.0;
  for (const auto& pl : b.layout.placements) {
    const Point vcc = terminal_world(pl, "vcc");
    const Point gnd = terminal_world(pl, "gnd");
    int idx;
    if (pl.kind == GateKind::And2) {
      idx = rail_stub(pl, 0, {vcc, {vcc.x, and_vcc_track}, {vcc_x, and_vcc_track}});
      trunk_joints.emplace_back(idx, Point{vcc_x, and_vcc_track});
      idx = rail_stub(pl, 1, {gnd, {gnd.x, and_gnd_track}, {gnd_x, and_gnd_track}});
      trunk_joints.emplace_back(idx, Point{gnd_x, and_gnd_track});
    } else {
      idx = rail_stub(pl, 0, {vcc, {vcc_x, vcc.y}});
      trunk_joints.emplace_back(idx, Point{vcc_x, vcc.y});
      idx = rail_stub(pl, 1, {gnd, {gnd_x, gnd.y}});
      trunk_joints.emplace_back(idx, Point{gnd_x, gnd.y});
    }
  }
  std::vector<std::vector<int>> trunk_trace(2, std::vector<int>(3, -1));
  for (int rail = 0; rail < 2; ++rail) {
    for (int layer = 0; layer < 3; ++layer) {
      const auto& ys = trunk_connect[static_cast<std::size_t>(rail * 3 + layer)];
      if (ys.empty()) continue;
      const double bottom = *std::min_element(ys.begin(), ys.end());
      Trace trunk;
      trunk.net = rails[rail].net;
      trunk.layer = layer;
      trunk.polyline = {{rails[rail].trunk_x, bottom}, {rails[rail].trunk_x, y_bat}};
      trunk.insulated = true;
      trunk.purpose = "rail_trunk";
      if (layer == 0) {
        trunk.end_b = {AttachRef::Kind::Battery, "bat", rail == 0 ? "+" : "-", true};
      }
      trunk_trace[static_cast<std::size_t>(rail)][static_cast<std::size_t>(layer)] =
          b.add_trace(std::move(trunk));
    }
  }
  for (const auto& [stub, at] : trunk_joints) {
    const int rail = b.layout.traces[static_cast<std::size_t>(stub)].net == "VCC" ? 0 : 1;
    const int layer = b.layout.traces[static_cast<std::size_t>(stub)].layer;
    b.add_joint(trunk_trace[static_cast<std::size_t>(rail)][static_cast<std::size_t>(layer)],
                stub, at, JointKind::Rail);
  }
  for (int rail = 0; rail < 2; ++rail) {
    const int base = trunk_trace[static_cast<std::size_t>(rail)][0];
    for (int layer = 1; layer < 3; ++layer) {
      const int trunk = trunk_trace[static_cast<std::size_t>(rail)][static_cast<std::size_t>(layer)];
      if (trunk < 0) continue;
      b.add_joint(base, trunk, {rails[rail].trunk_x, y_bat}, JointKind::Battery);
    }
  }

  check_panel(b, panel);
  b.layout.short_candidates = crossing_report(b.layout);
  return b.layout;
}

// ---------------------------------------------------------------------------
// single layer: everything on one panel face. Inputs lower left with
// zig-zag buses, a vertical AND stack mid-panel fed by a crossbar, OR
// gates at 45 degrees up top, AND rails diving to a bottom corridor and
// returning over bridge strips, nothing insulated.
// ---------------------------------------------------------------------------
FabricLayout place_single(const PlaMatrix& matrix, const PanelSpec& panel) {
  const Shape shape = analyze(matrix);
  Builder b;
  b.layout.panel = panel;
  b.layout.strategy = Strategy::Single;
  b.layout.layer_count = 1;

  const double vcc_x = 1.2;  // battery-side trunks
  const double gnd_x = 2.4;
  const Point bat_vcc{vcc_x, 1.8};
  const Point bat_gnd{gnd_x, 3.4};

  // input/NOT stack, lower left, clear of the bottom rail corridor
  const double not_x = 3.6;
  for (int i = 0; i < shape.n; ++i) {
    const std::string gate = "not." + matrix.inputs[static_cast<std::size_t>(i)];
    b.add_placement(gate, GateKind::Not, 0, {not_x, 9.5 + 6.4 * i}, 0.0);
  }

  // horizontal zig-zag buses, one per line, roughly 14.5 cm of plane
  const double bus_end_x = 19.8;
  std::vector<int> bus_trace(static_cast<std::size_t>(2 * shape.n), -1);
  std::vector<double> bus_y(static_cast<std::size_t>(2 * shape.n), 0.0);
  for (int line = 0; line < 2 * shape.n; ++line) {
    const int input = line / 2;
    const bool positive = (line % 2) == 0;
    const std::string gate = "not." + matrix.inputs[static_cast<std::size_t>(input)];
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(input)];
    const Point term = terminal_world(pl, positive ? "in" : "out");
    const double track = pl.origin.y - (positive ? 1.4 : 0.5);
    Trace bus;
    bus.net = line_net(matrix, input, positive);
    bus.layer = 0;
    bus.polyline = {term, {term.x, track}, {bus_end_x, track}};
    bus.stitch = Stitch::Zigzag;
    bus.end_a = gate_ref(gate, positive ? "in" : "out", true);
    if (positive) bus.drive_input = matrix.inputs[static_cast<std::size_t>(input)];
    bus.probe_at_end = true;
    bus.purpose = positive ? "input_bus" : "complement_bus";
    bus_y[static_cast<std::size_t>(line)] = track;
    bus_trace[static_cast<std::size_t>(line)] = b.add_trace(std::move(bus));
  }

  // vertical AND stack mid-panel
  const double and_x = 23.0;
  std::vector<Point> and_origin;
  for (int t = 0; t < shape.t; ++t) {
    const Point origin{and_x, 12.5 + 8.4 * t};
    and_origin.push_back(origin);
    b.add_placement("and." + std::to_string(t), GateKind::And2, 0, origin, 0.0);
  }

  // crossbar: L-shaped feeds from the AND inputs down onto the buses. A
  // feed entering lower must take a column right of any feed entering
  // higher, otherwise its horizontal run crosses that drop.
  struct FeedPlan {
    int t = 0;
    int p = 0;
    int input = 0;
    bool positive = true;
    double term_y = 0.0;
  };
  std::vector<FeedPlan> feeds;
  for (int t = 0; t < shape.t; ++t) {
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + t)];
    for (int p = 0; p < 2; ++p) {
      if (p == 1 && shape.terms[static_cast<std::size_t>(t)].literals[1] ==
                        shape.terms[static_cast<std::size_t>(t)].literals[0]) {
        continue;
      }
      const auto [input, positive] =
          shape.terms[static_cast<std::size_t>(t)].literals[static_cast<std::size_t>(p)];
      feeds.push_back({t, p, input, positive,
                       terminal_world(pl, p == 0 ? "in1" : "in2").y});
    }
  }
  std::sort(feeds.begin(), feeds.end(),
            [](const FeedPlan& a, const FeedPlan& b) { return a.term_y < b.term_y; });
  for (std::size_t rank = 0; rank < feeds.size(); ++rank) {
    const FeedPlan& plan = feeds[rank];
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + plan.t)];
    const int line = 2 * plan.input + (plan.positive ? 0 : 1);
    const std::string terminal = plan.p == 0 ? "in1" : "in2";
    const Point term = terminal_world(pl, terminal);
    const double col = 19.4 - 0.8 * static_cast<double>(rank);
    Trace feed;
    feed.net = line_net(matrix, plan.input, plan.positive);
    feed.layer = 0;
    feed.polyline = {term, {col, term.y}, {col, bus_y[static_cast<std::size_t>(line)]}};
    feed.stitch = Stitch::Straight;
    feed.end_a = gate_ref(pl.gate, terminal);
    feed.purpose = "and_feed";
    const int idx = b.add_trace(std::move(feed));
    b.add_joint(bus_trace[static_cast<std::size_t>(line)], idx,
                {col, bus_y[static_cast<std::size_t>(line)]}, JointKind::Plane);
  }

  // OR pair at ~45 degrees in the top half
  const double or_y0 = std::max(38.5, and_origin.back().y + 6.5 + 2.5);
  std::vector<Point> or_origin;
  for (int k = 0; k < shape.m; ++k) {
    const Point origin{40.0 + 9.5 * k, or_y0 - 1.2 * k};
    or_origin.push_back(origin);
    b.add_placement("or." + matrix.outputs[static_cast<std::size_t>(k)], GateKind::Or2, 0, origin,
                    45.0);
  }

  // AND outputs rise on bridge strips in the band right of the stack;
  // OR input stubs stitch onto them
  // highest gate takes the leftmost strip so no output run crosses
  // another term's riser
  auto bridge_x = [&](int t) { return 30.2 + 1.1 * (shape.t - 1 - t); };
  struct BridgeJoint {
    int term = 0;
    double y = 0.0;
    int stub_trace = -1;
  };
  std::vector<BridgeJoint> bridge_joints;
  for (int k = 0; k < shape.m; ++k) {
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + shape.t + k)];
    for (int p = 0; p < 2; ++p) {
      if (p == 1 && shape.output_terms[static_cast<std::size_t>(k)][1] ==
                        shape.output_terms[static_cast<std::size_t>(k)][0]) {
        continue;
      }
      const int term = shape.output_terms[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
      const std::string terminal = p == 0 ? "in1" : "in2";
      const Point tp = terminal_world(pl, terminal);
      Trace stub;
      stub.net = "term." + std::to_string(term);
      stub.layer = 0;
      stub.polyline = {tp, {bridge_x(term), tp.y}};
      stub.stitch = Stitch::Straight;
      stub.bridge = true;
      stub.end_a = gate_ref(pl.gate, terminal);
      stub.purpose = "or_input";
      const int idx = b.add_trace(std::move(stub));
      bridge_joints.push_back({term, tp.y, idx});
    }
  }
  for (int t = 0; t < shape.t; ++t) {
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + t)];
    const Point out = terminal_world(pl, "out");
    double top = out.y + 2.0;
    for (const auto& bj : bridge_joints) {
      if (bj.term == t) top = std::max(top, bj.y);
    }
    const double dive_x = 29.9 - 0.2 * t;
    const double exit_y = 12.7 - 0.25 * t;
    Trace bridge;
    bridge.net = "term." + std::to_string(t);
    bridge.layer = 0;
    bridge.polyline = {out,           {dive_x, out.y}, {dive_x, exit_y},
                       {bridge_x(t), exit_y}, {bridge_x(t), top}};
    bridge.stitch = Stitch::Straight;
    bridge.bridge = true;
    bridge.end_a = gate_ref(pl.gate, "out", true);
    bridge.purpose = "and_output_bridge";
    const int idx = b.add_trace(std::move(bridge));
    for (const auto& bj : bridge_joints) {
      if (bj.term == t) b.add_joint(idx, bj.stub_trace, {bridge_x(t), bj.y}, JointKind::Plane);
    }
  }

  // alert paths at the OR outputs
  for (int k = 0; k < shape.m; ++k) {
    const std::string& name = matrix.outputs[static_cast<std::size_t>(k)];
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + shape.t + k)];
    const Point out = terminal_world(pl, "out");
    const Point ret = terminal_world(pl, "ret");
    Trace out_trace;
    out_trace.net = "out." + name;
    out_trace.layer = 0;
    out_trace.polyline = {out, {out.x + 1.5, out.y}};
    out_trace.end_a = gate_ref(pl.gate, "out", true);
    out_trace.end_b = gate_ref("led." + name, "a");
    out_trace.purpose = "or_output";
    b.add_trace(std::move(out_trace));
    Trace ret_trace;
    ret_trace.net = "out." + name + ".r";
    ret_trace.layer = 0;
    ret_trace.polyline = {{out.x + 1.5, out.y - 1.0}, ret};
    ret_trace.end_a = gate_ref("led." + name, "k");
    ret_trace.end_b = gate_ref(pl.gate, "ret", true);
    ret_trace.purpose = "led_return";
    b.add_trace(std::move(ret_trace));
  }

  // rails. NOT cluster reaches the battery trunks directly; OR rails jog
  // right of their cluster and run back over the top; the AND cluster
  // dives to a bottom corridor over bridge strips (the failure-prone
  // arrangement) and returns to collector columns on the right.
  std::vector<double> vcc_trunk_ys = {bat_vcc.y};
  std::vector<double> gnd_trunk_ys = {bat_gnd.y};
  std::vector<std::pair<int, Point>> trunk_joints;
  auto to_trunk = [&](const std::string& gate, const std::vector<Point>& polyline, bool is_vcc,
                      const std::string& terminal) {
    Trace stub;
    stub.net = is_vcc ? "VCC" : "GND";
    stub.layer = 0;
    stub.polyline = polyline;
    stub.end_a = gate_ref(gate, terminal);
    stub.purpose = "rail_stub";
    const int idx = b.add_trace(std::move(stub));
    (is_vcc ? vcc_trunk_ys : gnd_trunk_ys).push_back(polyline.back().y);
    trunk_joints.emplace_back(idx, polyline.back());
    return idx;
  };
  for (int i = 0; i < shape.n; ++i) {
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(i)];
    const Point vcc = terminal_world(pl, "vcc");
    const Point gnd = terminal_world(pl, "gnd");
    to_trunk(pl.gate, {vcc, {vcc_x, vcc.y}}, true, "vcc");
    to_trunk(pl.gate, {gnd, {gnd_x, gnd.y}}, false, "gnd");
  }
  // OR rails: right jog past the input stubs, risers, then the top run
  const double or_vcc_run = panel.height_cm - 2.8;
  const double or_gnd_run = panel.height_cm - 1.6;
  double max_stub_x = 0.0;
  for (int k = 0; k < shape.m; ++k) {
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + shape.t + k)];
    max_stub_x = std::max({max_stub_x, terminal_world(pl, "in1").x, terminal_world(pl, "in2").x});
  }
  for (int k = 0; k < shape.m; ++k) {
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + shape.t + k)];
    const Point vcc = terminal_world(pl, "vcc");
    const Point gnd = terminal_world(pl, "gnd");
    const double vcc_riser = max_stub_x + 0.7 + 0.7 * k;
    const double gnd_riser = max_stub_x + 0.7 + 0.7 * shape.m + 1.2 + 0.7 * k;
    to_trunk(pl.gate,
             {vcc, {vcc_riser, vcc.y}, {vcc_riser, or_vcc_run}, {vcc_x, or_vcc_run}}, true,
             "vcc");
    to_trunk(pl.gate,
             {gnd, {gnd_riser, gnd.y}, {gnd_riser, or_gnd_run}, {gnd_x, or_gnd_run}}, false,
             "gnd");
  }

  // AND rail bridges through the bottom corridor
  const double gnd_col_x = bridge_x(shape.t - 1) + 1.8;
  const double vcc_col_x = gnd_col_x + 1.8;
  std::vector<double> vcc_col_ys, gnd_col_ys;
  std::vector<std::pair<int, Point>> col_rail_joints;
  for (int t = 0; t < shape.t; ++t) {
    const Placement& pl = b.layout.placements[static_cast<std::size_t>(shape.n + t)];
    const Point vcc = terminal_world(pl, "vcc");
    const Point gnd = terminal_world(pl, "gnd");
    const double vcc_corridor = 6.8 - 0.8 * t;
    const double gnd_corridor = 10.4 - 0.8 * t;
    const double vcc_drop_x = and_x + 0.6 + 0.3 * t;
    const double gnd_drop_x = and_x + 3.3 + 0.3 * t;
    if (vcc_corridor < 4.4) {
      throw Error(ErrorCode::PanelTooSmall, "bottom rail corridor ran out of tracks");
    }
    Trace vstub;
    vstub.net = "VCC";
    vstub.layer = 0;
    vstub.polyline = {vcc,
                      {vcc.x, vcc.y - 0.3},
                      {vcc_drop_x, vcc.y - 0.3},
                      {vcc_drop_x, vcc_corridor},
                      {vcc_col_x, vcc_corridor}};
    vstub.bridge = true;
    vstub.end_a = gate_ref(pl.gate, "vcc");
    vstub.purpose = "rail_bridge";
    const int vidx = b.add_trace(std::move(vstub));
    vcc_col_ys.push_back(vcc_corridor);
    col_rail_joints.emplace_back(vidx, Point{vcc_col_x, vcc_corridor});
    Trace gstub;
    gstub.net = "GND";
    gstub.layer = 0;
    gstub.polyline = {gnd,
                      {gnd.x, gnd.y - 0.65},
                      {gnd_drop_x, gnd.y - 0.65},
                      {gnd_drop_x, gnd_corridor},
                      {gnd_col_x, gnd_corridor}};
    gstub.bridge = true;
    gstub.end_a = gate_ref(pl.gate, "gnd");
    gstub.purpose = "rail_bridge";
    const int gidx = b.add_trace(std::move(gstub));
    gnd_col_ys.push_back(gnd_corridor);
    col_rail_joints.emplace_back(gidx, Point{gnd_col_x, gnd_corridor});
  }
  Trace vcc_col;
  vcc_col.net = "VCC";
  vcc_col.layer = 0;
  vcc_col.polyline = {{vcc_x, 2.2},
                      {vcc_col_x, 2.2},
                      {vcc_col_x, *std::max_element(vcc_col_ys.begin(), vcc_col_ys.end())}};
  vcc_col.bridge = true;
  vcc_col.purpose = "rail_return";
  const int vcc_col_idx = b.add_trace(std::move(vcc_col));
  Trace gnd_col;
  gnd_col.net = "GND";
  gnd_col.layer = 0;
  gnd_col.polyline = {{gnd_x, 3.4},
                      {gnd_col_x, 3.4},
                      {gnd_col_x, *std::max_element(gnd_col_ys.begin(), gnd_col_ys.end())}};
  gnd_col.bridge = true;
  gnd_col.purpose = "rail_return";
  const int gnd_col_idx = b.add_trace(std::move(gnd_col));
  for (const auto& [stub, at] : col_rail_joints) {
    const bool is_vcc = b.layout.traces[static_cast<std::size_t>(stub)].net == "VCC";
    b.add_joint(is_vcc ? vcc_col_idx : gnd_col_idx, stub, at, JointKind::Rail);
  }
  vcc_trunk_ys.push_back(2.2);
  gnd_trunk_ys.push_back(3.4);

  // battery trunks
  Trace vcc_trunk;
  vcc_trunk.net = "VCC";
  vcc_trunk.layer = 0;
  vcc_trunk.polyline = {bat_vcc,
                        {vcc_x, *std::max_element(vcc_trunk_ys.begin(), vcc_trunk_ys.end())}};
  vcc_trunk.end_a = {AttachRef::Kind::Battery, "bat", "+", true};
  vcc_trunk.purpose = "rail_trunk";
  const int vcc_trunk_idx = b.add_trace(std::move(vcc_trunk));
  Trace gnd_trunk;
  gnd_trunk.net = "GND";
  gnd_trunk.layer = 0;
  gnd_trunk.polyline = {bat_gnd,
                        {gnd_x, *std::max_element(gnd_trunk_ys.begin(), gnd_trunk_ys.end())}};
  gnd_trunk.end_a = {AttachRef::Kind::Battery, "bat", "-", true};
  gnd_trunk.purpose = "rail_trunk";
  const int gnd_trunk_idx = b.add_trace(std::move(gnd_trunk));
  for (const auto& [stub, at] : trunk_joints) {
    const bool is_vcc = b.layout.traces[static_cast<std::size_t>(stub)].net == "VCC";
    b.add_joint(is_vcc ? vcc_trunk_idx : gnd_trunk_idx, stub, at, JointKind::Rail);
  }
  b.add_joint(vcc_trunk_idx, vcc_col_idx, {vcc_x, 2.2}, JointKind::Rail);
  b.add_joint(gnd_trunk_idx, gnd_col_idx, {gnd_x, 3.4}, JointKind::Rail);

  check_panel(b, panel);
  b.layout.short_candidates = crossing_report(b.layout);
  return b.layout;
}


}  // namespace

FabricLayout place(const PlaMatrix& matrix, Strategy strategy, const PanelSpec& panel) {
  validate(matrix);
  FabricLayout layout =
      strategy == Strategy::Multi ? place_multi(matrix, panel) : place_single(matrix, panel);
  if (footprints_overlap(layout)) {
    throw Error(ErrorCode::Internal, "placement produced overlapping footprints");
  }
  return layout;
}

std::vector<ShortCandidate> crossing_report(const FabricLayout& layout) {
  std::vector<ShortCandidate> candidates;
  for (std::size_t i = 0; i < layout.traces.size(); ++i) {
    for (std::size_t j = i + 1; j < layout.traces.size(); ++j) {
      const Trace& a = layout.traces[i];
      const Trace& b = layout.traces[j];
      if (a.layer != b.layer) continue;
      if (a.insulated || b.insulated) continue;
      if (a.net == b.net) continue;
      for (const Point& hit : polyline_intersections(a.polyline, b.polyline)) {
        bool stitched = false;
        for (const auto& joint : layout.joints) {
          const bool same_pair =
              (joint.trace_a == static_cast<int>(i) && joint.trace_b == static_cast<int>(j)) ||
              (joint.trace_a == static_cast<int>(j) && joint.trace_b == static_cast<int>(i));
          if (same_pair && distance(joint.at, hit) < 0.1 + 1e-9) stitched = true;
        }
        if (stitched) continue;
        const Severity severity = (a.bridge || b.bridge) ? Severity::High : Severity::Medium;
        candidates.push_back(
            {static_cast<int>(i), static_cast<int>(j), hit, severity});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const ShortCandidate& a, const ShortCandidate& b) {
              if (a.trace_a != b.trace_a) return a.trace_a < b.trace_a;
              if (a.trace_b != b.trace_b) return a.trace_b < b.trace_b;
              if (a.at.x != b.at.x) return a.at.x < b.at.x;
              return a.at.y < b.at.y;
            });
  return candidates;
}

FabricLayout apply_stretch(const FabricLayout& layout, double strain, StretchAxis axis,
                           StretchReport* report) {
  if (strain < 0.0 || strain > 0.5) {
    throw Error(ErrorCode::OutOfRange, "strain " + std::to_string(strain) + " outside [0, 0.5]");
  }
  const double f = 1.0 + strain;
  auto scale_point = [&](Point p) {
    if (axis == StretchAxis::Vertical) {
      p.y *= f;
    } else {
      p.x *= f;
    }
    return p;
  };

  FabricLayout out = layout;
  if (axis == StretchAxis::Vertical) {
    out.panel.height_cm *= f;
  } else {
    out.panel.width_cm *= f;
  }
  for (auto& pl : out.placements) pl.origin = scale_point(pl.origin);

  StretchReport local;
  local.trace_scale.resize(out.traces.size(), 1.0);
  local.trace_strain.resize(out.traces.size(), 0.0);
  for (std::size_t i = 0; i < out.traces.size(); ++i) {
    Trace& trace = out.traces[i];
    const double before = trace.rest_length_cm();
    for (auto& p : trace.polyline) p = scale_point(p);
    const double after = trace.rest_length_cm();
    const double scale = before > 0 ? after / before : 1.0;
    local.trace_scale[i] = scale;
    local.trace_strain[i] = scale - 1.0;
    if (scale - 1.0 > trace.max_strain() + 1e-12) {
      local.overstrained.push_back(static_cast<int>(i));
    }
  }
  for (auto& joint : out.joints) {
    joint.at = scale_point(joint.at);
    const double strain_a = local.trace_strain[static_cast<std::size_t>(joint.trace_a)];
    const double strain_b = local.trace_strain[static_cast<std::size_t>(joint.trace_b)];
    joint.loosen_factor = 1.0 + std::max(strain_a, strain_b);
    local.joint_loosen.push_back(joint.loosen_factor);
  }
  for (auto& cand : out.short_candidates) cand.at = scale_point(cand.at);

  if (report) *report = std::move(local);
  return out;
}

ParasiticExtraction extract_parasitics(const FabricLayout& layout) {
  ParasiticExtraction ext;

  // group traces per net, keeping trace order
  std::map<std::string, std::vector<int>> nets;
  for (std::size_t i = 0; i < layout.traces.size(); ++i) {
    nets[layout.traces[i].net].push_back(static_cast<int>(i));
  }

  // points of interest per trace (arc positions of endpoints, joints and
  // short candidates) with the node names assigned per net
  struct TracePoints {
    std::vector<double> at;
    std::vector<std::string> node;
  };
  std::map<int, TracePoints> points;

  auto node_at = [&](int trace_id, const Point& at) -> const std::string& {
    const Trace& trace = layout.traces[static_cast<std::size_t>(trace_id)];
    const double pos = arc_position(trace.polyline, at);
    const auto& tp = points.at(trace_id);
    for (std::size_t i = 0; i < tp.at.size(); ++i) {
      if (std::abs(tp.at[i] - pos) < 1e-5) return tp.node[i];
    }
    throw Error(ErrorCode::Internal, "no extraction node on net " + trace.net);
  };

  for (const auto& [net, trace_ids] : nets) {
    ext.routed_nets.push_back(net);

    std::map<int, std::vector<double>> positions;
    for (int id : trace_ids) {
      const Trace& trace = layout.traces[static_cast<std::size_t>(id)];
      positions[id] = {0.0, trace.rest_length_cm()};
    }
    auto note_point = [&](int trace_id, const Point& at) {
      if (!positions.count(trace_id)) return;
      const Trace& trace = layout.traces[static_cast<std::size_t>(trace_id)];
      positions[trace_id].push_back(arc_position(trace.polyline, at));
    };
    for (const auto& joint : layout.joints) {
      note_point(joint.trace_a, joint.at);
      note_point(joint.trace_b, joint.at);
    }
    for (const auto& cand : layout.short_candidates) {
      note_point(cand.trace_a, cand.at);
      note_point(cand.trace_b, cand.at);
    }

    // locate the driving end
    int driver_trace = -1;
    bool driver_at_end_a = true;
    bool input_net = false;
    std::string input_name;
    for (int id : trace_ids) {
      const Trace& trace = layout.traces[static_cast<std::size_t>(id)];
      for (int side = 0; side < 2; ++side) {
        const AttachRef& ref = side == 0 ? trace.end_a : trace.end_b;
        if (ref.driver) {
          if (driver_trace >= 0) {
            throw Error(ErrorCode::Internal, "net " + net + " has two driving ends");
          }
          driver_trace = id;
          driver_at_end_a = side == 0;
        }
      }
      if (!trace.drive_input.empty()) {
        input_net = true;
        input_name = trace.drive_input;
      }
    }
    if (driver_trace < 0) {
      throw Error(ErrorCode::Internal, "net " + net + " has no driving end");
    }

    int counter = 0;
    for (int id : trace_ids) {
      auto& list = positions[id];
      std::sort(list.begin(), list.end());
      TracePoints tp;
      for (double pos : list) {
        if (!tp.at.empty() && pos - tp.at.back() < 1e-6) continue;
        tp.at.push_back(pos);
        tp.node.push_back("");
      }
      points[id] = std::move(tp);
    }

    // the driver point keeps the bare net name; driven inputs get a pad
    // node instead, with the clip contact bridging to the net name
    {
      const Trace& trace = layout.traces[static_cast<std::size_t>(driver_trace)];
      auto& tp = points[driver_trace];
      const double pos = driver_at_end_a ? 0.0 : trace.rest_length_cm();
      for (std::size_t i = 0; i < tp.at.size(); ++i) {
        if (std::abs(tp.at[i] - pos) < 1e-6 && !input_net) tp.node[i] = net;
      }
    }
    for (int id : trace_ids) {
      auto& tp = points[id];
      for (auto& node : tp.node) {
        if (node.empty()) node = net + "#" + std::to_string(counter++);
      }
    }

    for (int id : trace_ids) {
      const auto& tp = points[id];
      for (std::size_t i = 1; i < tp.at.size(); ++i) {
        ParasiticEdge edge;
        edge.kind = ParasiticEdge::Kind::Thread;
        edge.net = net;
        edge.node_a = tp.node[i - 1];
        edge.node_b = tp.node[i];
        edge.length_cm = tp.at[i] - tp.at[i - 1];
        edge.trace_index = id;
        ext.edges.push_back(edge);
      }
    }

    if (input_net) {
      const Trace& trace = layout.traces[static_cast<std::size_t>(driver_trace)];
      const Point pad = driver_at_end_a ? trace.polyline.front() : trace.polyline.back();
      ParasiticEdge clip;
      clip.kind = ParasiticEdge::Kind::InputClip;
      clip.net = net;
      clip.node_a = net;
      clip.node_b = node_at(driver_trace, pad);
      clip.input_name = input_name;
      ext.edges.push_back(clip);
    }

    // gate pins re-home at non-driving endpoints (and at the pad of driven
    // nets); duplicate-input gates attach once
    std::set<std::pair<std::string, std::string>> attached;
    for (int id : trace_ids) {
      const Trace& trace = layout.traces[static_cast<std::size_t>(id)];
      for (int side = 0; side < 2; ++side) {
        const AttachRef& ref = side == 0 ? trace.end_a : trace.end_b;
        if (ref.kind != AttachRef::Kind::GateTerminal) continue;
        if (ref.driver && !input_net) continue;  // pins stay on the net name
        const Point at = side == 0 ? trace.polyline.front() : trace.polyline.back();
        if (!attached.insert({ref.gate, net}).second) continue;
        ext.attachments.push_back({net, node_at(id, at), ref.gate, ref.terminal});
      }
      if (trace.probe_at_end) {
        ext.probes[net] = node_at(id, trace.polyline.back());
      }
    }
  }

  for (std::size_t j = 0; j < layout.joints.size(); ++j) {
    const Joint& joint = layout.joints[j];
    const Trace& ta = layout.traces[static_cast<std::size_t>(joint.trace_a)];
    const Trace& tb = layout.traces[static_cast<std::size_t>(joint.trace_b)];
    ParasiticEdge edge;
    edge.kind = ParasiticEdge::Kind::Joint;
    edge.net = ta.net;
    edge.node_a = node_at(joint.trace_a, joint.at);
    edge.node_b = node_at(joint.trace_b, joint.at);
    edge.joint_index = static_cast<int>(j);
    edge.bridge = ta.bridge || tb.bridge;
    edge.joint_kind = joint.kind;
    ext.edges.push_back(edge);
  }

  for (std::size_t c = 0; c < layout.short_candidates.size(); ++c) {
    const ShortCandidate& cand = layout.short_candidates[c];
    ParasiticShunt shunt;
    shunt.node_a = node_at(cand.trace_a, cand.at);
    shunt.node_b = node_at(cand.trace_b, cand.at);
    shunt.candidate_index = static_cast<int>(c);
    shunt.severity = cand.severity;
    ext.shunts.push_back(shunt);
  }

  return ext;
}

double rail_separation_cm(const FabricLayout& layout) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < layout.traces.size(); ++i) {
    if (layout.traces[i].net != "VCC") continue;
    for (std::size_t j = 0; j < layout.traces.size(); ++j) {
      if (layout.traces[j].net != "GND") continue;
      if (layout.traces[i].layer != layout.traces[j].layer) continue;
      const auto& a = layout.traces[i].polyline;
      const auto& bp = layout.traces[j].polyline;
      for (std::size_t s = 1; s < a.size(); ++s) {
        for (std::size_t t = 1; t < bp.size(); ++t) {
          if (segment_intersection(a[s - 1], a[s], bp[t - 1], bp[t])) continue;
          best = std::min(best, segment_distance(a[s - 1], a[s], bp[t - 1], bp[t]));
        }
      }
    }
  }
  return best;
}

bool footprints_overlap(const FabricLayout& layout) {
  for (std::size_t i = 0; i < layout.placements.size(); ++i) {
    for (std::size_t j = i + 1; j < layout.placements.size(); ++j) {
      const Placement& a = layout.placements[i];
      const Placement& b = layout.placements[j];
      if (a.layer != b.layer) continue;
      const GateFootprint fa = footprint(a.kind);
      const GateFootprint fb = footprint(b.kind);
      if (rects_overlap({a.origin, fa.width_cm, fa.height_cm, a.rotation_deg},
                        {b.origin, fb.width_cm, fb.height_cm, b.rotation_deg})) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace etpla
