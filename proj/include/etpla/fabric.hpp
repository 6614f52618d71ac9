#pragma once

#include <map>
#include <string>
#include <vector>

#include "etpla/config.hpp"
#include "etpla/geometry.hpp"
#include "etpla/netlist.hpp"
#include "etpla/parasitics.hpp"
#include "etpla/pla.hpp"

namespace etpla {

enum class Stitch { Zigzag, Straight, Satin };

const char* stitch_name(Stitch s);
Stitch stitch_from_name(const std::string& name);

/// Zig-zag stitching stretches with the fabric (14.5 cm relaxed to 19.5 cm
/// taut); straight running stitch has almost no give.
constexpr double kZigzagMaxStrain = 19.5 / 14.5 - 1.0;
constexpr double kStraightMaxStrain = 0.05;

struct GateFootprint {
  GateKind kind = GateKind::Not;
  double width_cm = 0.0;
  double height_cm = 0.0;
  std::map<std::string, Point> terminal_offsets;
  // stitched connector-node pitches for the mounted components
  double r1k_node_spacing_cm = 1.0;
  double r10k_node_spacing_cm = 1.5;
  double bjt_node_spacing_cm = 2.0;
};

GateFootprint footprint(GateKind kind);

/// Where a trace endpoint lands electrically. `driver` marks the end that
/// keeps the bare net name during parasitic extraction.
struct AttachRef {
  enum class Kind { None, GateTerminal, Battery };
  Kind kind = Kind::None;
  std::string gate;
  std::string terminal;
  bool driver = false;

  friend bool operator==(const AttachRef&, const AttachRef&) = default;
};

struct Trace {
  std::string net;
  int layer = 0;
  std::vector<Point> polyline;
  Stitch stitch = Stitch::Straight;
  bool insulated = false;
  bool bridge = false;          // conductive thread on a loose fabric strip
  std::string drive_input;      // non-empty: raw input line for this variable
  bool probe_at_end = false;    // far endpoint is a measurement point
  AttachRef end_a;
  AttachRef end_b;
  std::string purpose;

  double rest_length_cm() const { return arc_length(polyline); }
  double max_strain() const {
    return stitch == Stitch::Zigzag ? kZigzagMaxStrain : kStraightMaxStrain;
  }

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct Joint {
  int trace_a = -1;
  int trace_b = -1;
  Point at;
  JointKind kind = JointKind::Plane;
  double loosen_factor = 1.0;

  friend bool operator==(const Joint&, const Joint&) = default;
};

struct ShortCandidate {
  int trace_a = -1;
  int trace_b = -1;
  Point at;
  Severity severity = Severity::Medium;

  friend bool operator==(const ShortCandidate&, const ShortCandidate&) = default;
};

struct Placement {
  std::string gate;
  GateKind kind = GateKind::Not;
  int layer = 0;
  Point origin;
  double rotation_deg = 0.0;

  friend bool operator==(const Placement&, const Placement&) = default;
};

struct FabricLayout {
  PanelSpec panel;
  Strategy strategy = Strategy::Multi;
  int layer_count = 1;
  std::vector<Placement> placements;
  std::vector<Trace> traces;
  std::vector<Joint> joints;
  std::vector<ShortCandidate> short_candidates;

  friend bool operator==(const FabricLayout&, const FabricLayout&) = default;
};

/// Template-driven placement of the PLA onto a fabric panel. SINGLE puts
/// everything on one layer with a crossbar, bridge strips and uninsulated
/// rails; MULTI stacks input/NOT, AND and OR planes on three layers with
/// insulated left-side rails and a one-point battery joint.
FabricLayout place(const PlaMatrix& matrix, Strategy strategy, const PanelSpec& panel);

/// Same-layer geometric intersections of non-connected, non-insulated
/// trace pairs. High severity when a bridge strip is involved.
std::vector<ShortCandidate> crossing_report(const FabricLayout& layout);

struct StretchReport {
  std::vector<double> trace_scale;       // new arc length / old arc length
  std::vector<double> trace_strain;      // scale - 1
  std::vector<int> overstrained;         // trace indices beyond their stitch capacity
  std::vector<double> joint_loosen;      // per joint, >= 1
};

FabricLayout apply_stretch(const FabricLayout& layout, double strain, StretchAxis axis,
                           StretchReport* report = nullptr);

ParasiticExtraction extract_parasitics(const FabricLayout& layout);

/// Minimum clearance between VCC and GND traces, measured over segment
/// pairs that do not intersect (crossings are insulation events, not
/// clearance).
double rail_separation_cm(const FabricLayout& layout);

/// True if any two same-layer gate footprints overlap.
bool footprints_overlap(const FabricLayout& layout);

}  // namespace etpla
