#pragma once

#include <map>
#include <string>
#include <vector>

namespace etpla {

enum class JointKind { Plane, Rail, Battery };
enum class Severity { Medium, High };

const char* severity_name(Severity s);

/// Wiring extracted from a layout, expressed as resistive edges between
/// named electrical nodes. The node that keeps the bare net name is the
/// driving end; loads are re-attached at `<net>#k` subnodes.
struct ParasiticEdge {
  enum class Kind { Thread, Joint, InputClip };
  Kind kind = Kind::Thread;
  std::string net;
  std::string node_a;
  std::string node_b;
  double length_cm = 0.0;  // Thread
  int trace_index = -1;    // Thread
  int joint_index = -1;    // Joint
  bool bridge = false;     // Joint lands on a bridge strip
  JointKind joint_kind = JointKind::Plane;
  std::string input_name;  // InputClip
};

/// Component pins of `gate` that reference `net` move to `node`.
struct ParasiticAttachment {
  std::string net;
  std::string node;
  std::string gate;
  std::string terminal;
};

struct ParasiticShunt {
  std::string node_a;
  std::string node_b;
  Severity severity = Severity::Medium;
  int candidate_index = -1;
};

struct ParasiticExtraction {
  std::vector<std::string> routed_nets;
  std::vector<ParasiticEdge> edges;
  std::vector<ParasiticAttachment> attachments;
  std::vector<ParasiticShunt> shunts;
  std::map<std::string, std::string> probes;  // net -> far-end node
};

}  // namespace etpla
