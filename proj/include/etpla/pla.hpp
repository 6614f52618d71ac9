#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "etpla/truth_table.hpp"

namespace etpla {

struct BoolMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> cells;

  BoolMatrix() = default;
  BoolMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), cells(r * c, 0) {}

  std::uint8_t& at(std::size_t r, std::size_t c) { return cells[r * cols + c]; }
  std::uint8_t at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;
};

/// Stitched interconnection matrices: and_plane is terms x 2n input lines
/// (line 2i = input i, line 2i+1 = its complement), or_plane is outputs x
/// terms. Every cell is one programmable stitch.
struct PlaMatrix {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> term_labels;
  BoolMatrix and_plane;
  BoolMatrix or_plane;

  int n() const { return static_cast<int>(inputs.size()); }
  int m() const { return static_cast<int>(outputs.size()); }
  std::size_t term_count() const { return and_plane.rows; }
  std::vector<std::string> line_labels() const;

  friend bool operator==(const PlaMatrix&, const PlaMatrix&) = default;
};

/// Invariant check: consistent dimensions, no contradictory term, no term
/// without an input line or an output reference. Throws on violation.
void validate(const PlaMatrix& matrix);

PlaMatrix from_sop(const SopExpression& expr);

struct PlaEdit {
  enum class Plane { And, Or };
  Plane plane = Plane::And;
  std::size_t row = 0;  // term (and-plane) or output (or-plane)
  std::size_t col = 0;  // input line (and-plane) or term (or-plane)
  bool connect = true;
};

/// Returns a copy with the one cell set as requested, re-validated.
PlaMatrix program(const PlaMatrix& matrix, const PlaEdit& edit);

std::string eval_matrix(const PlaMatrix& matrix, std::uint32_t vector_idx);

/// Exhaustive functional check against the table; mismatching vectors in
/// ascending order, don't-cares never mismatch.
MismatchReport verify(const PlaMatrix& matrix, const TruthTable& table);

/// The implicant a term row encodes (used by netlist expansion and reports).
Implicant term_implicant(const PlaMatrix& matrix, std::size_t term);

}  // namespace etpla
