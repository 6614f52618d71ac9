#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "etpla/error.hpp"

namespace etpla {

/// Multi-output boolean specification. `rows[v]` holds the output characters
/// for input vector index v, one of '0', '1' or '-' (don't care). Vector
/// strings are MSB-first: the first input name maps to the top bit of v.
struct TruthTable {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> rows;  // size 2^n, each of length m

  int n() const { return static_cast<int>(inputs.size()); }
  int m() const { return static_cast<int>(outputs.size()); }
  std::size_t row_count() const { return rows.size(); }
};

constexpr int kMaxInputs = 8;
constexpr int kMaxOutputs = 8;

std::string vector_string(std::uint32_t index, int n);
std::uint32_t vector_index(const std::string& bits);

/// Validates names, totality and symbols; throws on violation.
TruthTable make_truth_table(std::vector<std::string> inputs,
                            std::vector<std::string> outputs,
                            std::vector<std::string> rows);

/// Accepts the JSON table format or the CSV alternative (sniffed on the
/// first non-space character).
TruthTable parse_truth_table(const std::string& text);

/// Product term: one literal slot per input position. Bit i of `care` set
/// means position i is constrained to bit i of `value`.
struct Implicant {
  std::uint16_t care = 0;
  std::uint16_t value = 0;

  friend bool operator==(const Implicant&, const Implicant&) = default;
};

bool implicant_matches(const Implicant& imp, std::uint32_t vector_idx, int n);
int implicant_literal_count(const Implicant& imp, int n);
std::string implicant_pattern(const Implicant& imp, int n);  // e.g. "01-"
Implicant implicant_from_pattern(const std::string& pattern);
std::string implicant_label(const Implicant& imp,
                            const std::vector<std::string>& inputs);  // "A'B"
std::vector<std::uint32_t> implicant_vectors(const Implicant& imp, int n);

/// Canonical ordering: position-wise with '0' < '1' < '-'. Defined literals
/// sort ahead of absent ones, which keeps term lists in reading order.
bool implicant_less(const Implicant& a, const Implicant& b, int n);

/// Sum-of-products cover per output over a shared term pool. `cover[k]`
/// indexes into `terms`; each index list is sorted and duplicate free.
struct SopExpression {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Implicant> terms;
  std::vector<std::vector<int>> cover;

  int n() const { return static_cast<int>(inputs.size()); }
  int m() const { return static_cast<int>(outputs.size()); }
};

std::string eval_sop(const SopExpression& expr, const std::string& vector_bits);

struct Mismatch {
  std::uint32_t index = 0;
  std::string vector;
  std::string expected;  // table row
  std::string actual;    // evaluated row
};

struct MismatchReport {
  std::vector<Mismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

/// Empty report iff expr matches the table at every non-don't-care output
/// position, checked over all 2^n vectors in ascending order.
MismatchReport check_equivalence(const SopExpression& expr, const TruthTable& table);

}  // namespace etpla
