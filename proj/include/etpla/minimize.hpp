#pragma once

#include <bitset>
#include <vector>

#include "etpla/truth_table.hpp"

namespace etpla {

using VectorSet = std::bitset<256>;  // one bit per input vector, n <= 8

/// Prime implicants of an arbitrary care set (standard Quine-McCluskey
/// merge closure), returned in canonical order.
std::vector<Implicant> qm_primes(const VectorSet& care, int n);

/// Prime implicants of output k over its on-set plus don't-care set.
std::vector<Implicant> qm_prime_implicants(const TruthTable& table, int output_index);

/// Exact multi-output minimization: minimal number of distinct product
/// terms (a shared term counts once), ties broken by total literal count,
/// then canonical implicant order. Deterministic.
SopExpression minimize(const TruthTable& table);

struct SopStats {
  int and_gates = 0;    // distinct product terms with >= 1 literal
  int or_gates = 0;     // outputs with >= 1 term
  int input_lines = 0;  // 2n: every input and its complement
  int literal_count = 0;
};

SopStats sop_stats(const SopExpression& expr);

}  // namespace etpla
