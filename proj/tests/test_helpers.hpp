#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "etpla/truth_table.hpp"

namespace etpla::testing {

// Z1 = A'B + BC, Z2 = AB + BC over inputs A, B, C — the reference design
// the bundled data file and most integration tests run on.
inline TruthTable reference_table() {
  return make_truth_table({"A", "B", "C"}, {"Z1", "Z2"},
                          {"00", "00", "10", "11", "00", "00", "01", "11"});
}

inline TruthTable random_table(std::mt19937& rng, int n, int m, double dc_rate = 0.0) {
  std::vector<std::string> inputs, outputs;
  for (int i = 0; i < n; ++i) inputs.push_back(std::string(1, static_cast<char>('A' + i)));
  for (int k = 0; k < m; ++k) outputs.push_back("Z" + std::to_string(k + 1));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<std::string> rows;
  for (std::uint32_t v = 0; v < (1u << n); ++v) {
    std::string row;
    for (int k = 0; k < m; ++k) {
      if (dc_rate > 0.0 && uni(rng) < dc_rate) {
        row += '-';
      } else {
        row += (rng() & 1) ? '1' : '0';
      }
    }
    rows.push_back(row);
  }
  return make_truth_table(std::move(inputs), std::move(outputs), std::move(rows));
}

}  // namespace etpla::testing
