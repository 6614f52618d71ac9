#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "etpla/minimize.hpp"
#include "etpla/pla.hpp"
#include "test_helpers.hpp"

using namespace etpla;

TEST_CASE("from_sop transcribes the reference design") {
  const auto expr = minimize(testing::reference_table());
  const auto matrix = from_sop(expr);

  CHECK(matrix.line_labels() == std::vector<std::string>{"A", "A'", "B", "B'", "C", "C'"});
  REQUIRE(matrix.term_count() == 3);
  CHECK(matrix.term_labels == std::vector<std::string>{"A'B", "AB", "BC"});

  // rows: A'B -> lines A', B; AB -> A, B; BC -> B, C
  BoolMatrix and_expect(3, 6);
  and_expect.at(0, 1) = 1;
  and_expect.at(0, 2) = 1;
  and_expect.at(1, 0) = 1;
  and_expect.at(1, 2) = 1;
  and_expect.at(2, 2) = 1;
  and_expect.at(2, 4) = 1;
  CHECK(matrix.and_plane == and_expect);

  BoolMatrix or_expect(2, 3);
  or_expect.at(0, 0) = 1;
  or_expect.at(0, 2) = 1;
  or_expect.at(1, 1) = 1;
  or_expect.at(1, 2) = 1;
  CHECK(matrix.or_plane == or_expect);
}

TEST_CASE("from_sop edge shapes") {
  SopExpression empty;
  empty.inputs = {"A"};
  empty.outputs = {"Z"};
  empty.cover = {{}};
  const auto matrix = from_sop(empty);
  CHECK(matrix.term_count() == 0);

  SopExpression single;
  single.inputs = {"A"};
  single.outputs = {"Z"};
  single.terms = {implicant_from_pattern("1")};
  single.cover = {{0}};
  const auto one = from_sop(single);
  CHECK(one.and_plane.rows == 1);
  CHECK(one.and_plane.at(0, 0) == 1);
  CHECK(one.and_plane.at(0, 1) == 0);
  CHECK(one.or_plane.at(0, 0) == 1);

  SopExpression tautology;
  tautology.inputs = {"A"};
  tautology.outputs = {"Z"};
  tautology.terms = {Implicant{}};
  tautology.cover = {{0}};
  CHECK_THROWS_AS((void)from_sop(tautology), Error);
}

TEST_CASE("program edits one stitch at a time") {
  const auto table = testing::reference_table();
  const auto matrix = from_sop(minimize(table));

  // removing BC from Z1 leaves Z1 = A'B
  const auto cut = program(matrix, {PlaEdit::Plane::Or, 0, 2, false});
  const auto report = verify(cut, table);
  // Z1 = A'B misses exactly vector 111 (BC high, A'B low)
  REQUIRE(report.mismatches.size() == 1);
  CHECK(report.mismatches[0].vector == "111");

  // edit locality: exactly one cell differs
  int diffs = 0;
  for (std::size_t i = 0; i < matrix.or_plane.cells.size(); ++i) {
    if (matrix.or_plane.cells[i] != cut.or_plane.cells[i]) ++diffs;
  }
  CHECK(diffs == 1);
  CHECK(matrix.and_plane == cut.and_plane);

  // adding A' to the AB term makes it contradictory
  try {
    program(matrix, {PlaEdit::Plane::And, 1, 1, true});
    FAIL("expected CONSTANT_TERM");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConstantTerm);
  }

  // stranding a term: A'B is only referenced by Z1
  try {
    program(matrix, {PlaEdit::Plane::Or, 0, 0, false});
    FAIL("expected DANGLING_TERM");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DanglingTerm);
  }

  try {
    program(matrix, {PlaEdit::Plane::And, 9, 0, true});
    FAIL("expected OUT_OF_RANGE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
  }
}

TEST_CASE("verify reports vectors in ascending order") {
  const auto table = testing::reference_table();
  auto matrix = from_sop(minimize(table));
  // zero Z1's or-plane row directly (verify does not re-check invariants)
  matrix.or_plane.at(0, 0) = 0;
  matrix.or_plane.at(0, 2) = 0;

  const auto report = verify(matrix, table);
  std::vector<std::string> vectors;
  for (const auto& mm : report.mismatches) vectors.push_back(mm.vector);
  // mismatches exactly where Z1 = 1, ascending
  CHECK(vectors == std::vector<std::string>{"010", "011", "111"});

  TruthTable small = make_truth_table({"A"}, {"Z"}, {"0", "1"});
  CHECK_THROWS_AS((void)verify(matrix, small), Error);
}

TEST_CASE("round trip: verify(from_sop(minimize(t)), t) empty") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int m = 1 + static_cast<int>(rng() % 3);
    auto table = testing::random_table(rng, n, m);
    // constant-1 outputs produce literal-free terms the planes cannot hold;
    // keep at least one 0 per output to stay in stitched territory.
    for (int k = 0; k < m; ++k) {
      bool all_one = true;
      for (auto& row : table.rows) {
        if (row[static_cast<std::size_t>(k)] != '1') all_one = false;
      }
      if (all_one) table.rows[0][static_cast<std::size_t>(k)] = '0';
    }
    const auto expr = minimize(table);
    const auto matrix = from_sop(expr);
    CHECK(verify(matrix, table).ok());

    // evaluation agreement with the originating expression on all vectors
    for (std::uint32_t v = 0; v < (1u << n); ++v) {
      CHECK(eval_matrix(matrix, v) == eval_sop(expr, vector_string(v, n)));
    }
  }
}
