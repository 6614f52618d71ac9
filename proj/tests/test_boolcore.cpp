#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "etpla/minimize.hpp"
#include "etpla/truth_table.hpp"
#include "test_helpers.hpp"

using namespace etpla;

namespace {

std::vector<std::string> patterns(const std::vector<Implicant>& imps, int n) {
  std::vector<std::string> out;
  for (const auto& imp : imps) out.push_back(implicant_pattern(imp, n));
  return out;
}

VectorSet set_of(std::initializer_list<std::uint32_t> vs) {
  VectorSet s;
  for (auto v : vs) s.set(v);
  return s;
}

// Independent cover oracle: primes by exhaustive containment over all 3^n
// candidate implicants, then minimal cover by subset enumeration of
// ascending size. Slow and obviously correct.
std::vector<Implicant> brute_primes(const VectorSet& care, int n) {
  std::vector<Implicant> valid;
  const int total_patterns = 1;
  (void)total_patterns;
  std::vector<Implicant> all;
  std::string pattern(static_cast<std::size_t>(n), '-');
  // enumerate all 3^n patterns
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  while (true) {
    std::string p;
    for (int d : digits) p += (d == 0 ? '0' : d == 1 ? '1' : '-');
    all.push_back(implicant_from_pattern(p));
    int i = 0;
    while (i < n && digits[static_cast<std::size_t>(i)] == 2) {
      digits[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == n) break;
    ++digits[static_cast<std::size_t>(i)];
  }
  for (const auto& imp : all) {
    bool inside = true;
    bool nonempty = false;
    for (std::uint32_t v = 0; v < (1u << n); ++v) {
      if (implicant_matches(imp, v, n)) {
        nonempty = true;
        if (!care.test(v)) inside = false;
      }
    }
    if (inside && nonempty) valid.push_back(imp);
  }
  std::vector<Implicant> primes;
  for (const auto& a : valid) {
    bool contained = false;
    for (const auto& b : valid) {
      if (a == b) continue;
      // a contained in b: every vector of a matches b
      bool sub = true;
      for (std::uint32_t v = 0; v < (1u << n); ++v) {
        if (implicant_matches(a, v, n) && !implicant_matches(b, v, n)) sub = false;
      }
      if (sub) contained = true;
    }
    if (!contained) primes.push_back(a);
  }
  return primes;
}

int brute_min_cover_size(const VectorSet& on, const VectorSet& dc, int n) {
  if (on.none()) return 0;
  const auto primes = brute_primes(on | dc, n);
  const int p = static_cast<int>(primes.size());
  for (int size = 1; size <= p; ++size) {
    std::vector<int> pick(static_cast<std::size_t>(p), 0);
    std::fill(pick.begin(), pick.begin() + size, 1);
    std::sort(pick.begin(), pick.end());
    do {
      VectorSet covered;
      for (int i = 0; i < p; ++i) {
        if (!pick[static_cast<std::size_t>(i)]) continue;
        for (std::uint32_t v = 0; v < (1u << n); ++v) {
          if (implicant_matches(primes[static_cast<std::size_t>(i)], v, n)) covered.set(v);
        }
      }
      if ((on & ~covered).none()) return size;
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return p;
}

}  // namespace

TEST_CASE("vector string round trip") {
  CHECK(vector_string(2, 3) == "010");
  CHECK(vector_index("010") == 2);
  CHECK(vector_index("111") == 7);
  CHECK_THROWS_AS((void)vector_index("01x"), Error);
}

TEST_CASE("parse json identity table") {
  const auto table = parse_truth_table(R"({
    "inputs": ["A"], "outputs": ["Z"],
    "rows": [{"in": "0", "out": "0"}, {"in": "1", "out": "1"}]
  })");
  CHECK(table.n() == 1);
  CHECK(table.m() == 1);
  CHECK(table.rows == std::vector<std::string>{"0", "1"});
}

TEST_CASE("parse rejects missing row") {
  const char* text = R"({
    "inputs": ["A","B","C"], "outputs": ["Z"],
    "rows": [
      {"in":"000","out":"0"},{"in":"001","out":"0"},{"in":"010","out":"1"},
      {"in":"011","out":"1"},{"in":"100","out":"0"},{"in":"101","out":"0"},
      {"in":"110","out":"1"}
    ]
  })";
  try {
    parse_truth_table(text);
    FAIL("expected MISSING_ROW");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingRow);
  }
}

TEST_CASE("parse rejects duplicates, bad symbols and syntax") {
  try {
    parse_truth_table(R"({"inputs":["A"],"outputs":["Z"],
      "rows":[{"in":"0","out":"0"},{"in":"0","out":"1"}]})");
    FAIL("expected DUPLICATE_ROW");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateRow);
  }
  try {
    parse_truth_table(R"({"inputs":["A"],"outputs":["Z"],
      "rows":[{"in":"0","out":"x"},{"in":"1","out":"1"}]})");
    FAIL("expected BAD_SYMBOL");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadSymbol);
  }
  try {
    parse_truth_table("{ not json");
    FAIL("expected MALFORMED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Malformed);
  }
}

TEST_CASE("parse csv alternative") {
  const auto table = parse_truth_table(
      "in:A,in:B,out:Z\n"
      "0,0,0\n0,1,1\n1,0,1\n1,1,0\n");
  CHECK(table.n() == 2);
  CHECK(table.rows == std::vector<std::string>{"0", "1", "1", "0"});
}

TEST_CASE("reference table matches its defining expressions") {
  const auto table = testing::reference_table();
  CHECK(table.rows == std::vector<std::string>{"00", "00", "10", "11", "00", "00", "01", "11"});
}

TEST_CASE("eval_sop basics") {
  SopExpression expr;
  expr.inputs = {"A", "B", "C"};
  expr.outputs = {"Z1"};
  expr.terms = {implicant_from_pattern("01-"), implicant_from_pattern("-11")};
  expr.cover = {{0, 1}};
  CHECK(eval_sop(expr, "010") == "1");
  CHECK(eval_sop(expr, "100") == "0");
  CHECK_THROWS_AS((void)eval_sop(expr, "01"), Error);

  SopExpression empty;
  empty.inputs = {"A", "B"};
  empty.outputs = {"Z"};
  empty.cover = {{}};
  CHECK(eval_sop(empty, "11") == "0");

  SopExpression z2;
  z2.inputs = {"A", "B", "C"};
  z2.outputs = {"Z2"};
  z2.terms = {implicant_from_pattern("11-"), implicant_from_pattern("-11")};
  z2.cover = {{0, 1}};
  CHECK(eval_sop(z2, "111") == "1");
}

TEST_CASE("qm primes on worked sets") {
  CHECK(patterns(qm_primes(set_of({2, 3, 7}), 3), 3) ==
        std::vector<std::string>{"01-", "-11"});
  CHECK(patterns(qm_primes(set_of({6, 7, 3}), 3), 3) ==
        std::vector<std::string>{"11-", "-11"});

  VectorSet all;
  for (std::uint32_t v = 0; v < 8; ++v) all.set(v);
  const auto tautology = qm_primes(all, 3);
  REQUIRE(tautology.size() == 1);
  CHECK(implicant_pattern(tautology[0], 3) == "---");
}

TEST_CASE("qm primality property") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 2);
    VectorSet care;
    for (std::uint32_t v = 0; v < (1u << n); ++v) {
      if (rng() & 1) care.set(v);
    }
    for (const auto& prime : qm_primes(care, n)) {
      // covered vectors stay inside the care set
      for (std::uint32_t v : implicant_vectors(prime, n)) CHECK(care.test(v));
      // dropping any literal escapes the care set
      for (int i = 0; i < n; ++i) {
        if (!(prime.care & (1u << i))) continue;
        Implicant widened = prime;
        widened.care = static_cast<std::uint16_t>(widened.care & ~(1u << i));
        bool escapes = false;
        for (std::uint32_t v : implicant_vectors(widened, n)) {
          if (!care.test(v)) escapes = true;
        }
        CHECK(escapes);
      }
    }
  }
}

TEST_CASE("minimize recovers the reference configuration") {
  const auto expr = minimize(testing::reference_table());
  REQUIRE(expr.terms.size() == 3);
  CHECK(implicant_pattern(expr.terms[0], 3) == "01-");
  CHECK(implicant_pattern(expr.terms[1], 3) == "11-");
  CHECK(implicant_pattern(expr.terms[2], 3) == "-11");
  CHECK(implicant_label(expr.terms[0], expr.inputs) == "A'B");
  CHECK(implicant_label(expr.terms[1], expr.inputs) == "AB");
  CHECK(implicant_label(expr.terms[2], expr.inputs) == "BC");
  CHECK(expr.cover[0] == std::vector<int>{0, 2});
  CHECK(expr.cover[1] == std::vector<int>{1, 2});

  const auto stats = sop_stats(expr);
  CHECK(stats.and_gates == 3);
  CHECK(stats.or_gates == 2);
  CHECK(stats.input_lines == 6);
}

TEST_CASE("minimize degenerate shapes") {
  const auto zero = minimize(make_truth_table({"A", "B"}, {"Z"}, {"0", "0", "0", "0"}));
  CHECK(zero.terms.empty());
  CHECK(zero.cover[0].empty());

  const auto just_b =
      minimize(make_truth_table({"A", "B", "C"}, {"Z"}, {"0", "0", "1", "1", "0", "0", "1", "1"}));
  REQUIRE(just_b.terms.size() == 1);
  CHECK(implicant_pattern(just_b.terms[0], 3) == "-1-");
}

TEST_CASE("minimize shares terms across outputs") {
  // f1 = m(2,3,7), f2 = m(4,5,7): individually 2 primes each (4 distinct);
  // sharing the shared minterm 7 as its own term gives 3 distinct.
  const auto table = make_truth_table({"A", "B", "C"}, {"F", "G"},
                                      {"00", "00", "10", "10", "01", "01", "00", "11"});
  const auto expr = minimize(table);
  CHECK(expr.terms.size() == 3);
  std::set<std::string> pats;
  for (const auto& t : expr.terms) pats.insert(implicant_pattern(t, 3));
  CHECK(pats == std::set<std::string>{"01-", "10-", "111"});
  const auto report = check_equivalence(expr, table);
  CHECK(report.ok());
}

TEST_CASE("check_equivalence flags the exact vectors") {
  const auto table = testing::reference_table();
  const auto good = minimize(table);
  CHECK(check_equivalence(good, table).ok());

  SopExpression wrong = good;
  // Z1 = B instead of A'B + BC
  wrong.terms = {implicant_from_pattern("-1-"), implicant_from_pattern("11-"),
                 implicant_from_pattern("-11")};
  wrong.cover = {{0}, {1, 2}};
  const auto report = check_equivalence(wrong, table);
  REQUIRE(report.mismatches.size() == 1);
  CHECK(report.mismatches[0].vector == "110");

  SopExpression narrow;
  narrow.inputs = {"A", "B", "C"};
  narrow.outputs = {"Z1"};
  narrow.cover = {{}};
  CHECK_THROWS_AS((void)check_equivalence(narrow, table), Error);
}

TEST_CASE("minimize equals table on every vector, n<=4 m<=3") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int m = 1 + static_cast<int>(rng() % 3);
    const auto table = testing::random_table(rng, n, m, trial % 3 == 0 ? 0.15 : 0.0);
    const auto expr = minimize(table);
    const auto report = check_equivalence(expr, table);
    CHECK(report.ok());
  }
}

TEST_CASE("minimize is exact for single-output n=3 (spot sample vs oracle)") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t bits = rng() & 0xffu;
    std::vector<std::string> rows;
    VectorSet on;
    for (std::uint32_t v = 0; v < 8; ++v) {
      const bool one = (bits >> v) & 1u;
      rows.push_back(one ? "1" : "0");
      if (one) on.set(v);
    }
    const auto table = make_truth_table({"A", "B", "C"}, {"Z"}, rows);
    const auto expr = minimize(table);
    CHECK(static_cast<int>(expr.terms.size()) == brute_min_cover_size(on, {}, 3));
  }
}

TEST_CASE("minimize is deterministic") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto table = testing::random_table(rng, 3, 2, 0.1);
    const auto a = minimize(table);
    const auto b = minimize(table);
    CHECK(a.terms == b.terms);
    CHECK(a.cover == b.cover);
  }
}

TEST_CASE("adding don't-cares never increases the distinct-term count") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    auto table = testing::random_table(rng, n, 2);
    const auto base = minimize(table).terms.size();
    auto relaxed = table;
    for (auto& row : relaxed.rows) {
      for (auto& c : row) {
        if ((rng() % 4) == 0) c = '-';
      }
    }
    CHECK(minimize(relaxed).terms.size() <= base);
  }
}
