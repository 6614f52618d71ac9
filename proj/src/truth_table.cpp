#include "etpla/truth_table.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace etpla {

namespace {

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
  }
  return true;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::string vector_string(std::uint32_t index, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int i = 0; i < n; ++i) {
    if (index & (1u << (n - 1 - i))) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

std::uint32_t vector_index(const std::string& bits) {
  std::uint32_t v = 0;
  for (char c : bits) {
    v <<= 1;
    if (c == '1') {
      v |= 1;
    } else if (c != '0') {
      throw Error(ErrorCode::BadSymbol, "input vector character '" + std::string(1, c) + "'");
    }
  }
  return v;
}

TruthTable make_truth_table(std::vector<std::string> inputs,
                            std::vector<std::string> outputs,
                            std::vector<std::string> rows) {
  const int n = static_cast<int>(inputs.size());
  const int m = static_cast<int>(outputs.size());
  if (n < 1 || n > kMaxInputs) {
    throw Error(ErrorCode::Malformed, "input count " + std::to_string(n) +
                                          " outside [1, " + std::to_string(kMaxInputs) + "]");
  }
  if (m < 1 || m > kMaxOutputs) {
    throw Error(ErrorCode::Malformed, "output count " + std::to_string(m) +
                                          " outside [1, " + std::to_string(kMaxOutputs) + "]");
  }
  std::set<std::string> seen;
  for (const auto& list : {inputs, outputs}) {
    for (const auto& name : list) {
      if (!valid_name(name)) throw Error(ErrorCode::BadSymbol, "symbol name '" + name + "'");
      if (!seen.insert(name).second) {
        throw Error(ErrorCode::BadSymbol, "duplicate symbol '" + name + "'");
      }
    }
  }
  const std::size_t expected = std::size_t{1} << n;
  if (rows.size() != expected) {
    throw Error(rows.size() < expected ? ErrorCode::MissingRow : ErrorCode::DuplicateRow,
                "table has " + std::to_string(rows.size()) + " rows, needs " +
                    std::to_string(expected));
  }
  for (std::size_t v = 0; v < rows.size(); ++v) {
    if (rows[v].size() != static_cast<std::size_t>(m)) {
      throw Error(ErrorCode::Malformed,
                  "row " + vector_string(static_cast<std::uint32_t>(v), n) + " has " +
                      std::to_string(rows[v].size()) + " outputs, needs " + std::to_string(m));
    }
    for (char c : rows[v]) {
      if (c != '0' && c != '1' && c != '-') {
        throw Error(ErrorCode::BadSymbol, "output character '" + std::string(1, c) + "'");
      }
    }
  }
  return TruthTable{std::move(inputs), std::move(outputs), std::move(rows)};
}

namespace {

TruthTable parse_json_table(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Malformed, std::string("json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("inputs") || !doc.contains("outputs") ||
      !doc.contains("rows")) {
    throw Error(ErrorCode::Malformed, "table needs inputs, outputs and rows");
  }
  std::vector<std::string> inputs, outputs;
  try {
    inputs = doc.at("inputs").get<std::vector<std::string>>();
    outputs = doc.at("outputs").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::Malformed, "inputs/outputs must be string arrays");
  }
  const int n = static_cast<int>(inputs.size());
  if (n < 1 || n > kMaxInputs) {
    throw Error(ErrorCode::Malformed, "input count outside [1, 8]");
  }
  std::vector<std::string> rows(std::size_t{1} << n);
  std::vector<bool> filled(rows.size(), false);
  if (!doc.at("rows").is_array()) throw Error(ErrorCode::Malformed, "rows must be an array");
  for (const auto& entry : doc.at("rows")) {
    if (!entry.is_object() || !entry.contains("in") || !entry.contains("out")) {
      throw Error(ErrorCode::Malformed, "row needs in and out");
    }
    const std::string in = entry.at("in").get<std::string>();
    const std::string out = entry.at("out").get<std::string>();
    if (in.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::Malformed, "row input '" + in + "' length != " + std::to_string(n));
    }
    const std::uint32_t v = vector_index(in);
    if (filled[v]) throw Error(ErrorCode::DuplicateRow, "vector " + in + " appears twice");
    filled[v] = true;
    rows[v] = out;
  }
  for (std::size_t v = 0; v < rows.size(); ++v) {
    if (!filled[v]) {
      throw Error(ErrorCode::MissingRow,
                  "vector " + vector_string(static_cast<std::uint32_t>(v), n) + " missing");
    }
  }
  return make_truth_table(std::move(inputs), std::move(outputs), std::move(rows));
}

// CSV alternative: header names each column with an in:/out: prefix, data
// rows carry one 0/1 (or - for outputs) per column.
TruthTable parse_csv_table(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  std::vector<std::vector<std::string>> records;
  while (std::getline(stream, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(trim(field));
    records.push_back(std::move(fields));
  }
  if (records.size() < 2) throw Error(ErrorCode::Malformed, "csv needs a header and rows");
  std::vector<std::string> inputs, outputs;
  for (const auto& head : records[0]) {
    if (head.rfind("in:", 0) == 0) {
      if (!outputs.empty()) throw Error(ErrorCode::Malformed, "csv inputs must precede outputs");
      inputs.push_back(head.substr(3));
    } else if (head.rfind("out:", 0) == 0) {
      outputs.push_back(head.substr(4));
    } else {
      throw Error(ErrorCode::Malformed, "csv header '" + head + "' needs in: or out: prefix");
    }
  }
  const int n = static_cast<int>(inputs.size());
  const int m = static_cast<int>(outputs.size());
  if (n < 1 || n > kMaxInputs) throw Error(ErrorCode::Malformed, "input count outside [1, 8]");
  std::vector<std::string> rows(std::size_t{1} << n);
  std::vector<bool> filled(rows.size(), false);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != static_cast<std::size_t>(n + m)) {
      throw Error(ErrorCode::Malformed, "csv row " + std::to_string(r) + " has " +
                                            std::to_string(rec.size()) + " fields, needs " +
                                            std::to_string(n + m));
    }
    std::string in, out;
    for (int i = 0; i < n; ++i) {
      if (rec[i].size() != 1) throw Error(ErrorCode::BadSymbol, "csv cell '" + rec[i] + "'");
      in += rec[i];
    }
    for (int k = 0; k < m; ++k) {
      const auto& cell = rec[static_cast<std::size_t>(n + k)];
      if (cell.size() != 1) throw Error(ErrorCode::BadSymbol, "csv cell '" + cell + "'");
      out += cell;
    }
    const std::uint32_t v = vector_index(in);
    if (filled[v]) throw Error(ErrorCode::DuplicateRow, "vector " + in + " appears twice");
    filled[v] = true;
    rows[v] = out;
  }
  for (std::size_t v = 0; v < rows.size(); ++v) {
    if (!filled[v]) {
      throw Error(ErrorCode::MissingRow,
                  "vector " + vector_string(static_cast<std::uint32_t>(v), n) + " missing");
    }
  }
  return make_truth_table(std::move(inputs), std::move(outputs), std::move(rows));
}

}  // namespace

TruthTable parse_truth_table(const std::string& text) {
  const std::string body = trim(text);
  if (body.empty()) throw Error(ErrorCode::Malformed, "empty table file");
  if (body[0] == '{') return parse_json_table(body);
  return parse_csv_table(body);
}

bool implicant_matches(const Implicant& imp, std::uint32_t vector_idx, int n) {
  for (int i = 0; i < n; ++i) {
    if (!(imp.care & (1u << i))) continue;
    const std::uint32_t bit = (vector_idx >> (n - 1 - i)) & 1u;
    const std::uint32_t want = (imp.value >> i) & 1u;
    if (bit != want) return false;
  }
  return true;
}

int implicant_literal_count(const Implicant& imp, int n) {
  int count = 0;
  for (int i = 0; i < n; ++i) {
    if (imp.care & (1u << i)) ++count;
  }
  return count;
}

std::string implicant_pattern(const Implicant& imp, int n) {
  std::string s(static_cast<std::size_t>(n), '-');
  for (int i = 0; i < n; ++i) {
    if (imp.care & (1u << i)) s[static_cast<std::size_t>(i)] = (imp.value & (1u << i)) ? '1' : '0';
  }
  return s;
}

Implicant implicant_from_pattern(const std::string& pattern) {
  Implicant imp;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    switch (pattern[i]) {
      case '0': imp.care |= (1u << i); break;
      case '1':
        imp.care |= (1u << i);
        imp.value |= (1u << i);
        break;
      case '-': break;
      default:
        throw Error(ErrorCode::BadSymbol, "pattern character '" + std::string(1, pattern[i]) + "'");
    }
  }
  return imp;
}

std::string implicant_label(const Implicant& imp, const std::vector<std::string>& inputs) {
  std::string label;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!(imp.care & (1u << i))) continue;
    label += inputs[i];
    if (!(imp.value & (1u << i))) label += '\'';
  }
  if (label.empty()) label = "1";
  return label;
}

std::vector<std::uint32_t> implicant_vectors(const Implicant& imp, int n) {
  std::vector<std::uint32_t> out;
  const std::uint32_t total = 1u << n;
  for (std::uint32_t v = 0; v < total; ++v) {
    if (implicant_matches(imp, v, n)) out.push_back(v);
  }
  return out;
}

bool implicant_less(const Implicant& a, const Implicant& b, int n) {
  auto rank = [](char c) { return c == '0' ? 0 : (c == '1' ? 1 : 2); };
  const std::string pa = implicant_pattern(a, n);
  const std::string pb = implicant_pattern(b, n);
  for (int i = 0; i < n; ++i) {
    const int ra = rank(pa[static_cast<std::size_t>(i)]);
    const int rb = rank(pb[static_cast<std::size_t>(i)]);
    if (ra != rb) return ra < rb;
  }
  return false;
}

std::string eval_sop(const SopExpression& expr, const std::string& vector_bits) {
  if (vector_bits.size() != static_cast<std::size_t>(expr.n())) {
    throw Error(ErrorCode::LengthMismatch, "vector '" + vector_bits + "' length != " +
                                               std::to_string(expr.n()));
  }
  const std::uint32_t v = vector_index(vector_bits);
  std::string out(static_cast<std::size_t>(expr.m()), '0');
  for (int k = 0; k < expr.m(); ++k) {
    for (int t : expr.cover[static_cast<std::size_t>(k)]) {
      if (implicant_matches(expr.terms[static_cast<std::size_t>(t)], v, expr.n())) {
        out[static_cast<std::size_t>(k)] = '1';
        break;
      }
    }
  }
  return out;
}

MismatchReport check_equivalence(const SopExpression& expr, const TruthTable& table) {
  if (expr.n() != table.n() || expr.m() != table.m()) {
    throw Error(ErrorCode::DimensionMismatch,
                "expression is " + std::to_string(expr.n()) + "x" + std::to_string(expr.m()) +
                    ", table is " + std::to_string(table.n()) + "x" + std::to_string(table.m()));
  }
  MismatchReport report;
  const std::uint32_t total = 1u << table.n();
  for (std::uint32_t v = 0; v < total; ++v) {
    const std::string bits = vector_string(v, table.n());
    const std::string actual = eval_sop(expr, bits);
    const std::string& expected = table.rows[v];
    bool differs = false;
    for (int k = 0; k < table.m(); ++k) {
      const char want = expected[static_cast<std::size_t>(k)];
      if (want != '-' && want != actual[static_cast<std::size_t>(k)]) {
        differs = true;
        break;
      }
    }
    if (differs) report.mismatches.push_back({v, bits, expected, actual});
  }
  return report;
}

}  // namespace etpla
