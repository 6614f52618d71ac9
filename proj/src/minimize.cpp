#include "etpla/minimize.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace etpla {

namespace {

VectorSet implicant_cover_set(const Implicant& imp, int n) {
  VectorSet set;
  const std::uint32_t total = 1u << n;
  for (std::uint32_t v = 0; v < total; ++v) {
    if (implicant_matches(imp, v, n)) set.set(v);
  }
  return set;
}

bool subset_of(const VectorSet& a, const VectorSet& b) { return (a & ~b).none(); }

struct ImplicantKey {
  std::uint16_t care;
  std::uint16_t value;
  bool operator<(const ImplicantKey& o) const {
    return care != o.care ? care < o.care : value < o.value;
  }
};

}  // namespace

std::vector<Implicant> qm_primes(const VectorSet& care, int n) {
  const std::uint32_t total = 1u << n;
  const std::uint16_t full = static_cast<std::uint16_t>((1u << n) - 1);

  std::set<ImplicantKey> current;
  for (std::uint32_t v = 0; v < total; ++v) {
    if (!care.test(v)) continue;
    std::uint16_t value = 0;
    for (int i = 0; i < n; ++i) {
      if ((v >> (n - 1 - i)) & 1u) value |= (1u << i);
    }
    current.insert({full, value});
  }

  std::vector<Implicant> primes;
  while (!current.empty()) {
    std::set<ImplicantKey> next;
    std::set<ImplicantKey> merged;
    std::vector<ImplicantKey> items(current.begin(), current.end());
    for (std::size_t a = 0; a < items.size(); ++a) {
      for (std::size_t b = a + 1; b < items.size(); ++b) {
        if (items[a].care != items[b].care) continue;
        const std::uint16_t diff = items[a].value ^ items[b].value;
        if (diff == 0 || (diff & (diff - 1)) != 0) continue;  // exactly one bit apart
        ImplicantKey combined{static_cast<std::uint16_t>(items[a].care & ~diff),
                              static_cast<std::uint16_t>(items[a].value & ~diff)};
        next.insert(combined);
        merged.insert(items[a]);
        merged.insert(items[b]);
      }
    }
    for (const auto& item : items) {
      if (!merged.count(item)) primes.push_back({item.care, item.value});
    }
    current = std::move(next);
  }

  std::sort(primes.begin(), primes.end(),
            [n](const Implicant& a, const Implicant& b) { return implicant_less(a, b, n); });
  return primes;
}

std::vector<Implicant> qm_prime_implicants(const TruthTable& table, int output_index) {
  if (output_index < 0 || output_index >= table.m()) {
    throw Error(ErrorCode::OutOfRange, "output index " + std::to_string(output_index));
  }
  VectorSet care;
  for (std::size_t v = 0; v < table.row_count(); ++v) {
    const char c = table.rows[v][static_cast<std::size_t>(output_index)];
    if (c == '1' || c == '-') care.set(v);
  }
  return qm_primes(care, table.n());
}

namespace {

struct Candidate {
  Implicant imp;
  VectorSet covers;
  std::uint32_t usable = 0;  // bitmask of outputs this term may feed
  int literals = 0;
};

// Cost of a selection: (distinct terms, total literals, canonical term list).
struct SelectionCost {
  int count = 0;
  int literals = 0;
  std::vector<int> sorted_terms;

  bool better_than(const SelectionCost& o) const {
    if (count != o.count) return count < o.count;
    if (literals != o.literals) return literals < o.literals;
    return sorted_terms < o.sorted_terms;
  }
};

SelectionCost selection_cost(const std::set<int>& chosen, const std::vector<Candidate>& pool) {
  SelectionCost cost;
  cost.count = static_cast<int>(chosen.size());
  for (int t : chosen) {
    cost.literals += pool[static_cast<std::size_t>(t)].literals;
    cost.sorted_terms.push_back(t);
  }
  return cost;
}

// Petrick expansion with absorption over the remaining constraints. Each
// constraint is a sorted list of candidate indices; products are sorted
// index sets. The reduced cores at desk scale stay small.
std::vector<std::vector<int>> petrick_products(const std::vector<std::vector<int>>& constraints) {
  std::vector<std::vector<int>> products{{}};
  for (const auto& clause : constraints) {
    std::vector<std::vector<int>> expanded;
    for (const auto& product : products) {
      for (int candidate : clause) {
        std::vector<int> next = product;
        auto pos = std::lower_bound(next.begin(), next.end(), candidate);
        if (pos == next.end() || *pos != candidate) next.insert(pos, candidate);
        expanded.push_back(std::move(next));
      }
    }
    std::sort(expanded.begin(), expanded.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                return a.size() != b.size() ? a.size() < b.size() : a < b;
              });
    expanded.erase(std::unique(expanded.begin(), expanded.end()), expanded.end());
    // absorption: drop any product that contains another
    std::vector<std::vector<int>> kept;
    for (const auto& product : expanded) {
      bool absorbed = false;
      for (const auto& small : kept) {
        if (std::includes(product.begin(), product.end(), small.begin(), small.end())) {
          absorbed = true;
          break;
        }
      }
      if (!absorbed) kept.push_back(product);
    }
    products = std::move(kept);
    if (products.size() > 200000) {
      throw Error(ErrorCode::Internal, "cover expansion exceeded safety cap");
    }
  }
  return products;
}

// Exact minimum subcover of `constraints` (sets of candidate indices) after
// essential extraction and row dominance; returns the chosen candidates.
std::set<int> exact_cover(std::vector<std::vector<int>> constraints,
                          const std::vector<Candidate>& pool) {
  std::set<int> chosen;

  bool changed = true;
  while (changed && !constraints.empty()) {
    changed = false;
    // essential candidates
    for (const auto& clause : constraints) {
      if (clause.size() == 1) {
        chosen.insert(clause[0]);
        changed = true;
      }
    }
    if (changed) {
      std::vector<std::vector<int>> remaining;
      for (const auto& clause : constraints) {
        bool satisfied = false;
        for (int c : clause) {
          if (chosen.count(c)) {
            satisfied = true;
            break;
          }
        }
        if (!satisfied) remaining.push_back(clause);
      }
      constraints = std::move(remaining);
      continue;
    }
    // row dominance: a clause that is a superset of another is implied by it
    std::vector<bool> drop(constraints.size(), false);
    for (std::size_t a = 0; a < constraints.size(); ++a) {
      for (std::size_t b = 0; b < constraints.size(); ++b) {
        if (a == b || drop[a] || drop[b]) continue;
        if (constraints[a].size() >= constraints[b].size() &&
            std::includes(constraints[a].begin(), constraints[a].end(), constraints[b].begin(),
                          constraints[b].end()) &&
            constraints[a] != constraints[b]) {
          drop[a] = true;
          changed = true;
        }
      }
    }
    if (changed) {
      std::vector<std::vector<int>> remaining;
      for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (!drop[i]) remaining.push_back(constraints[i]);
      }
      constraints = std::move(remaining);
    }
  }

  if (constraints.empty()) return chosen;

  const auto products = petrick_products(constraints);
  bool have_best = false;
  std::set<int> best;
  SelectionCost best_cost;
  for (const auto& product : products) {
    std::set<int> full = chosen;
    full.insert(product.begin(), product.end());
    const SelectionCost cost = selection_cost(full, pool);
    if (!have_best || cost.better_than(best_cost)) {
      have_best = true;
      best = std::move(full);
      best_cost = std::move(cost);
    }
  }
  return best;
}

}  // namespace

SopExpression minimize(const TruthTable& table) {
  const int n = table.n();
  const int m = table.m();

  std::vector<VectorSet> on(static_cast<std::size_t>(m)), dc(static_cast<std::size_t>(m));
  for (std::size_t v = 0; v < table.row_count(); ++v) {
    for (int k = 0; k < m; ++k) {
      const char c = table.rows[v][static_cast<std::size_t>(k)];
      if (c == '1') on[static_cast<std::size_t>(k)].set(v);
      if (c == '-') dc[static_cast<std::size_t>(k)].set(v);
    }
  }

  // Multi-output candidates: primes of every non-empty intersection of the
  // per-output care functions. Terms prime for an output subset but not for
  // any single output are exactly the shareable gates.
  std::map<ImplicantKey, Candidate> pool_map;
  const std::uint32_t subsets = 1u << m;
  for (std::uint32_t s = 1; s < subsets; ++s) {
    VectorSet care;
    care.set();
    for (int k = 0; k < m; ++k) {
      if (s & (1u << k)) care &= on[static_cast<std::size_t>(k)] | dc[static_cast<std::size_t>(k)];
    }
    // mask away vectors beyond 2^n
    VectorSet domain;
    const std::uint32_t total = 1u << n;
    for (std::uint32_t v = 0; v < total; ++v) domain.set(v);
    care &= domain;
    if (care.none()) continue;
    for (const Implicant& imp : qm_primes(care, n)) {
      pool_map.insert({{imp.care, imp.value}, Candidate{imp, {}, 0, 0}});
    }
  }

  std::vector<Candidate> pool;
  pool.reserve(pool_map.size());
  for (auto& [key, cand] : pool_map) pool.push_back(cand);
  std::sort(pool.begin(), pool.end(), [n](const Candidate& a, const Candidate& b) {
    return implicant_less(a.imp, b.imp, n);
  });
  for (auto& cand : pool) {
    cand.covers = implicant_cover_set(cand.imp, n);
    cand.literals = implicant_literal_count(cand.imp, n);
    for (int k = 0; k < m; ++k) {
      if (subset_of(cand.covers, on[static_cast<std::size_t>(k)] | dc[static_cast<std::size_t>(k)])) {
        cand.usable |= (1u << k);
      }
    }
  }

  std::vector<std::vector<int>> constraints;
  for (int k = 0; k < m; ++k) {
    const std::uint32_t total = 1u << n;
    for (std::uint32_t v = 0; v < total; ++v) {
      if (!on[static_cast<std::size_t>(k)].test(v)) continue;
      std::vector<int> clause;
      for (std::size_t t = 0; t < pool.size(); ++t) {
        if ((pool[t].usable & (1u << k)) && pool[t].covers.test(v)) {
          clause.push_back(static_cast<int>(t));
        }
      }
      if (clause.empty()) {
        throw Error(ErrorCode::Internal, "uncoverable minterm in minimize");
      }
      constraints.push_back(std::move(clause));
    }
  }

  const std::set<int> selected = exact_cover(std::move(constraints), pool);

  // Per-output subcover: each output keeps the smallest slice of the selected
  // terms that still covers its on-set (same tie-break chain).
  std::vector<std::vector<int>> cover(static_cast<std::size_t>(m));
  std::set<int> used;
  for (int k = 0; k < m; ++k) {
    std::vector<int> usable_here;
    for (int t : selected) {
      if (pool[static_cast<std::size_t>(t)].usable & (1u << k)) usable_here.push_back(t);
    }
    std::vector<std::vector<int>> clauses;
    const std::uint32_t total = 1u << n;
    for (std::uint32_t v = 0; v < total; ++v) {
      if (!on[static_cast<std::size_t>(k)].test(v)) continue;
      std::vector<int> clause;
      for (int t : usable_here) {
        if (pool[static_cast<std::size_t>(t)].covers.test(v)) clause.push_back(t);
      }
      clauses.push_back(std::move(clause));
    }
    const std::set<int> sub = exact_cover(std::move(clauses), pool);
    cover[static_cast<std::size_t>(k)].assign(sub.begin(), sub.end());
    used.insert(sub.begin(), sub.end());
  }
  if (used.size() != selected.size()) {
    throw Error(ErrorCode::Internal, "selected term unused by every output");
  }

  // Reindex into the final canonical term list.
  SopExpression expr;
  expr.inputs = table.inputs;
  expr.outputs = table.outputs;
  std::map<int, int> remap;
  for (int t : selected) {
    remap[t] = static_cast<int>(expr.terms.size());
    expr.terms.push_back(pool[static_cast<std::size_t>(t)].imp);
  }
  expr.cover.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    for (int t : cover[static_cast<std::size_t>(k)]) {
      expr.cover[static_cast<std::size_t>(k)].push_back(remap[t]);
    }
    std::sort(expr.cover[static_cast<std::size_t>(k)].begin(),
              expr.cover[static_cast<std::size_t>(k)].end());
  }
  return expr;
}

SopStats sop_stats(const SopExpression& expr) {
  SopStats stats;
  stats.input_lines = 2 * expr.n();
  for (const auto& term : expr.terms) {
    const int lits = implicant_literal_count(term, expr.n());
    stats.literal_count += lits;
    if (lits >= 1) ++stats.and_gates;
  }
  for (const auto& terms : expr.cover) {
    if (!terms.empty()) ++stats.or_gates;
  }
  return stats;
}

}  // namespace etpla
