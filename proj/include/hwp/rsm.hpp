#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "hwp/complete_mapping.hpp"
#include "hwp/perms.hpp"

namespace hwp {

/// |S| x g matrix over a group whose columns are permutations of S.
struct RowSumMatrix {
  Group group;
  std::vector<Elem> support;  // sorted
  std::size_t g = 0;
  std::vector<std::vector<Elem>> rows;
};

struct Verdict {
  bool ok = true;
  std::string diagnostic;
  explicit operator bool() const { return ok; }
  static Verdict pass() { return {}; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }
};

/// Left-to-right sum of a row.
inline Elem row_sum(const Group& grp, const std::vector<Elem>& row) {
  Elem s = grp.zero();
  for (Elem e : row) s = grp.add(s, e);
  return s;
}

inline VList row_sums(const RowSumMatrix& m) {
  if (m.g < 2) throw InvalidArgument("row-sum matrix needs at least 2 columns");
  std::vector<Elem> sums;
  sums.reserve(m.rows.size());
  for (const auto& r : m.rows) sums.push_back(row_sum(m.group, r));
  return VList(m.group, std::move(sums));
}

inline OrderList row_sum_orders(const RowSumMatrix& m) { return orders_of(row_sums(m)); }

/// Checks shape, that every column is a permutation of `support`, and the
/// multiset of row-sum orders.
inline Verdict verify_rsm(const RowSumMatrix& m, std::vector<Elem> support, const OrderList& expected) {
  std::sort(support.begin(), support.end());
  if (m.g < 2) return Verdict::fail("matrix has " + std::to_string(m.g) + " columns, need at least 2");
  if (m.rows.size() != support.size())
    return Verdict::fail("matrix has " + std::to_string(m.rows.size()) + " rows, support has " +
                         std::to_string(support.size()) + " elements");
  for (std::size_t r = 0; r < m.rows.size(); ++r)
    if (m.rows[r].size() != m.g)
      return Verdict::fail("row " + std::to_string(r) + " has " + std::to_string(m.rows[r].size()) + " entries");
  for (std::size_t c = 0; c < m.g; ++c) {
    std::vector<Elem> col;
    col.reserve(m.rows.size());
    for (const auto& row : m.rows) {
      if (row[c] >= m.group.order()) return Verdict::fail("column " + std::to_string(c) + " has an invalid element");
      col.push_back(row[c]);
    }
    std::sort(col.begin(), col.end());
    if (col != support) {
      auto dup = std::adjacent_find(col.begin(), col.end());
      std::string what = dup != col.end() ? "repeats " + m.group.format(*dup) : "has an element outside S";
      return Verdict::fail("column " + std::to_string(c) + " is not a permutation of S: it " + what);
    }
  }
  OrderList got = row_sum_orders(m);
  if (!(got == expected))
    return Verdict::fail("row-sum orders " + got.to_string() + " differ from expected " + expected.to_string());
  return Verdict::pass();
}

inline Verdict verify_rsm(const RowSumMatrix& m, const OrderList& expected) { return verify_rsm(m, m.support, expected); }

inline bool is_symmetric_set(const Group& grp, const std::vector<Elem>& s) {
  std::vector<char> in(grp.order(), 0);
  for (Elem e : s) in[e] = 1;
  for (Elem e : s)
    if (!in[grp.neg(e)]) return false;
  return true;
}

inline bool is_odd_subgroup(const Group& grp, const std::vector<Elem>& s) {
  if (s.size() % 2 == 0) return false;
  std::vector<char> in(grp.order(), 0);
  for (Elem e : s) in[e] = 1;
  for (Elem a : s)
    for (Elem b : s)
      if (!in[grp.add(a, b)]) return false;
  return true;
}

/// Adds i columns without changing any row sum: pairs (c, -c) when S = -S,
/// and one complete-mapping split of the last column when i is odd and S is
/// the whole group or a subgroup of odd order.
inline RowSumMatrix extend_columns(RowSumMatrix m, std::size_t i) {
  if (i == 0) return m;
  const Group& grp = m.group;
  const bool full = m.support.size() == grp.order();
  const bool symmetric = is_symmetric_set(grp, m.support);
  if (i % 2 == 1 && !full && is_odd_subgroup(grp, m.support)) {
    // On a subgroup of odd order the identity is a complete mapping: y = 2x.
    std::vector<Elem> half(grp.order());
    for (Elem x : m.support) half[grp.add(x, x)] = x;
    for (auto& row : m.rows) {
      Elem x = half[row.back()];
      row.back() = x;
      row.push_back(x);
    }
    ++m.g;
    --i;
  } else if (i % 2 == 1) {
    if (!full)
      throw InvalidArgument("extend_columns: odd extension needs S to be the whole group (S has " +
                            std::to_string(m.support.size()) + " of " + std::to_string(grp.order()) + " elements)");
    auto cm = cached_complete_mapping(grp);
    if (cm.status == MappingStatus::Nonexistent)
      throw InvalidArgument("extend_columns: " + grp.descriptor() +
                            " has no complete mapping (its Sylow 2-subgroup is cyclic)");
    if (cm.status != MappingStatus::Found)
      throw NotFound("extend_columns: no complete mapping found for " + grp.descriptor());
    const Permutation& pi = *cm.mapping;
    std::vector<Elem> rho_inv(grp.order());
    for (Elem x : grp.elements()) rho_inv[grp.add(x, pi(x))] = x;
    for (auto& row : m.rows) {
      Elem y = row.back();
      Elem x = rho_inv[y];
      row.back() = x;
      row.push_back(pi(x));
    }
    ++m.g;
    --i;
  } else if (!symmetric) {
    throw InvalidArgument("extend_columns: even extension needs S = -S");
  }
  for (std::size_t b = 0; b < i / 2; ++b) {
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
      Elem c = m.support[(r + b) % m.support.size()];
      m.rows[r].push_back(c);
      m.rows[r].push_back(grp.neg(c));
    }
    m.g += 2;
  }
  return m;
}

/// RSM over Z_2 x Z_{2^ell} x Z_{mn} with row-sum orders [^{2 gamma} m, ^{2 delta} 2^k n].
inline RowSumMatrix build_abelian_rsm(int ell, int m, int n, int k, long long gamma, long long delta, std::size_t g,
                                      const SearchBudget& budget = {}) {
  if (ell < 1) throw InvalidArgument("build_abelian_rsm: ell must be at least 1");
  if (m < 1 || n < 1 || m % 2 == 0 || n % 2 == 0) throw InvalidArgument("build_abelian_rsm: m and n must be odd");
  if (k < 0 || k > ell) throw InvalidArgument("build_abelian_rsm: need 0 <= k <= ell");
  if (g < 3) throw InvalidArgument("build_abelian_rsm: need g >= 3");
  const long long p = 1LL << ell;
  if (gamma < 0 || delta < 0 || gamma + delta != p * m * n)
    throw InvalidArgument("build_abelian_rsm: gamma + delta must equal 2^ell mn = " + std::to_string(p * m * n));
  Group grp = Group::cyclic({2, static_cast<int>(p), m * n});
  VList d(grp);
  const long long step = 1LL << (ell - k);
  d.add(grp.make({0, 0, n}), static_cast<std::size_t>(gamma));
  d.add(grp.make({0, 0, -n}), static_cast<std::size_t>(gamma));
  d.add(grp.make({0, step, m}), static_cast<std::size_t>(delta));
  d.add(grp.make({0, -step, -m}), static_cast<std::size_t>(delta));
  Permutation phi = hall_delta_permutation(grp, d, budget);
  Permutation psi = hall_delta_permutation(grp, VList(grp, grp.elements()), budget);
  RowSumMatrix out{grp, grp.elements(), 3, {}};
  for (Elem x : grp.elements()) out.rows.push_back({grp.neg(psi(x)), x, phi(grp.sub(psi(x), x))});
  out = extend_columns(std::move(out), g - 3);
  OrderList want{{static_cast<std::size_t>(2 * gamma), static_cast<std::size_t>(m)},
                 {static_cast<std::size_t>(2 * delta), static_cast<std::size_t>((1LL << k) * n)}};
  if (auto v = verify_rsm(out, want); !v) throw InternalError("build_abelian_rsm: " + v.diagnostic);
  return out;
}

}  // namespace hwp
