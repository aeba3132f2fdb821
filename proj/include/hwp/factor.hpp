#pragma once

#include <map>
#include <string>
#include <vector>

#include "hwp/graph.hpp"
#include "hwp/rsm.hpp"

namespace hwp {

using Cycle = std::vector<Vertex>;

struct TwoFactor {
  std::vector<Cycle> cycles;
  /// Common cycle length, 0 when the factor is empty.
  std::size_t cycle_length() const { return cycles.empty() ? 0 : cycles.front().size(); }
};

struct TwoFactorization {
  std::vector<TwoFactor> factors;
};

/// Multiset of (cycle length, number of factors).
using FactorProfile = std::map<std::size_t, std::size_t>;

inline FactorProfile profile_of(const TwoFactorization& f) {
  FactorProfile p;
  for (const auto& x : f.factors) ++p[x.cycle_length()];
  return p;
}

inline std::string profile_to_string(const FactorProfile& p) {
  std::string s = "{";
  for (auto [len, count] : p) s += (s.size() > 1 ? ", " : "") + std::to_string(count) + " x C_" + std::to_string(len);
  return s + "}";
}

/// Checks that a factor is a spanning union of disjoint cycles of the graph,
/// each of length expected_len.
inline Verdict verify_two_factor(const Graph& graph, const TwoFactor& f, std::size_t expected_len) {
  std::vector<char> seen(graph.order(), 0);
  std::size_t covered = 0;
  for (std::size_t c = 0; c < f.cycles.size(); ++c) {
    const Cycle& cyc = f.cycles[c];
    if (cyc.size() != expected_len)
      return Verdict::fail("cycle " + std::to_string(c) + " has length " + std::to_string(cyc.size()) + ", expected " +
                           std::to_string(expected_len));
    if (cyc.size() < 3) return Verdict::fail("cycle " + std::to_string(c) + " is shorter than 3");
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      Vertex a = cyc[i], b = cyc[(i + 1) % cyc.size()];
      if (a >= graph.order()) return Verdict::fail("vertex " + std::to_string(a) + " is not in the graph");
      if (seen[a]) return Verdict::fail("vertex " + graph.vertex_name(a) + " appears twice");
      seen[a] = 1;
      ++covered;
      if (!graph.has_edge(a, b))
        return Verdict::fail("edge " + graph.vertex_name(a) + " - " + graph.vertex_name(b) + " is not in the graph");
    }
  }
  if (covered != graph.order())
    return Verdict::fail("factor is not spanning: covers " + std::to_string(covered) + " of " +
                         std::to_string(graph.order()) + " vertices");
  return Verdict::pass();
}

/// Checks every factor, the profile, and that the factors partition the edges.
inline Verdict verify_factorization(const Graph& graph, const TwoFactorization& f, const FactorProfile& expected) {
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    auto v = verify_two_factor(graph, f.factors[i], f.factors[i].cycle_length());
    if (!v) return Verdict::fail("factor " + std::to_string(i) + ": " + v.diagnostic);
  }
  FactorProfile got = profile_of(f);
  if (got != expected)
    return Verdict::fail("factor profile " + profile_to_string(got) + " differs from expected " +
                         profile_to_string(expected));
  EdgeSet used(graph.order());
  std::size_t repeats = 0;
  for (const auto& x : f.factors)
    for (const auto& cyc : x.cycles)
      for (std::size_t i = 0; i < cyc.size(); ++i)
        if (!used.insert(cyc[i], cyc[(i + 1) % cyc.size()])) ++repeats;
  if (repeats) return Verdict::fail(std::to_string(repeats) + " edges are used more than once");
  if (used.size() != graph.size())
    return Verdict::fail(std::to_string(graph.size() - used.size()) + " edges of the graph are not covered");
  return Verdict::pass();
}

/// Expected profile g * omega(Sigma) of a row-sum matrix.
inline FactorProfile rsm_profile(const RowSumMatrix& m) {
  FactorProfile p;
  for (const auto& row : m.rows) ++p[m.g * m.group.element_order(row_sum(m.group, row))];
  return p;
}

/// Graph C_g[Gamma, S] of a row-sum matrix.
inline Graph rsm_graph(const RowSumMatrix& m) { return Graph::cayley(m.g, m.group, m.support); }

/// One 2-factor per row. Row entry s[g-1-i] labels the edges between columns
/// i and i+1; walking columns downwards, (i+1, y) -> (i, -s + y), a walk from
/// (0, x) returns to (0, -sigma + x) with sigma the left-to-right row sum, so
/// every cycle has length g * ord(sigma).
inline TwoFactorization rsm_to_factorization(const RowSumMatrix& m, const Graph& graph) {
  const Group& grp = m.group;
  const std::size_t g = m.g, q = grp.order();
  auto vid = [&](std::size_t i, Elem x) { return static_cast<Vertex>(i * q + x); };
  TwoFactorization out;
  out.factors.reserve(m.rows.size());
  for (const auto& row : m.rows) {
    if (row.size() != g) throw InvalidArgument("rsm_to_factorization: ragged row");
    std::vector<Elem> neg(g);
    for (std::size_t i = 0; i < g; ++i) neg[i] = grp.neg(row[g - 1 - i]);  // layer i
    const std::size_t len = g * grp.element_order(row_sum(grp, row));
    TwoFactor f;
    std::vector<char> seen(q, 0);
    // Each cycle meets column 0, so walks from column 0 cover every vertex.
    for (Elem x0 = 0; x0 < q; ++x0) {
      if (seen[x0]) continue;
      Cycle cyc;
      std::size_t i = 0;
      Elem y = x0;
      do {
        if (i == 0) seen[y] = 1;
        cyc.push_back(vid(i, y));
        std::size_t prev = (i + g - 1) % g;
        y = grp.add(neg[prev], y);
        i = prev;
      } while (!(i == 0 && y == x0));
      if (cyc.size() != len) throw InternalError("rsm_to_factorization: cycle length differs from g * ord(sigma)");
      f.cycles.push_back(std::move(cyc));
    }
    out.factors.push_back(std::move(f));
  }
  if (auto v = verify_factorization(graph, out, rsm_profile(m)); !v) throw InternalError("rsm_to_factorization: " + v.diagnostic);
  return out;
}

inline TwoFactorization rsm_to_factorization(const RowSumMatrix& m) { return rsm_to_factorization(m, rsm_graph(m)); }

}  // namespace hwp
