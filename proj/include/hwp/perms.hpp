#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hwp/delta_solver.hpp"
#include "hwp/permutation.hpp"
#include "hwp/vlist.hpp"

namespace hwp {

/// The list [phi(a) - a : a in the group]. Abelian groups only.
inline VList differences(const Permutation& phi) {
  const Group& g = phi.group();
  if (!g.is_abelian()) throw InvalidArgument("differences: group " + g.descriptor() + " is not abelian");
  std::vector<Elem> d(g.order());
  for (Elem a = 0; a < d.size(); ++a) d[a] = g.sub(phi(a), a);
  return VList(g, std::move(d));
}

inline bool verify_delta_permutation(const Permutation& phi, const VList& delta, std::string* why = nullptr) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (!(phi.group() == delta.group())) return fail("list and permutation live in different groups");
  if (delta.size() != phi.group().order())
    return fail("list has " + std::to_string(delta.size()) + " entries, group has " +
                std::to_string(phi.group().order()));
  VList got = differences(phi);
  if (got == delta) return true;
  return fail("differences " + got.to_string() + " differ from " + delta.to_string());
}

/// Pinned requirement phi(element) - element = difference.
struct DeltaPin {
  Elem element;
  Elem difference;
};

namespace detail {

inline long long crt_pair(long long r1, long long q1, long long r2, long long q2) {
  // q1 a power of two, q2 odd, coprime.
  for (long long x = r2; x < q1 * q2; x += q2)
    if (x % q1 == r1) return x;
  throw InternalError("crt_pair: no solution");
}

/// phi with phi(a) - a running over the whole group, for abelian groups with
/// trivial or non-cyclic Sylow 2-subgroup. The 2-part is searched and the odd
/// part uses a -> 2a.
inline std::optional<Permutation> abelian_orthomorphism(const Group& g, const SearchBudget& budget) {
  const auto& mods = g.moduli();
  std::vector<int> two(mods.size()), odd(mods.size());
  for (std::size_t i = 0; i < mods.size(); ++i) {
    int q = mods[i];
    two[i] = 1;
    while (q % 2 == 0) q /= 2, two[i] *= 2;
    odd[i] = q;
  }
  Group h2 = Group::cyclic(two);
  std::vector<Elem> two_map(h2.order());
  if (h2.order() == 1) {
    two_map[0] = 0;
  } else {
    LabelProblem p{h2, h2.elements(), {}, {}};
    for (Elem e : h2.elements()) p.labels.emplace_back(e, 1);
    auto labels = solve_labels(p, budget);
    if (!labels) return std::nullopt;
    for (Elem a = 0; a < h2.order(); ++a) two_map[a] = h2.add(a, (*labels)[a]);
  }
  std::vector<Elem> img(g.order());
  std::vector<long long> c(mods.size()), h(mods.size());
  for (Elem a = 0; a < g.order(); ++a) {
    for (std::size_t i = 0; i < mods.size(); ++i) h[i] = g.coord(a, i) % two[i];
    Elem t = two_map[h2.make(std::span<const long long>(h))];
    for (std::size_t i = 0; i < mods.size(); ++i) {
      long long x_odd = g.coord(a, i) % odd[i];
      c[i] = crt_pair(h2.coord(t, i), two[i], (2 * x_odd) % odd[i], odd[i]);
    }
    img[a] = g.make(std::span<const long long>(c));
  }
  return Permutation(g, std::move(img));
}

}  // namespace detail

/// A permutation phi of an abelian group with differences exactly delta.
/// delta must sum to zero. Pins force chosen differences at chosen elements.
inline Permutation hall_delta_permutation(const Group& g, const VList& delta, const SearchBudget& budget = {},
                                          const std::vector<DeltaPin>& pins = {}) {
  if (!g.is_abelian()) throw InvalidArgument("hall_delta_permutation: group " + g.descriptor() + " is not abelian");
  if (!(delta.group() == g)) throw InvalidArgument("hall_delta_permutation: list is over another group");
  if (delta.size() != g.order())
    throw InvalidArgument("hall_delta_permutation: list has " + std::to_string(delta.size()) +
                          " entries, expected " + std::to_string(g.order()));
  if (delta.sum() != g.zero())
    throw InvalidArgument("hall_delta_permutation: list sums to " + g.format(delta.sum()) + ", not zero");
  auto counts = delta.counts();
  auto satisfies_pins = [&](const Permutation& p) {
    for (auto pin : pins)
      if (g.sub(p(pin.element), pin.element) != pin.difference) return false;
    return true;
  };
  if (counts.size() == 1) {
    auto p = Permutation::translation(g, counts[0].first);
    if (satisfies_pins(p)) return p;
  }
  if (pins.empty() && counts.size() == g.order()) {
    if (auto p = detail::abelian_orthomorphism(g, budget); p && differences(*p) == delta) return *p;
  }
  LabelProblem problem{g, g.elements(), counts, {}};
  for (auto pin : pins) problem.pins.emplace_back(pin.element, pin.difference);
  auto labels = solve_labels(problem, budget);
  if (!labels) {
    if (pins.empty()) throw InternalError("hall_delta_permutation: search budget exhausted for " + delta.to_string());
    throw NotFound("hall_delta_permutation: no pinned solution found for " + delta.to_string());
  }
  std::vector<Elem> img(g.order());
  for (Elem a = 0; a < g.order(); ++a) img[a] = g.add(a, (*labels)[a]);
  return Permutation(g, std::move(img));
}

/// Conjugates phi by a translation so that phi'(x) - x = d, keeping the list
/// of differences.
inline Permutation normalize_delta_permutation(const Permutation& phi, Elem x, Elem d) {
  const Group& g = phi.group();
  if (!g.is_abelian()) throw InvalidArgument("normalize_delta_permutation: group is not abelian");
  std::optional<Elem> aj;
  for (Elem a = 0; a < g.order() && !aj; ++a)
    if (g.sub(phi(a), a) == d) aj = a;
  if (!aj) throw InvalidArgument("normalize_delta_permutation: " + g.format(d) + " is not a difference");
  Elem shift = g.sub(x, *aj);
  std::vector<Elem> img(g.order());
  for (Elem a = 0; a < g.order(); ++a) img[g.add(a, shift)] = g.add(phi(a), shift);
  return Permutation(g, std::move(img));
}

struct SpecialPermutation {
  Group group;
  Permutation perm;
  VList delta;
};

/// Involution of Z_m x Z_2n swapping the pairs of an explicit near-perfect
/// matching. Fixes (0,0) and (-(m-1)/2, floor((n+1)/2) + n(m-1)/2).
inline SpecialPermutation special_perm_1(int m, int n) {
  if (m < 1 || m % 2 == 0) throw InvalidArgument("special_perm_1: m must be odd and positive");
  if (n < 1) throw InvalidArgument("special_perm_1: n must be positive");
  Group g = Group::cyclic({m, 2 * n});
  const long long u = (n + 1) / 2;
  const long long half = (m - 1) / 2;
  std::vector<std::pair<long long, long long>> f;
  for (long long j = 1; j <= (n - 1) / 2; ++j) f.emplace_back(j, -j);
  for (long long j = (n + 3) / 2; j <= n; ++j) f.emplace_back(j, -j + 1);

  std::vector<std::pair<Elem, Elem>> edges;
  for (long long i = 0; i <= half; ++i) {
    for (auto [y1, y2] : f) {
      edges.emplace_back(g.make({i, y1 + i * n}), g.make({-i, y2 + i * n}));
      if (i != 0) edges.emplace_back(g.make({-i, y1 + i * n}), g.make({i, y2 + i * n}));
    }
  }
  for (long long i = 1; i <= half; ++i) {
    edges.emplace_back(g.make({i, i * n}), g.make({-i, -i * n}));
    edges.emplace_back(g.make({-i + 1, u + i * n + n}), g.make({i, u + i * n}));
  }
  std::vector<Elem> img = g.elements();
  std::vector<char> used(g.order(), 0);
  for (auto [p, q] : edges) {
    if (p == q || used[p] || used[q]) throw InternalError("special_perm_1: matching is not a matching");
    used[p] = used[q] = 1;
    img[p] = q;
    img[q] = p;
  }
  Permutation perm(g, std::move(img));
  std::vector<Elem> want;
  want.push_back(g.zero());
  Elem skip = g.make({0, n});
  for (Elem e : g.elements())
    if (e != skip) want.push_back(e);
  VList delta(g, std::move(want));
  if (!verify_delta_permutation(perm, delta)) throw InternalError("special_perm_1: differences mismatch");
  return {g, std::move(perm), std::move(delta)};
}

/// Permutation of Z_m x Z_2n (n >= 3 odd) with psi(0,0) = (0,n) and
/// psi(0,n) = (0,n+2); mostly translation by (1,0).
inline SpecialPermutation special_perm_2(int m, int n) {
  if (m < 1 || m % 2 == 0) throw InvalidArgument("special_perm_2: m must be odd and positive");
  if (n < 3 || n % 2 == 0) throw InvalidArgument("special_perm_2: n must be odd and at least 3");
  Group g = Group::cyclic({m, 2 * n});
  Elem z0 = g.make({0, 0}), zn = g.make({0, n}), zn2 = g.make({0, n + 2});
  Elem e1 = g.make({-1, 0}), e2 = g.make({-1, n}), e3 = g.make({-1, n + 2});
  std::vector<Elem> img(g.order());
  for (Elem z : g.elements()) {
    if (z == z0) img[z] = zn;
    else if (z == zn) img[z] = zn2;
    else if (z == zn2) img[z] = z0;
    else if (z == e1 || z == e2 || z == e3) img[z] = g.add(z, g.make({2, 0}));
    else img[z] = g.add(z, g.make({1, 0}));
  }
  Permutation perm(g, std::move(img));
  VList delta(g);
  delta.add(g.make({1, 0}), static_cast<std::size_t>(2 * m * n - 6));
  delta.add(g.make({2, 0}), 3);
  delta.add(g.make({0, 2}));
  delta.add(g.make({0, n - 2}));
  delta.add(g.make({0, n}));
  if (!verify_delta_permutation(perm, delta)) throw InternalError("special_perm_2: differences mismatch");
  return {g, std::move(perm), std::move(delta)};
}

}  // namespace hwp
