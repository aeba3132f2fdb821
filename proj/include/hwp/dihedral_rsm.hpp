#pragma once

// Row-sum matrices over the whole of Gamma = Dih(Z_m x Z_{2^{k+1} n}) with
// row-sum orders [^alpha m, ^beta 2^k n].
//
// The general case stacks a Gamma \ 2Gamma part over a 2Gamma part. The cases
// alpha = 1 or beta in {1, 3} rewrite a handful of rows of the stack (a
// "surgery"); the replacement rows are always a column-wise rearrangement of
// the rows they replace, which apply_surgery checks.

#include <functional>
#include <string>
#include <vector>

#include "hwp/dihedral_blocks.hpp"
#include "hwp/rsm_search.hpp"

namespace hwp {

struct RsmSpec {
  int k = 0;
  int m = 1;
  int n = 1;
  long long alpha = 0;
  long long beta = 0;
  std::size_t g = 3;
  std::uint64_t seed = 0;
};

struct DihedralRsm {
  RowSumMatrix matrix;
  /// Which construction produced the first three columns.
  std::string method;
};

/// Largest group order on which the backtracking fallback is attempted.
inline constexpr std::size_t kDihedralSearchLimit = 16;

namespace detail {

using Rows = std::vector<std::vector<Elem>>;

/// A construction does not apply to these parameters (a collapsed point, an
/// unsatisfiable pin, a failed final check).
class ConstructionGap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void apply_surgery(Rows& rows, const std::vector<std::size_t>& at, const Rows& replacement) {
  if (at.size() != replacement.size()) throw InternalError("surgery: row count mismatch");
  std::vector<std::size_t> sorted = at;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConstructionGap("surgery: replaced rows are not distinct");
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<Elem> before, after;
    for (std::size_t i = 0; i < at.size(); ++i) {
      before.push_back(rows.at(at[i])[c]);
      after.push_back(replacement[i][c]);
    }
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    if (before != after) throw ConstructionGap("surgery: column " + std::to_string(c) + " is not rearranged");
  }
  for (std::size_t i = 0; i < at.size(); ++i) rows[at[i]] = replacement[i];
}

inline Rows concat(Rows a, const Rows& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline std::size_t a_row(Elem z, int r) { return 3 * static_cast<std::size_t>(z) + static_cast<std::size_t>(r); }
inline std::size_t b_row(const DihedralContext& ctx, Elem z) { return 3 * ctx.sub_order() + z; }

inline void check_rows(const DihedralContext& ctx, const Rows& rows, long long alpha, long long beta) {
  RowSumMatrix m{ctx.gamma(), ctx.gamma().elements(), 3, rows};
  if (auto v = verify_rsm(m, target_orders(ctx, alpha, beta)); !v) throw ConstructionGap(v.diagnostic);
}

inline Permutation pinned(const DihedralContext& ctx, const VList& d, Rng& rng, const SearchBudget& budget,
                          std::vector<DeltaPin> pins = {}) {
  for (auto pin : pins)
    if (d.count(pin.difference) == 0) throw ConstructionGap("pinned difference " + ctx.h().format(pin.difference) + " is not in the list");
  try {
    return hall_delta_permutation(ctx.h(), d, {rng.fork(), budget.nodes, budget.attempts}, pins);
  } catch (const NotFound& e) {
    throw ConstructionGap(e.what());
  }
}

// ---- general stacking ------------------------------------------------------

inline bool split_ok(const DihedralContext& ctx, long long alpha, long long beta, long long a1) {
  const long long N = static_cast<long long>(ctx.sub_order());
  long long b1 = N - a1;
  return a1 >= 0 && b1 >= 0 && two_gamma_feasible(ctx, a1, b1) && coset_feasible(ctx, alpha - a1, beta - b1);
}

/// alpha_1 as chosen in the proofs; -1 when no formula applies.
inline long long textbook_alpha1(const DihedralContext& ctx, long long alpha) {
  const long long mn = static_cast<long long>(ctx.m()) * ctx.n();
  const long long N = static_cast<long long>(ctx.sub_order());
  if (ctx.k() >= 2) {
    if (alpha >= N + 1) return std::min(N - 2, 2 * (alpha / 2));
    if (alpha % 2 == 0) return alpha;
    if (alpha >= 3) return alpha - 3;
    return -1;
  }
  if (ctx.k() == 1) {
    if (alpha >= 3 && alpha <= 6 * mn + 3) return 3;
    if (alpha >= 6 * mn + 4 && alpha <= 8 * mn - 3) return 2 * mn - 3;
    return -1;
  }
  if ((alpha >= mn + 2 && alpha <= 4 * mn - 2) || alpha == 4 * mn) return mn;
  if (alpha == mn + 1) return alpha - 4;
  if (alpha == mn - 1) return alpha - 2;
  if ((alpha >= 2 && alpha <= mn - 2) || alpha == 0 || alpha == mn) return alpha;
  return -1;
}

inline Rows stacked(const DihedralContext& ctx, long long alpha, long long beta, const SearchBudget& budget,
                    std::string& method) {
  const long long N = static_cast<long long>(ctx.sub_order());
  long long a1 = textbook_alpha1(ctx, alpha);
  method = "stack";
  if (!split_ok(ctx, alpha, beta, a1)) {
    a1 = -1;
    for (long long c = 0; c <= N && a1 < 0; ++c)
      if (split_ok(ctx, alpha, beta, c)) a1 = c;
    if (a1 < 0) throw ConstructionGap("no admissible split of the orders between 2Gamma and its coset");
    method = "stack (searched split)";
  }
  Rng rng(budget.seed);
  SearchBudget sub{rng.fork(), budget.nodes, budget.attempts};
  auto plan = *plan_coset(ctx, alpha - a1, beta - (N - a1));
  Rows a = build_coset_rows(ctx, plan, sub);
  sub.seed = rng.fork();
  auto b = build_two_gamma_rows(ctx, a1, N - a1, sub);
  return concat(std::move(a), b.rows);
}

// ---- k >= 2 ----------------------------------------------------------------

inline Rows surgery_k2_alpha1(const DihedralContext& ctx, const SearchBudget& budget) {
  const Group& h = ctx.h();
  const auto N = ctx.sub_order();
  Rng rng(budget.seed);
  VList d(h);
  d.add(ctx.hz(0, 2), N / 2);
  d.add(ctx.hz(0, -2), N / 2);
  const Elem zp = ctx.hz(1, 2);
  const DeltaPin pin{zp, ctx.hz(0, -2)};  // phi_h(z') = (1,0)
  Permutation phi1 = pinned(ctx, d, rng, budget, {pin});
  Permutation phi2 = pinned(ctx, d, rng, budget);
  Permutation phi3 = pinned(ctx, d, rng, budget, {pin});
  Rows rows = coset_rows(ctx, {phi1, phi2, phi3});

  TwoGammaOptions opt;
  opt.fixed = ctx.hz(0, 2);
  opt.zbar_is_required = false;
  opt.extra_pins = {{h.zero(), ctx.hz(0, 2)}};
  // All differences are (0, +-2), so psi_2 pairs y with y + 2 starting from
  // (0,0); (0, 2^k n) must therefore move up as well.
  opt.zbar_difference = ctx.hz(0, 2);
  auto b = build_two_gamma_rows(ctx, 0, static_cast<long long>(N), {rng.fork(), budget.nodes, budget.attempts}, opt);
  rows = concat(std::move(rows), b.rows);

  apply_surgery(rows, {a_row(zp, 0), b_row(ctx, ctx.hz(0, 2)), a_row(zp, 2)},
                {{ctx.el(0, 2), ctx.c(zp), ctx.c(zp)},
                 {ctx.a(phi1, zp), ctx.el(0, -2), ctx.a(phi3, zp)},
                 {ctx.b(zp), ctx.b(zp), ctx.el(0, 2)}});
  return rows;
}

inline Rows surgery_k2_beta13(const DihedralContext& ctx, long long beta, const SearchBudget& budget) {
  const auto N = ctx.sub_order();
  Rng rng(budget.seed);
  VList d(ctx.h());
  d.add(ctx.hz(1, 0), N / 2);
  d.add(ctx.hz(-1, 0), N / 2);
  const Elem zp = ctx.hz(0, ctx.half() / 2);
  const DeltaPin pin{zp, ctx.hz(1, 0)};
  Permutation phi1 = pinned(ctx, d, rng, budget, {pin});
  Permutation phi2 = pinned(ctx, d, rng, budget, {pin});
  Permutation phi3 = pinned(ctx, d, rng, budget);
  Rows rows = coset_rows(ctx, {phi1, phi2, phi3});

  TwoGammaOptions opt;
  opt.fixed = ctx.hz(1, 0);
  opt.zbar_is_required = true;
  long long a1 = static_cast<long long>(N) - beta - 1;
  auto b = build_two_gamma_rows(ctx, a1, beta + 1, {rng.fork(), budget.nodes, budget.attempts}, opt);
  rows = concat(std::move(rows), b.rows);
  const Elem zbar = *b.zbar;

  apply_surgery(rows, {a_row(zp, 0), a_row(zp, 1), b_row(ctx, zbar)},
                {{ctx.el(1, 0), ctx.b(zp), ctx.b(zp)},
                 {ctx.c(zp), ctx.el(-1, 0), ctx.c(zp)},
                 {ctx.a(phi1, zp), ctx.a(phi2, zp), ctx.el(0, ctx.half() - 2)}});
  return rows;
}

// ---- k = 1 -----------------------------------------------------------------

/// 2Gamma rows (z, -psi1(z), psi2(w)) with w = (0, 2n) at z = 0 and
/// psi1(z) - z elsewhere.
inline Rows delta_b_rows(const DihedralContext& ctx, const Permutation& psi1, const Permutation& psi2) {
  const Group& h = ctx.h();
  Rows rows;
  for (Elem z : h.elements()) {
    Elem w = z == h.zero() ? ctx.hz(0, ctx.half()) : h.sub(psi1(z), z);
    rows.push_back({ctx.lift(z), ctx.lift(h.neg(psi1(z))), ctx.lift(psi2(w))});
  }
  return rows;
}

inline Elem other_fixed_point(const Permutation& p) {
  for (Elem f : p.fixed_points())
    if (f != 0) return f;
  throw InternalError("expected a second fixed point");
}

/// Shared shape of the beta = 1 (n >= 3) and alpha = 1 (n >= 3) surgeries.
struct SixRowSurgery {
  std::array<Permutation, 3> phi;
  Elem gbar;
  std::array<Elem, 2> last_col;  // third entries of the final two replacement rows
  bool swap_last;               // alpha = 1 pairs (gamma3, gamma4) first
};

inline Rows six_row_surgery(const DihedralContext& ctx, Rows rows, const SixRowSurgery& s, const std::array<Elem, 4>& gm) {
  const Group& h = ctx.h();
  const auto& [g1, g2, g3, g4] = gm;
  Rows rep = {{ctx.el(0, 0), ctx.b(g1), ctx.b(g2)},
              {ctx.c(g2), ctx.el(0, 0), ctx.c(g1)},
              {ctx.lift(s.gbar), ctx.b(g3), ctx.b(g4)},
              {ctx.c(g4), ctx.lift(h.neg(s.gbar)), ctx.c(g3)}};
  std::vector<Elem> first{ctx.a(s.phi[0], g1), ctx.a(s.phi[1], g2)};
  std::vector<Elem> second{ctx.a(s.phi[0], g3), ctx.a(s.phi[1], g4)};
  if (s.swap_last) std::swap(first, second);
  rep.push_back({first[0], first[1], s.last_col[0]});
  rep.push_back({second[0], second[1], s.last_col[1]});
  apply_surgery(rows,
                {a_row(g1, 0), a_row(g2, 1), a_row(g3, 0), a_row(g4, 1), b_row(ctx, h.zero()), b_row(ctx, s.gbar)},
                rep);
  return rows;
}

/// Tries the printed points first, then other choices of gamma3 and gamma4.
inline Rows six_row_with_fallback(const DihedralContext& ctx, const Rows& base, const SixRowSurgery& s,
                                  std::array<Elem, 4> gm, long long alpha, long long beta, std::string& method) {
  auto attempt = [&](const std::array<Elem, 4>& pts) -> std::optional<Rows> {
    try {
      Rows r = six_row_surgery(ctx, base, s, pts);
      check_rows(ctx, r, alpha, beta);
      return r;
    } catch (const ConstructionGap&) {
      return std::nullopt;
    }
  };
  if (auto r = attempt(gm)) return *r;
  for (Elem g3 : ctx.h().elements())
    for (Elem g4 : ctx.h().elements()) {
      if (auto r = attempt({gm[0], gm[1], g3, g4})) {
        method += " (alternative gamma3, gamma4)";
        return *r;
      }
    }
  throw ConstructionGap("no choice of gamma3, gamma4 completes the surgery");
}

inline Rows k1_beta1_large_n(const DihedralContext& ctx, long long alpha, std::string& method) {
  const int m = ctx.m(), n = ctx.n();
  const Group& h = ctx.h();
  Permutation t = Permutation::translation(h, ctx.hz(1, 0));
  Rows rows = coset_rows(ctx, {t, t, t});
  Permutation psi1(h, special_perm_1(m, n).perm.image());
  Permutation psi2(h, special_perm_2(m, n).perm.image());
  rows = concat(std::move(rows), delta_b_rows(ctx, psi1, psi2));

  const long long mu = m % 4 == 1 ? 1 : -1;
  const long long half_m = (m - 1) / 2;
  const long long quarter = halve_odd(m, static_cast<int>(mod_floor(half_m, m)));
  const long long y12 = (m == 1 && n == 3) ? 3LL * n - 1 : n + mu - 2;
  std::array<Elem, 4> gm{ctx.hz(half_m, y12), ctx.hz(-half_m, y12), ctx.hz(-quarter, (3 + mu) * n - mu - 1),
                         ctx.hz(quarter, (3 - mu) * n - mu - 3)};
  SixRowSurgery s{{t, t, t},
                  other_fixed_point(psi1),
                  {ctx.el(0, 2LL * n - 2 * mu + 2), ctx.el(0, 2LL * n + 2 * mu + 2)},
                  false};
  return six_row_with_fallback(ctx, rows, s, gm, alpha, 1, method);
}

inline Rows k1_alpha1_large_n(const DihedralContext& ctx, long long beta, std::string& method) {
  const int m = ctx.m(), n = ctx.n();
  const Group& h = ctx.h();
  Permutation t = Permutation::translation(h, ctx.hz(0, 2));
  Rows rows = coset_rows(ctx, {t, t, t});
  Permutation psi1(h, special_perm_1(m, n).perm.image());
  rows = concat(std::move(rows), delta_b_rows(ctx, psi1, t));

  const long long half_m = (m - 1) / 2;
  const bool one_mod_4 = (static_cast<long long>(m) * n) % 4 == 1;
  std::array<Elem, 4> gm{ctx.hz(1, 2LL * n - 2), ctx.hz(1, 2LL * n - 6),
                         ctx.hz(-half_m, one_mod_4 ? 3LL * n - 3 : 3LL * n - 5),
                         ctx.hz(half_m, one_mod_4 ? 3LL * n - 3 : 3LL * n - 1)};
  SixRowSurgery s{{t, t, t}, other_fixed_point(psi1), {ctx.el(0, 2LL * n + 2), ctx.el(0, 2)}, true};
  return six_row_with_fallback(ctx, rows, s, gm, 1, beta, method);
}

inline Rows k1_beta1_n1(const DihedralContext& ctx, const SearchBudget& budget) {
  const int m = ctx.m();
  if (m < 3) throw ConstructionGap("beta = 1 with n = 1 needs m >= 3");
  const Group& h = ctx.h();
  Rng rng(budget.seed);
  auto plan = plan_coset(ctx, 6LL * m, 0);
  Rows rows = build_coset_rows(ctx, *plan, {rng.fork(), budget.nodes, budget.attempts});

  Permutation psi1(h, special_perm_1(m, 1).perm.image());
  const Elem z0 = other_fixed_point(psi1);
  const Elem two0 = ctx.hz(2, 0), zero2 = ctx.hz(0, 2);
  std::optional<Elem> z1;
  for (Elem z : h.elements())
    if (h.sub(psi1(z), z) == two0) z1 = z;
  if (!z1) throw ConstructionGap("no point with difference (2,0)");
  VList l2(h);
  l2.add(ctx.hz(1, 0), static_cast<std::size_t>(2 * m - 6));
  l2.add(two0, 3);
  l2.add(zero2, 2);
  l2.add(h.zero());
  try {
    // psi2 fixes (2,0) and swaps (0,0) with (0,2).
    Permutation psi2 = pinned(ctx, l2, rng, budget, {{two0, h.zero()}, {h.zero(), zero2}, {zero2, zero2}});
    for (Elem z : h.elements()) {
      Elem w = z == z0 ? two0 : z == *z1 ? zero2 : h.sub(psi1(z), z);
      rows.push_back({ctx.lift(z), ctx.lift(h.neg(psi1(z))), ctx.lift(psi2(w))});
    }
  } catch (const ConstructionGap&) {
    // The pins are unsatisfiable for m = 3; search the 2Gamma part directly.
    auto b = search_rsm(ctx.gamma(), two_gamma_support(ctx.gamma()), target_orders(ctx, 2LL * m - 1, 1),
                        {rng.fork(), 20000, 7});
    if (!b) throw;
    rows = concat(std::move(rows), b->rows);
  }
  return rows;
}

inline Rows k1_alpha1_n1(const DihedralContext& ctx) {
  const Group& h = ctx.h();
  Permutation t = Permutation::translation(h, ctx.hz(0, 2));
  Rows rows = coset_rows(ctx, {t, t, t});
  Permutation psi1(h, special_perm_1(ctx.m(), 1).perm.image());
  rows = concat(std::move(rows), delta_b_rows(ctx, psi1, t));
  const Elem g1 = ctx.hz(1, 0), g2 = ctx.hz(1, 2);
  const Elem e = ctx.el(0, 0);
  apply_surgery(rows, {a_row(g1, 0), a_row(g2, 1), b_row(ctx, h.zero())},
                {{ctx.a(t, g1), ctx.a(t, g2), e}, {ctx.c(g2), ctx.b(g1), ctx.b(g2)}, {e, e, ctx.c(g1)}});
  return rows;
}

// ---- k = 0 -----------------------------------------------------------------

inline Rows k0_alpha1(const DihedralContext& ctx, const SearchBudget& budget) {
  const long long mn = static_cast<long long>(ctx.m()) * ctx.n();
  if (mn < 3) throw ConstructionGap("alpha = 1 with k = 0 needs mn >= 3");
  const Group& h = ctx.h();
  Rng rng(budget.seed);
  VList d(h);
  d.add(ctx.hz(0, 2), static_cast<std::size_t>((mn + 1) / 2));
  d.add(ctx.hz(0, -2), static_cast<std::size_t>((mn - 3) / 2));
  d.add(ctx.hz(0, -4));
  const Elem zp = ctx.hz(1, 2), low = ctx.hz(0, -2);
  Permutation phi1 = pinned(ctx, d, rng, budget);
  Permutation phi2 = pinned(ctx, d, rng, budget, {{zp, ctx.hz(0, -2)}});
  Permutation phi3 = pinned(ctx, d, rng, budget, {{zp, ctx.hz(0, -2)}});
  Permutation phi4 = pinned(ctx, d, rng, budget, {{low, ctx.hz(0, -2)}});
  Rows rows = coset_rows(ctx, {phi1, phi2, phi3});
  for (Elem z : h.elements()) rows.push_back({ctx.lift(z), ctx.lift(h.scale(z, -2)), ctx.lift(phi4(z))});
  apply_surgery(rows, {b_row(ctx, low), a_row(zp, 1), a_row(zp, 2)},
                {{ctx.el(0, -2), ctx.a(phi2, zp), ctx.a(phi3, zp)},
                 {ctx.b(zp), ctx.el(0, 4), ctx.b(zp)},
                 {ctx.c(zp), ctx.c(zp), ctx.el(0, -4)}});
  return rows;
}

/// Image of ((x', y'), t) in Dih(Z_n x Z_2m) under the isomorphism onto
/// Dih(Z_m x Z_2n) given by Z_n x Z_2m = Z_n x Z_2 x Z_m.
inline Elem swap_iso(const DihedralContext& from, const DihedralContext& to, Elem e) {
  const Group& g = from.gamma();
  long long xp = g.coord(e, 0), yp = g.coord(e, 1);
  const long long m = to.m(), n = to.n();
  long long y = -1;
  for (long long c = 0; c < 2 * n; ++c)
    if (c % 2 == yp % 2 && c % n == xp % n) {
      y = c;
      break;
    }
  return to.el(yp % m, y, g.tau(e));
}

}  // namespace detail

/// Throws Unsupported for the parameter cases with no construction.
inline void check_dihedral_supported(const RsmSpec& s) {
  if (s.k >= 2 && s.beta == 0)
    throw Unsupported("k>=2, beta=0", "no construction when k >= 2 and beta = 0");
  auto small = [](long long x) { return x == 0 || x == 2 || x == 4; };
  if (s.k == 1 && (small(s.alpha) || small(s.beta)))
    throw Unsupported("k=1, alpha or beta in {0,2,4}", "no construction when k = 1 and alpha or beta is 0, 2 or 4");
}

namespace detail {

inline Rows dihedral_core(const DihedralContext& ctx, long long alpha, long long beta, const SearchBudget& budget,
                          std::string& method) {
  const int k = ctx.k(), n = ctx.n();
  if (k == 0 && ctx.m() == n) {
    // Both orders coincide; only the total matters.
    return stacked(ctx, alpha + beta, 0, budget, method);
  }
  if (k >= 2 && alpha == 1) {
    method = "k>=2 alpha=1 surgery";
    return surgery_k2_alpha1(ctx, budget);
  }
  if (k >= 2 && (beta == 1 || beta == 3)) {
    method = "k>=2 beta in {1,3} surgery";
    return surgery_k2_beta13(ctx, beta, budget);
  }
  if (k == 1 && alpha == 1) {
    method = n >= 3 ? "k=1 alpha=1 surgery" : "k=1 alpha=1 n=1 surgery";
    return n >= 3 ? k1_alpha1_large_n(ctx, beta, method) : k1_alpha1_n1(ctx);
  }
  if (k == 1 && beta == 1) {
    method = n >= 3 ? "k=1 beta=1 surgery" : "k=1 beta=1 n=1";
    return n >= 3 ? k1_beta1_large_n(ctx, alpha, method) : k1_beta1_n1(ctx, budget);
  }
  if (k == 0 && alpha == 1) {
    method = "k=0 alpha=1 surgery";
    return k0_alpha1(ctx, budget);
  }
  if (k == 0 && beta == 1) {
    DihedralContext swapped(ctx.n(), ctx.m(), 0);
    std::string inner;
    Rows r = dihedral_core(swapped, 1, alpha, budget, inner);
    for (auto& row : r)
      for (auto& e : row) e = swap_iso(swapped, ctx, e);
    method = inner + " (m and n exchanged)";
    return r;
  }
  return stacked(ctx, alpha, beta, budget, method);
}

}  // namespace detail

/// Full-group RSM with orders [^alpha m, ^beta 2^k n], plus the method used.
inline DihedralRsm build_dihedral_rsm_traced(const RsmSpec& s, const SearchBudget& search = {}) {
  if (s.m < 1 || s.n < 1 || s.m % 2 == 0 || s.n % 2 == 0)
    throw InvalidArgument("build_dihedral_rsm: m and n must be odd and positive");
  if (s.k < 0 || s.k > 20) throw InvalidArgument("build_dihedral_rsm: k out of range");
  if (s.g < 3) throw InvalidArgument("build_dihedral_rsm: need g >= 3");
  DihedralContext ctx(s.m, s.n, s.k);
  const long long total = 4LL * static_cast<long long>(ctx.sub_order());
  if (s.alpha < 0 || s.beta < 0 || s.alpha + s.beta != total)
    throw InvalidArgument("build_dihedral_rsm: alpha + beta must equal 2^{k+2} mn = " + std::to_string(total));
  check_dihedral_supported(s);

  SearchBudget budget{s.seed, search.nodes, search.attempts};
  std::string method;
  std::optional<detail::Rows> rows;
  std::string gap;
  try {
    rows = detail::dihedral_core(ctx, s.alpha, s.beta, budget, method);
    detail::check_rows(ctx, *rows, s.alpha, s.beta);
  } catch (const detail::ConstructionGap& e) {
    rows.reset();
    gap = e.what();
  } catch (const NotFound& e) {
    rows.reset();
    gap = e.what();
  }
  RowSumMatrix out{ctx.gamma(), ctx.gamma().elements(), 3, {}};
  const OrderList want = target_orders(ctx, s.alpha, s.beta);
  if (rows) {
    out.rows = std::move(*rows);
  } else {
    if (ctx.gamma().order() > kDihedralSearchLimit)
      throw InternalError("build_dihedral_rsm: construction failed (" + gap + ")");
    auto found = search_rsm(ctx.gamma(), want, {s.seed, 20000, 7});
    if (!found) throw NotFound("build_dihedral_rsm: construction failed (" + gap + ") and search found nothing");
    out = std::move(*found);
    method = "backtracking search";
  }
  out = extend_columns(std::move(out), s.g - 3);
  if (auto v = verify_rsm(out, want); !v) throw InternalError("build_dihedral_rsm: " + v.diagnostic);
  return {std::move(out), method};
}

inline RowSumMatrix build_dihedral_rsm(const RsmSpec& s, const SearchBudget& search = {}) {
  return build_dihedral_rsm_traced(s, search).matrix;
}

}  // namespace hwp
