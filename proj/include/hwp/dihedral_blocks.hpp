#pragma once

// Building blocks over Gamma = Dih(Z_m x Z_{2^{k+1} n}).
//
// Elements of 2G = Z_m x 2Z_{2^{k+1}n} are handled in two coordinate systems:
// "G coordinates" (x, y) with y even, as they appear in Gamma, and the
// isomorphic cyclic group H = Z_m x Z_{2^k n} with (x, y) <-> (x, y/2), which
// is where Delta-permutations are solved.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hwp/rsm.hpp"

namespace hwp {

class DihedralContext {
 public:
  DihedralContext(int m, int n, int k)
      : m_(m), n_(n), k_(k), gamma_(Group::dihedral(m, n, k)), h_(Group::cyclic({m, (1 << k) * n})) {}

  int m() const { return m_; }
  int n() const { return n_; }
  int k() const { return k_; }
  /// 2^k n, the size of the interval I and the second modulus of H.
  long long half() const { return (1LL << k_) * n_; }
  /// |2G| = 2^k mn.
  std::size_t sub_order() const { return h_.order(); }
  const Group& gamma() const { return gamma_; }
  const Group& h() const { return h_; }

  /// Element of H from G coordinates; y must be even.
  Elem hz(long long x, long long y) const {
    if (mod_floor(y, 2) != 0) throw InvalidArgument("2G element needs an even second coordinate");
    return h_.make({x, y / 2});
  }
  /// ((x, y), tau) in Gamma.
  Elem el(long long x, long long y, int tau = 0) const { return gamma_.make({x, y}, tau); }
  /// The element of 2Gamma corresponding to z in H.
  Elem lift(Elem z) const { return el(h_.coord(z, 0), 2LL * h_.coord(z, 1), 0); }

  Elem a(const Permutation& phi, Elem z) const {
    Elem w = phi(z);
    return el(h_.coord(w, 0), 2LL * h_.coord(w, 1) + 1, 0);
  }
  Elem b(Elem z) const { return el(-halve_odd(m_, h_.coord(z, 0)), -static_cast<long long>(h_.coord(z, 1)), 1); }
  Elem c(Elem z) const { return el(halve_odd(m_, h_.coord(z, 0)), h_.coord(z, 1) + 1LL, 1); }

  using Block = std::array<std::array<Elem, 3>, 3>;

  Block block_A(const std::array<Permutation, 3>& phi, Elem z) const {
    Elem bz = b(z), cz = c(z);
    return {{{a(phi[0], z), bz, cz}, {cz, a(phi[1], z), bz}, {bz, cz, a(phi[2], z)}}};
  }
  /// block_A with columns 2 and 3 swapped.
  Block block_A_prime(const std::array<Permutation, 3>& phi, Elem z) const {
    Block blk = block_A(phi, z);
    for (auto& row : blk) std::swap(row[1], row[2]);
    return blk;
  }

 private:
  int m_, n_, k_;
  Group gamma_;
  Group h_;
};

/// Rows of the stacked blocks A(phi, z) over z in H (row 3z + r is row r of
/// block z), optionally with A' at one z.
inline std::vector<std::vector<Elem>> coset_rows(const DihedralContext& ctx, const std::array<Permutation, 3>& phi,
                                                 std::optional<Elem> prime_at = std::nullopt) {
  std::vector<std::vector<Elem>> rows;
  rows.reserve(3 * ctx.sub_order());
  for (Elem z : ctx.h().elements()) {
    auto blk = prime_at && *prime_at == z ? ctx.block_A_prime(phi, z) : ctx.block_A(phi, z);
    for (auto& r : blk) rows.push_back({r[0], r[1], r[2]});
  }
  return rows;
}

namespace detail {

// Zero-sum list in H with p entries of order m built from (+-1, 0) and
// (1,0),(1,0),(-2,0). Empty when impossible.
inline std::optional<std::vector<Elem>> order_m_part(const DihedralContext& ctx, long long p) {
  const Group& h = ctx.h();
  std::vector<Elem> out;
  if (ctx.m() == 1) return std::vector<Elem>(static_cast<std::size_t>(p), h.zero());
  if (p == 1) return std::nullopt;
  long long pairs = p;
  if (p % 2 == 1) {
    out.insert(out.end(), {h.make({1, 0}), h.make({1, 0}), h.make({-2, 0})});
    pairs -= 3;
  }
  for (long long i = 0; i < pairs / 2; ++i) out.insert(out.end(), {h.make({1, 0}), h.make({-1, 0})});
  return out;
}

// Same for q entries of order 2^k n, using (0, +-2) in G coordinates, and the
// triple (0,2),(0,2),(0,-4) when k = 0.
inline std::optional<std::vector<Elem>> order_n_part(const DihedralContext& ctx, long long q) {
  const Group& h = ctx.h();
  std::vector<Elem> out;
  if (ctx.half() == 1) return std::vector<Elem>(static_cast<std::size_t>(q), h.zero());
  if (q % 2 == 1 && (ctx.k() != 0 || q == 1)) return std::nullopt;
  long long pairs = q;
  if (q % 2 == 1) {
    out.insert(out.end(), {ctx.hz(0, 2), ctx.hz(0, 2), ctx.hz(0, -4)});
    pairs -= 3;
  }
  for (long long i = 0; i < pairs / 2; ++i) out.insert(out.end(), {ctx.hz(0, 2), ctx.hz(0, -2)});
  return out;
}

inline std::optional<VList> zero_sum_list(const DihedralContext& ctx, long long p, long long q) {
  auto a = order_m_part(ctx, p);
  auto b = order_n_part(ctx, q);
  if (!a || !b) return std::nullopt;
  a->insert(a->end(), b->begin(), b->end());
  return VList(ctx.h(), std::move(*a));
}

}  // namespace detail

/// Plan for the Gamma \ 2Gamma part: the three difference lists and whether
/// the A' block is used at z = ((m-1)/2, 0).
struct CosetPlan {
  std::array<VList, 3> lists;
  bool prime = false;
};

inline std::optional<CosetPlan> plan_coset(const DihedralContext& ctx, long long alpha, long long beta) {
  const long long N = static_cast<long long>(ctx.sub_order());
  if (alpha < 0 || beta < 0 || alpha + beta != 3 * N) return std::nullopt;
  const Group& h = ctx.h();
  if (ctx.k() == 0) {
    // Each list has N = mn entries; split alpha into three realizable parts.
    for (long long p1 = 0; p1 <= N; ++p1)
      for (long long p2 = 0; p2 <= N; ++p2) {
        long long p3 = alpha - p1 - p2;
        if (p3 < 0 || p3 > N) continue;
        auto l1 = detail::zero_sum_list(ctx, p1, N - p1);
        auto l2 = detail::zero_sum_list(ctx, p2, N - p2);
        auto l3 = detail::zero_sum_list(ctx, p3, N - p3);
        if (l1 && l2 && l3) return CosetPlan{{*l1, *l2, *l3}, false};
      }
    return std::nullopt;
  }
  const long long half_n = N / 2;  // a_h + b_h per list
  auto build = [&](long long a, int min_each) -> std::optional<std::array<VList, 3>> {
    if (a < 3LL * min_each || a > 3 * half_n) return std::nullopt;
    std::array<long long, 3> ah{min_each, min_each, min_each};
    long long rest = a - 3LL * min_each;
    for (auto& x : ah) {
      long long add = std::min(rest, half_n - x);
      x += add;
      rest -= add;
    }
    std::array<VList, 3> out{VList(h), VList(h), VList(h)};
    for (int i = 0; i < 3; ++i) {
      auto bh = static_cast<std::size_t>(half_n - ah[i]);
      out[i].add(ctx.hz(1, 0), static_cast<std::size_t>(ah[i]));
      out[i].add(ctx.hz(-1, 0), static_cast<std::size_t>(ah[i]));
      out[i].add(ctx.hz(0, 2), bh);
      out[i].add(ctx.hz(0, -2), bh);
    }
    return out;
  };
  if (alpha % 2 == 0 && beta % 2 == 0) {
    if (auto l = build(alpha / 2, 0)) return CosetPlan{*l, false};
    return std::nullopt;
  }
  if (alpha % 2 == 1 && beta % 2 == 1 && alpha >= 3 && beta >= 3) {
    if (auto l = build((alpha + 3) / 2, 1)) return CosetPlan{*l, true};
  }
  return std::nullopt;
}

/// Gamma \ 2Gamma rows (3 columns) from a plan.
inline std::vector<std::vector<Elem>> build_coset_rows(const DihedralContext& ctx, const CosetPlan& plan,
                                                       const SearchBudget& budget,
                                                       const std::array<std::vector<DeltaPin>, 3>& pins = {}) {
  Rng rng(budget.seed);
  std::optional<Elem> z;
  std::array<std::vector<DeltaPin>, 3> all_pins = pins;
  if (plan.prime) {
    z = ctx.hz((ctx.m() - 1) / 2, 0);
    for (auto& p : all_pins) p.push_back({*z, ctx.hz(1, 0)});
  }
  std::array<std::optional<Permutation>, 3> phi;
  for (int i = 0; i < 3; ++i)
    phi[i] = hall_delta_permutation(ctx.h(), plan.lists[i], {rng.fork(), budget.nodes, budget.attempts}, all_pins[i]);
  return coset_rows(ctx, {*phi[0], *phi[1], *phi[2]}, z);
}

/// Options for the 2Gamma part used by the surgeries.
struct TwoGammaOptions {
  /// Point psi_1 must fix; z-bar is this point when zbar_is_required,
  /// otherwise the other fixed point.
  std::optional<Elem> fixed;
  bool zbar_is_required = true;
  /// Difference pinned at (0, 2^k n) for k >= 2.
  std::optional<Elem> zbar_difference;
  std::vector<DeltaPin> extra_pins;
};

struct TwoGammaParts {
  std::vector<std::vector<Elem>> rows;
  std::optional<Permutation> psi1, psi2;
  std::optional<Elem> zbar;
};

inline bool two_gamma_feasible(const DihedralContext& ctx, long long alpha, long long beta) {
  const long long N = static_cast<long long>(ctx.sub_order());
  if (alpha < 0 || beta < 0 || alpha + beta != N) return false;
  if (ctx.k() == 0) return detail::zero_sum_list(ctx, alpha, beta).has_value();
  if (ctx.k() == 1) return alpha % 2 == 1 && beta % 2 == 1 && alpha >= 3 && beta >= 3;
  return alpha % 2 == 0 && beta % 2 == 0 && beta >= 2;
}

inline bool coset_feasible(const DihedralContext& ctx, long long alpha, long long beta) {
  return plan_coset(ctx, alpha, beta).has_value();
}

/// Conjugate of psi by translation with t: z -> psi(z - t) + t.
inline Permutation conjugate_by_translation(const Permutation& psi, Elem t) {
  const Group& g = psi.group();
  std::vector<Elem> img(g.order());
  for (Elem z : g.elements()) img[z] = g.add(psi(g.sub(z, t)), t);
  return Permutation(g, std::move(img));
}

/// 2Gamma rows (z, -psi_1(z), psi_2(w)) with orders [^alpha m, ^beta 2^k n].
inline TwoGammaParts build_two_gamma_rows(const DihedralContext& ctx, long long alpha, long long beta,
                                          const SearchBudget& budget, const TwoGammaOptions& opt = {}) {
  if (!two_gamma_feasible(ctx, alpha, beta))
    throw InvalidArgument("2Gamma part: no construction for alpha=" + std::to_string(alpha) +
                          ", beta=" + std::to_string(beta) + " with k=" + std::to_string(ctx.k()));
  const Group& h = ctx.h();
  Rng rng(budget.seed);
  TwoGammaParts out;
  if (ctx.k() == 0) {
    std::vector<Elem> dbl(h.order());
    for (Elem z : h.elements()) dbl[z] = h.add(z, z);
    out.psi1 = Permutation(h, dbl);
    VList lambda2 = *detail::zero_sum_list(ctx, alpha, beta);
    out.psi2 = hall_delta_permutation(h, lambda2, {rng.fork(), budget.nodes, budget.attempts}, opt.extra_pins);
    for (Elem z : h.elements())
      out.rows.push_back({ctx.lift(z), ctx.lift(h.neg((*out.psi1)(z))), ctx.lift((*out.psi2)(z))});
    return out;
  }
  // k >= 1: psi_1 has differences [(0,0)] + (H minus (0, 2^k n) in G coordinates).
  auto sp = special_perm_1(ctx.m(), static_cast<int>(ctx.half() / 2));
  Permutation psi1(h, sp.perm.image());
  Elem other = h.zero();
  for (Elem f : psi1.fixed_points())
    if (f != h.zero()) other = f;
  Elem zbar = h.zero();
  if (opt.fixed) {
    psi1 = conjugate_by_translation(psi1, *opt.fixed);
    other = h.add(other, *opt.fixed);
    zbar = opt.zbar_is_required ? *opt.fixed : other;
  }
  const Elem top = ctx.hz(0, ctx.half());  // (0, 2^k n)
  VList lambda2(h);
  Elem pin_diff;
  if (ctx.k() == 1) {
    long long a = (alpha - 3) / 2, b = (beta - 3) / 2;
    lambda2.add(ctx.hz(2, 0));
    lambda2.add(ctx.hz(1, 0), static_cast<std::size_t>(a));
    lambda2.add(ctx.hz(-1, 0), static_cast<std::size_t>(a + 2));
    lambda2.add(ctx.hz(0, 4));
    lambda2.add(ctx.hz(0, 2), static_cast<std::size_t>(b));
    lambda2.add(ctx.hz(0, -2), static_cast<std::size_t>(b + 2));
    pin_diff = ctx.hz(0, 4);
  } else {
    long long a = alpha / 2, b = beta / 2;
    lambda2.add(ctx.hz(1, 0), static_cast<std::size_t>(a));
    lambda2.add(ctx.hz(-1, 0), static_cast<std::size_t>(a));
    lambda2.add(ctx.hz(0, 2), static_cast<std::size_t>(b));
    lambda2.add(ctx.hz(0, -2), static_cast<std::size_t>(b));
    pin_diff = opt.zbar_difference.value_or(ctx.hz(0, -2));
  }
  std::vector<DeltaPin> pins = opt.extra_pins;
  pins.push_back({top, pin_diff});
  out.psi2 = hall_delta_permutation(h, lambda2, {rng.fork(), budget.nodes, budget.attempts}, pins);
  out.psi1 = psi1;
  out.zbar = zbar;
  for (Elem z : h.elements()) {
    Elem w = z == zbar ? top : h.sub(psi1(z), z);
    out.rows.push_back({ctx.lift(z), ctx.lift(h.neg(psi1(z))), ctx.lift((*out.psi2)(w))});
  }
  return out;
}

inline std::vector<Elem> coset_support(const Group& gamma) { return two_gamma(gamma).coset; }
inline std::vector<Elem> two_gamma_support(const Group& gamma) { return two_gamma(gamma).subgroup; }

inline OrderList target_orders(const DihedralContext& ctx, long long alpha, long long beta) {
  return OrderList{{static_cast<std::size_t>(alpha), static_cast<std::size_t>(ctx.m())},
                   {static_cast<std::size_t>(beta), static_cast<std::size_t>(ctx.half())}};
}

/// RSM over Gamma with support Gamma \ 2Gamma and orders [^alpha m, ^beta 2^k n].
inline RowSumMatrix build_gamma_minus_2gamma(int k, int m, int n, long long alpha, long long beta, std::size_t g,
                                             const SearchBudget& budget = {}) {
  DihedralContext ctx(m, n, k);
  if (g < 3) throw InvalidArgument("build_gamma_minus_2gamma: need g >= 3");
  if (alpha + beta != 3 * static_cast<long long>(ctx.sub_order()))
    throw InvalidArgument("build_gamma_minus_2gamma: alpha + beta must equal 3 * 2^k mn");
  if (alpha == 1 || beta == 1) throw InvalidArgument("build_gamma_minus_2gamma: alpha and beta must differ from 1");
  auto plan = plan_coset(ctx, alpha, beta);
  if (!plan)
    throw InvalidArgument("build_gamma_minus_2gamma: alpha and beta must be both even or both odd and at least 3");
  if (g % 2 == 0) throw InvalidArgument("build_gamma_minus_2gamma: S is not a group, only odd g is reachable");
  RowSumMatrix out{ctx.gamma(), coset_support(ctx.gamma()), 3, build_coset_rows(ctx, *plan, budget)};
  out = extend_columns(std::move(out), g - 3);
  if (auto v = verify_rsm(out, target_orders(ctx, alpha, beta)); !v)
    throw InternalError("build_gamma_minus_2gamma: " + v.diagnostic);
  return out;
}

/// RSM over Gamma with support 2Gamma and orders [^alpha m, ^beta 2^k n].
inline RowSumMatrix build_2gamma(int k, int m, int n, long long alpha, long long beta, std::size_t g,
                                 const SearchBudget& budget = {}) {
  DihedralContext ctx(m, n, k);
  if (g < 3) throw InvalidArgument("build_2gamma: need g >= 3");
  if (alpha + beta != static_cast<long long>(ctx.sub_order()))
    throw InvalidArgument("build_2gamma: alpha + beta must equal 2^k mn");
  if (!two_gamma_feasible(ctx, alpha, beta)) {
    std::string need = k == 0   ? "alpha and beta different from 1"
                       : k == 1 ? "alpha and beta odd and at least 3"
                                : "alpha and beta even with beta >= 2";
    throw InvalidArgument("build_2gamma: k=" + std::to_string(k) + " needs " + need);
  }
  if (g % 2 == 0 && k != 0)
    throw InvalidArgument("build_2gamma: 2Gamma has a cyclic Sylow 2-subgroup, only odd g is reachable");
  auto parts = build_two_gamma_rows(ctx, alpha, beta, budget);
  RowSumMatrix out{ctx.gamma(), two_gamma_support(ctx.gamma()), 3, std::move(parts.rows)};
  out = extend_columns(std::move(out), g - 3);
  if (auto v = verify_rsm(out, target_orders(ctx, alpha, beta)); !v) throw InternalError("build_2gamma: " + v.diagnostic);
  return out;
}

}  // namespace hwp
