#include <gtest/gtest.h>

#include <set>

#include "hwp/dihedral_rsm.hpp"

using namespace hwp;

namespace {

std::array<Permutation, 3> random_phis(const Group& h, Rng& rng) {
  std::array<Permutation, 3> out{Permutation(h), Permutation(h), Permutation(h)};
  for (auto& p : out) {
    auto img = h.elements();
    rng.shuffle(img);
    p = Permutation(h, img);
  }
  return out;
}

Elem sum3(const Group& g, const std::array<Elem, 3>& r) { return g.add(g.add(r[0], r[1]), r[2]); }

OrderList orders(long long alpha, std::size_t m, long long beta, std::size_t q) {
  return OrderList{{static_cast<std::size_t>(alpha), m}, {static_cast<std::size_t>(beta), q}};
}

}  // namespace

TEST(DihedralBlocks, RowSumsOfA) {
  Rng rng(11);
  for (int k : {0, 1, 2})
    for (int m : {1, 3})
      for (int n : {1, 3}) {
        DihedralContext ctx(m, n, k);
        const Group& gam = ctx.gamma();
        const Group& h = ctx.h();
        auto phi = random_phis(h, rng);
        const Elem two = ctx.el(0, 2);
        for (Elem z : h.elements()) {
          auto a = ctx.block_A(phi, z);
          auto ap = ctx.block_A_prime(phi, z);
          const Elem lz = ctx.lift(z);
          for (int r = 0; r < 3; ++r) {
            const Elem lp = ctx.lift(phi[r](z));
            Elem want = r == 1 ? gam.sub(lz, lp) : gam.sub(lp, lz);
            EXPECT_EQ(sum3(gam, a[r]), want) << "k=" << k << " m=" << m << " n=" << n << " z=" << h.format(z);
            Elem plus = gam.add(gam.add(lp, lz), two);
            EXPECT_EQ(sum3(gam, ap[r]), r == 2 ? gam.neg(plus) : plus);
          }
        }
      }
}

TEST(DihedralBlocks, DirectArithmeticExample) {
  // k=1, m=3, n=1: Gamma = Dih(Z_3 x Z_4), z = (1,2), identity phis.
  DihedralContext ctx(3, 1, 1);
  const Group& g = ctx.gamma();
  const Group& h = ctx.h();
  std::array<Permutation, 3> id{Permutation(h), Permutation(h), Permutation(h)};
  Elem z = ctx.hz(1, 2);
  // a(z) = z + (0,1) = (1,3); b(z) = ((-1/2), -rho(2)) with tau = 1 where 1/2 = 2 in Z_3.
  Elem a = g.make({1, 3}), b = g.make({-2, -1}, 1), c = g.make({2, 2}, 1);
  EXPECT_EQ(ctx.a(id[0], z), a);
  EXPECT_EQ(ctx.b(z), b);
  EXPECT_EQ(ctx.c(z), c);
  // Rows of A: (a, b, c), (c, a, b), (b, c, a). With phi = id the sums vanish.
  EXPECT_EQ(g.add(g.add(a, b), c), g.zero());
  EXPECT_EQ(g.add(g.add(c, a), b), g.zero());
  EXPECT_EQ(g.add(g.add(b, c), a), g.zero());
  // A' swaps columns 2 and 3: (a, c, b) sums to 2z + (0,2) = (2, 6) = (2, 2).
  EXPECT_EQ(g.add(g.add(a, c), b), g.make({2, 2}));
  EXPECT_THROW(ctx.hz(1, 1), InvalidArgument);
}

TEST(DihedralBlocks, CosetBuilder) {
  auto a = build_gamma_minus_2gamma(2, 1, 1, 0, 12, 3);
  EXPECT_EQ(row_sum_orders(a), orders(0, 1, 12, 4));
  auto b = build_gamma_minus_2gamma(1, 3, 1, 9, 9, 3);
  EXPECT_EQ(row_sum_orders(b), orders(9, 3, 9, 2));
  EXPECT_EQ(b.support, two_gamma(b.group).coset);
  EXPECT_THROW(build_gamma_minus_2gamma(0, 3, 3, 1, 26, 3), InvalidArgument);
  EXPECT_THROW(build_gamma_minus_2gamma(0, 3, 3, 2, 26, 3), InvalidArgument);
}

TEST(DihedralBlocks, TwoGammaBuilder) {
  auto a = build_2gamma(0, 3, 5, 0, 15, 3);
  EXPECT_EQ(row_sum_orders(a), orders(0, 3, 15, 5));
  EXPECT_EQ(a.support, two_gamma(a.group).subgroup);
  auto b = build_2gamma(2, 1, 1, 2, 2, 3);
  EXPECT_EQ(row_sum_orders(b), orders(2, 1, 2, 4));
  EXPECT_THROW(build_2gamma(1, 3, 1, 2, 4, 3), InvalidArgument);
  EXPECT_THROW(build_2gamma(2, 1, 1, 4, 0, 3), InvalidArgument);
}

TEST(DihedralBlocks, SupportsPartitionGamma) {
  for (int k : {0, 1, 2}) {
    Group g = Group::dihedral(3, 1, k);
    auto split = two_gamma(g);
    std::set<Elem> all(split.subgroup.begin(), split.subgroup.end());
    for (Elem e : split.coset) EXPECT_TRUE(all.insert(e).second);
    EXPECT_EQ(all.size(), g.order());
    EXPECT_EQ(split.subgroup.size() * 4, g.order());
  }
}

TEST(DihedralRsm, Examples) {
  auto a = build_dihedral_rsm({1, 1, 1, 7, 1, 3});
  EXPECT_EQ(row_sum_orders(a), orders(7, 1, 1, 2));
  auto b = build_dihedral_rsm({0, 3, 5, 1, 59, 3});
  EXPECT_EQ(row_sum_orders(b), orders(1, 3, 59, 5));
  EXPECT_EQ(b.rows.size(), 60u);
}

TEST(DihedralRsm, ExceptionsAreUnsupported) {
  try {
    build_dihedral_rsm({2, 1, 1, 16, 0, 3});
    FAIL() << "expected Unsupported";
  } catch (const Unsupported& e) {
    EXPECT_EQ(e.which_case(), "k>=2, beta=0");
  }
  for (long long a : {0, 2, 4, 6, 8}) EXPECT_THROW(build_dihedral_rsm({1, 1, 1, a, 8 - a, 3}), Unsupported);
  EXPECT_THROW(build_dihedral_rsm({0, 3, 1, 5, 6, 3}), InvalidArgument);
  EXPECT_THROW(build_dihedral_rsm({0, 2, 1, 4, 4, 3}), InvalidArgument);
}

TEST(DihedralRsm, Surgeries) {
  // One instance per special construction.
  std::vector<RsmSpec> specs = {
      {2, 1, 1, 1, 15, 3},  {2, 3, 1, 1, 47, 3},  {2, 1, 1, 15, 1, 3}, {2, 1, 3, 45, 3, 3},
      {1, 1, 3, 23, 1, 3},  {1, 3, 3, 71, 1, 3},  {1, 1, 3, 1, 23, 3}, {1, 3, 1, 1, 23, 3},
      {1, 3, 1, 23, 1, 3},  {0, 3, 1, 1, 11, 3},  {0, 3, 3, 35, 1, 3}, {0, 1, 3, 11, 1, 4},
  };
  for (const auto& s : specs) {
    SCOPED_TRACE(testing::Message() << "k=" << s.k << " m=" << s.m << " n=" << s.n << " alpha=" << s.alpha);
    auto r = build_dihedral_rsm_traced(s);
    EXPECT_TRUE(verify_rsm(r.matrix, orders(s.alpha, s.m, s.beta, (1u << s.k) * s.n)));
    EXPECT_FALSE(r.method.empty());
  }
}

TEST(DihedralRsm, SurgeryRejectsNonRearrangement) {
  detail::Rows rows = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  detail::Rows good = {{1, 1, 2}, {0, 2, 0}};
  detail::apply_surgery(rows, {0, 1}, good);
  EXPECT_EQ(rows[0], (std::vector<Elem>{1, 1, 2}));
  detail::Rows bad = {{2, 1, 2}, {0, 2, 0}};
  EXPECT_THROW(detail::apply_surgery(rows, {0, 1}, bad), detail::ConstructionGap);
  EXPECT_THROW(detail::apply_surgery(rows, {0, 0}, good), detail::ConstructionGap);
}

TEST(DihedralRsm, SeedsDoNotChangeValidity) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    RsmSpec s{1, 3, 1, 13, 11, 5, seed};
    auto m = build_dihedral_rsm(s);
    EXPECT_EQ(m.g, 5u);
    EXPECT_TRUE(verify_rsm(m, orders(13, 3, 11, 2)));
  }
}

TEST(DihedralRsm, Deterministic) {
  RsmSpec s{1, 1, 3, 9, 15, 3, 42};
  EXPECT_EQ(build_dihedral_rsm(s).rows, build_dihedral_rsm(s).rows);
}
