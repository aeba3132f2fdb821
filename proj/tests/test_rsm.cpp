#include <gtest/gtest.h>

#include <algorithm>

#include "hwp/json_io.hpp"
#include "hwp/rsm_search.hpp"

using namespace hwp;

namespace {

// Exhaustive oracle for complete mappings on tiny groups.
bool complete_mapping_exists(const Group& g) {
  std::vector<Elem> img = g.elements();
  do {
    std::vector<char> seen(g.order(), 0);
    bool ok = true;
    for (Elem x = 0; x < g.order() && ok; ++x) {
      Elem y = g.add(x, img[x]);
      ok = !seen[y];
      seen[y] = 1;
    }
    if (ok) return true;
  } while (std::next_permutation(img.begin(), img.end()));
  return false;
}

VList sums_of(const RowSumMatrix& m) { return row_sums(m); }

}  // namespace

TEST(Rsm, RowSumsTrivial) {
  Group z3 = Group::cyclic({3});
  RowSumMatrix m{z3, z3.elements(), 2, {{0, 0}, {1, 2}, {2, 1}}};
  EXPECT_EQ(row_sums(m), VList(z3, {0, 0, 0}));
  EXPECT_EQ(row_sum_orders(m), (OrderList{{3, 1}}));
  RowSumMatrix one{z3, z3.elements(), 1, {{0}, {1}, {2}}};
  EXPECT_THROW(row_sums(one), InvalidArgument);
}

TEST(Rsm, RowSumIsLeftToRight) {
  Group d = Group::dihedral(3, 1, 0);
  Elem a = d.make({1, 0}, 1), b = d.make({0, 1}, 0), c = d.make({2, 1}, 1);
  EXPECT_EQ(row_sum(d, {a, b, c}), d.add(d.add(a, b), c));
  EXPECT_NE(row_sum(d, {a, b, c}), row_sum(d, {c, b, a}));
}

TEST(Rsm, VerifyDiagnostics) {
  Group z3 = Group::cyclic({3});
  RowSumMatrix m{z3, z3.elements(), 2, {{0, 0}, {1, 2}, {2, 1}}};
  EXPECT_TRUE(verify_rsm(m, OrderList{{3, 1}}));
  auto bad_orders = verify_rsm(m, OrderList{{3, 3}});
  EXPECT_FALSE(bad_orders);
  EXPECT_NE(bad_orders.diagnostic.find("order"), std::string::npos);
  RowSumMatrix dup = m;
  dup.rows[1][0] = 0;
  auto v = verify_rsm(dup, OrderList{{3, 1}});
  EXPECT_FALSE(v);
  EXPECT_NE(v.diagnostic.find("column 0"), std::string::npos);
  RowSumMatrix ragged = m;
  ragged.rows[2].pop_back();
  EXPECT_FALSE(verify_rsm(ragged, OrderList{{3, 1}}));
}

TEST(Rsm, ColumnSwapBreaksOrders) {
  // Swapping two entries inside a column keeps it a permutation but moves sums.
  auto m = build_abelian_rsm(1, 3, 1, 1, 0, 6, 3);
  OrderList want{{12, 2}};
  ASSERT_TRUE(verify_rsm(m, want));
  int broken = 0;
  for (std::size_t r = 1; r < m.rows.size(); ++r) {
    RowSumMatrix mut = m;
    std::swap(mut.rows[0][1], mut.rows[r][1]);
    if (!verify_rsm(mut, want)) ++broken;
  }
  EXPECT_GT(broken, 0);
}

TEST(Rsm, AbelianExamples) {
  auto a = build_abelian_rsm(1, 1, 1, 0, 2, 0, 3);
  EXPECT_EQ(a.rows.size(), 4u);
  EXPECT_EQ(row_sum_orders(a), (OrderList{{4, 1}}));
  auto b = build_abelian_rsm(1, 3, 1, 1, 0, 6, 3);
  EXPECT_EQ(row_sum_orders(b), (OrderList{{12, 2}}));
  auto c = build_abelian_rsm(3, 1, 3, 2, 5, 19, 4);
  EXPECT_EQ(c.g, 4u);
  EXPECT_EQ(row_sum_orders(c), (OrderList{{10, 1}, {38, 12}}));
  EXPECT_THROW(build_abelian_rsm(1, 1, 1, 0, 1, 0, 3), InvalidArgument);
  EXPECT_THROW(build_abelian_rsm(1, 1, 1, 2, 2, 0, 3), InvalidArgument);
}

TEST(Rsm, AbelianSweep) {
  for (int ell : {1, 2, 3})
    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {3, 1}, {1, 3}, {5, 3}})
      for (int k = 0; k <= ell; ++k) {
        const long long total = (1LL << ell) * m * n;
        for (long long gamma : {0LL, 1LL, total / 2, total - 1, total})
          for (std::size_t g : {3u, 4u}) {
            SCOPED_TRACE(testing::Message() << "ell=" << ell << " m=" << m << " n=" << n << " k=" << k
                                            << " gamma=" << gamma << " g=" << g);
            auto r = build_abelian_rsm(ell, m, n, k, gamma, total - gamma, g, {static_cast<std::uint64_t>(gamma)});
            OrderList want{{static_cast<std::size_t>(2 * gamma), static_cast<std::size_t>(m)},
                           {static_cast<std::size_t>(2 * (total - gamma)), static_cast<std::size_t>((1 << k) * n)}};
            EXPECT_TRUE(verify_rsm(r, want));
          }
      }
}

TEST(Rsm, ExtendColumnsPreservesSums) {
  Group z5 = Group::cyclic({5});
  RowSumMatrix m{z5, z5.elements(), 3, {}};
  for (Elem x : z5.elements()) m.rows.push_back({x, x, z5.add(x, 1)});
  const VList before = sums_of(m);
  for (std::size_t i : {1u, 2u, 3u}) {
    auto e = extend_columns(m, i);
    EXPECT_EQ(e.g, 3 + i);
    EXPECT_EQ(sums_of(e), before);
    EXPECT_TRUE(verify_rsm(e, row_sum_orders(m)));
  }
}

TEST(Rsm, ExtendSymmetricSubset) {
  Group z7 = Group::cyclic({7});
  RowSumMatrix m{z7, {1, 6}, 2, {{1, 1}, {6, 6}}};
  auto e = extend_columns(m, 2);
  EXPECT_EQ(e.g, 4u);
  EXPECT_EQ(sums_of(e), sums_of(m));
  EXPECT_TRUE(verify_rsm(e, row_sum_orders(m)));
  EXPECT_THROW(extend_columns(m, 1), InvalidArgument);
  RowSumMatrix lopsided{z7, {1, 2}, 2, {{1, 2}, {2, 1}}};
  EXPECT_THROW(extend_columns(lopsided, 2), InvalidArgument);
}

TEST(Rsm, ExtendNeedsCompleteMapping) {
  Group z4 = Group::cyclic({4});
  RowSumMatrix m{z4, z4.elements(), 2, {{0, 0}, {1, 3}, {2, 2}, {3, 1}}};
  EXPECT_THROW(extend_columns(m, 1), InvalidArgument);
  EXPECT_NO_THROW(extend_columns(m, 2));
}

TEST(Rsm, ExtendOddSubgroup) {
  // 2Gamma of a k=0 dihedral group is Z_m x Z_n, of odd order.
  Group d = Group::dihedral(3, 1, 0);
  auto sub = two_gamma(d).subgroup;
  ASSERT_TRUE(is_odd_subgroup(d, sub));
  RowSumMatrix m{d, sub, 2, {}};
  for (Elem x : sub) m.rows.push_back({x, x});
  auto e = extend_columns(m, 1);
  EXPECT_EQ(sums_of(e), sums_of(m));
  EXPECT_TRUE(verify_rsm(e, row_sum_orders(m)));
}

TEST(CompleteMapping, OddCyclicIdentity) {
  for (int q = 1; q <= 15; q += 2) {
    Group z = Group::cyclic({q});
    auto r = find_complete_mapping(z);
    ASSERT_EQ(r.status, MappingStatus::Found);
    EXPECT_EQ(*r.mapping, Permutation(z));
    EXPECT_TRUE(is_complete_mapping(*r.mapping));
  }
}

TEST(CompleteMapping, CyclicSylowTwoHasNone) {
  for (int q : {1, 2, 3, 4}) {
    Group z = Group::cyclic({2 * q});
    EXPECT_EQ(find_complete_mapping(z).status, MappingStatus::Nonexistent);
    EXPECT_FALSE(complete_mapping_exists(z)) << "Z_" << 2 * q;
  }
}

TEST(CompleteMapping, NonCyclicSylowTwo) {
  for (const Group& g : {Group::cyclic({2, 2}), Group::cyclic({2, 4}), Group::dihedral(1, 1, 0), Group::dihedral(3, 1, 0)}) {
    auto r = find_complete_mapping(g);
    ASSERT_EQ(r.status, MappingStatus::Found) << g.descriptor();
    EXPECT_TRUE(is_complete_mapping(*r.mapping));
    if (g.order() <= 8) {
      EXPECT_TRUE(complete_mapping_exists(g));
    }
  }
}

TEST(RsmSearch, SmallDihedral) {
  Group d4 = Group::dihedral(1, 1, 1);
  auto r = search_rsm(d4, OrderList{{7, 1}, {1, 2}}, {3});
  ASSERT_TRUE(r.has_value());
  EXPECT_TRUE(verify_rsm(*r, OrderList{{7, 1}, {1, 2}}));
  EXPECT_THROW(search_rsm(d4, OrderList{{3, 1}}), InvalidArgument);
}

TEST(RsmSearch, ImpossibleTargetExhausts) {
  // Over Z_2 the entries of three columns add up to 1, so the sums cannot both be 0.
  Group z2 = Group::cyclic({2});
  EXPECT_FALSE(search_rsm(z2, OrderList{{2, 1}}, {0, 100, 2}).has_value());
}

TEST(RsmJson, RoundTrip) {
  auto m = build_abelian_rsm(1, 3, 1, 1, 2, 4, 4);
  auto back = rsm_from_json(Json::parse(rsm_to_json(m).dump()));
  EXPECT_EQ(back.group, m.group);
  EXPECT_EQ(back.support, m.support);
  EXPECT_EQ(back.rows, m.rows);
  EXPECT_EQ(rsm_to_json(m)["support"], "full");
  Json bad = rsm_to_json(m);
  bad["schema"] = 7;
  EXPECT_THROW(rsm_from_json(bad), InvalidArgument);
  bad = rsm_to_json(m);
  bad["rows"][0][0] = "(1,x)";
  EXPECT_THROW(rsm_from_json(bad), InvalidArgument);
}
