#include "test_util.hpp"

#include "unil/unil.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace unil;
using namespace unil::testing;

namespace {

bool same_description(const GroupDescription& a, const GroupDescription& b) {
  if (a.extension.has_value() != b.extension.has_value()) return false;
  if (a.extension)
    return a.extension->sub.same_structure(b.extension->sub) && a.extension->quotient.same_structure(b.extension->quotient);
  return a.group.same_structure(b.group);
}

// Rank over F2 of bit vectors, by elimination on the highest set bit.
int gf2_rank(std::vector<std::uint64_t> rows) {
  int rank = 0;
  for (int bit = 63; bit >= 0; --bit) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](std::uint64_t r) { return (r >> bit) & 1u; });
    if (it == rows.end()) continue;
    std::uint64_t p = *it;
    rows.erase(it);
    for (auto& r : rows)
      if ((r >> bit) & 1u) r ^= p;
    ++rank;
  }
  return rank;
}

}  // namespace

TEST(UNilTable, IntegerCoefficients) {
  const int D = 7;
  EXPECT_TRUE(unil_group(Z(), 0, D).description.is_trivial());
  EXPECT_TRUE(unil_group(Z(), 1, D).description.is_trivial());

  auto u2 = unil_group(Z(), 2, D).description;
  ASSERT_FALSE(u2.extension.has_value());
  ASSERT_EQ(u2.group.families.size(), 1u);
  EXPECT_EQ(u2.group.families[0].exponents, exponent_range(1, D, 2));
  EXPECT_EQ(u2.group.families[0].order, 2);
  EXPECT_TRUE(u2.group.cyclic.empty());

  auto u3 = unil_group(Z(), 3, D).description;
  ASSERT_TRUE(u3.extension.has_value());
  EXPECT_FALSE(u3.extension->resolved);
  EXPECT_TRUE(u3.extension->sub.same_structure(u2.group));
  EXPECT_EQ(u3.extension->quotient.name, "F2[x] x F2[x]");
  bool four_torsion = false;
  for (const auto& a : u3.extension->annotations) four_torsion |= a == "4 UNil_3(Z) = 0";
  EXPECT_TRUE(four_torsion);
}

TEST(UNilTable, F2Coefficients) {
  for (int n = -3; n <= 5; ++n) {
    auto u = unil_group(F2(), n, 6).description;
    if (n % 2) {
      EXPECT_TRUE(u.is_trivial()) << n;
    } else {
      ASSERT_EQ(u.group.families.size(), 1u) << n;
      EXPECT_EQ(u.group.families[0].exponents, exponent_range(1, 6, 2));
    }
  }
  EXPECT_THROW(unil_group(Z4(), 0, 3), ring_error);
}

TEST(UNilTable, FourPeriodic) {
  for (int n = -2; n <= 5; ++n) {
    auto a = unil_group(Z(), n, 6), b = unil_group(Z(), n + 4, 6);
    EXPECT_EQ(a.n_reduced, b.n_reduced);
    EXPECT_TRUE(same_description(a.description, b.description)) << n;
    EXPECT_FALSE(a.provenance.empty());
  }
}

// Span of 1 and x^{2i} + x^i inside F2[x] of degree <= D, counted by elimination.
TEST(UNil2, DimensionMatchesLinearAlgebra) {
  for (int D = 0; D <= 40; ++D) {
    std::vector<std::uint64_t> rows{1};
    for (int i = 1; 2 * i <= D; ++i) rows.push_back((std::uint64_t{1} << (2 * i)) | (std::uint64_t{1} << i));
    int dim = D + 1 - gf2_rank(rows);
    EXPECT_EQ(dim, (D + 1) / 2) << D;
    auto lg = unil_group(Z(), 2, D).description.log2_order();
    ASSERT_TRUE(lg.has_value());
    EXPECT_EQ(*lg, dim) << D;
  }
}

TEST(UNil2, NormalizeExamples) {
  EXPECT_EQ(unil2_normalize(poly(F2x(), {0, 0, 1})).normal, poly(F2x(), {0, 1}));
  EXPECT_TRUE(unil2_normalize(poly(F2x(), {1})).normal.is_zero());
  EXPECT_EQ(unil2_normalize(poly(F2x(), {0, 0, 0, 0, 0, 1, 1})).normal, poly(F2x(), {0, 0, 0, 1, 0, 1}));
}

TEST(UNil2, AddExamples) {
  auto x = unil2_normalize(poly(F2x(), {0, 1})), x3 = unil2_normalize(poly(F2x(), {0, 0, 0, 1}));
  EXPECT_TRUE(unil2_add(x, x).normal.is_zero());
  EXPECT_EQ(unil2_add(x, x3).normal, poly(F2x(), {0, 1, 0, 1}));
  EXPECT_TRUE(unil2_add(unil2_normalize(poly(F2x(), {0, 0, 1})), x).normal.is_zero());
}

TEST(UNil2, GroupLaw) {
  std::mt19937_64 g(15);
  for (int i = 0; i < 200; ++i) {
    auto a = unil2_normalize(random_poly(g, F2x(), 24, 0, 1)), b = unil2_normalize(random_poly(g, F2x(), 24, 0, 1));
    EXPECT_EQ(unil2_normalize(a.normal), a);
    EXPECT_TRUE(unil2_add(a, a).normal.is_zero());
    EXPECT_EQ(unil2_add(a, b), unil2_add(b, a));
    for (int e = 0; e <= a.normal.degree(); e += 2) EXPECT_EQ(a.normal.coeff(e), 0);
  }
}

TEST(NQSequence, Examples) {
  const int D = 7;
  auto s0 = nq_sequence(0, D);
  EXPECT_TRUE(s0.segment_specialization);
  EXPECT_EQ(s0.unil_index, -1);
  EXPECT_TRUE(same_description(s0.right, twisted_q_segment(Z(), 0, D)));

  auto s1 = nq_sequence(1, D);
  EXPECT_TRUE(s1.unil.is_trivial());

  auto sm = nq_sequence(-1, D);
  EXPECT_EQ(sm.unil_index, -2);
  EXPECT_TRUE(same_description(sm.unil, GroupDescription::of(relative_cokernel(JLevel::J0, D))));

  EXPECT_THROW(nq_sequence(3, D), ring_error);
  EXPECT_THROW(nq_sequence(-2, D), ring_error);
}

TEST(NQSequence, OrdersAreExact) {
  for (int D : {0, 3, 8})
    for (int n = -1; n <= 2; ++n) EXPECT_TRUE(nq_sequence(n, D).exact()) << "n=" << n << " D=" << D;
}
