#include "test_util.hpp"

#include <set>

#include <gtest/gtest.h>

using namespace unil;
using namespace unil::testing;

TEST(RingArith, SpecExamples) {
  auto a = poly(F2x(), {1, 1});
  EXPECT_EQ(ring_arith(ArithOp::Mul, a, a), poly(F2x(), {1, 0, 1}));
  auto b = poly(Z4x(), {1, 1});
  EXPECT_EQ(ring_arith(ArithOp::Mul, b, b), poly(Z4x(), {1, 2, 1}));
  EXPECT_EQ(ring_arith(ArithOp::Add, RingElement::scalar(Z4(), 3), RingElement::scalar(Z4(), 2)),
            RingElement::scalar(Z4(), 1));
}

TEST(RingArith, CanonicalReduction) {
  EXPECT_EQ(poly(Z4x(), {5, -1, 4}).coeffs(), (std::vector<Integer>{1, 3}));
  EXPECT_TRUE(poly(F2x(), {2, 4, 6}).is_zero());
  EXPECT_EQ(poly(Zx(), {0, 0, 0}).to_literal(), "[]");
  EXPECT_EQ(poly(Zx(), {1, 0, -3}).to_string(), "1 - 3x^2");
}

TEST(RingArith, MismatchThrows) {
  EXPECT_THROW(RingElement::one(Z()) + RingElement::one(F2()), ring_error);
  EXPECT_THROW(RingElement::x(Z()), ring_error);
  EXPECT_THROW(RingDescriptor::poly(Zx()), ring_error);
  EXPECT_THROW(RingDescriptor::int_mod(5), ring_error);
}

TEST(RingArith, ParseNames) {
  for (std::string s : {"Z", "F2", "Z4", "Z8", "Z16", "Z[x]", "F2[x]", "Z4[x]"})
    EXPECT_EQ(RingDescriptor::parse(s).name(), s == "Z2" ? "F2" : s);
  EXPECT_THROW(RingDescriptor::parse("Q"), ring_error);
}

// Ring axioms against a second evaluation route: evaluate at small integers.
TEST(RingArith, EvaluationHomomorphism) {
  std::mt19937_64 g(11);
  auto eval = [](const RingElement& p, long long t) {
    Integer v = 0, pw = 1;
    for (const auto& c : p.coeffs()) {
      v += c * pw;
      pw *= t;
    }
    return v;
  };
  for (int i = 0; i < 200; ++i) {
    auto a = random_poly(g, Zx(), 6), b = random_poly(g, Zx(), 6);
    for (long long t : {-2, 3}) {
      EXPECT_EQ(eval(a * b, t), eval(a, t) * eval(b, t));
      EXPECT_EQ(eval(a - b, t), eval(a, t) - eval(b, t));
    }
  }
}

TEST(Frobenius, SpecExamples) {
  EXPECT_EQ(frobenius(poly(F2x(), {0, 1})), poly(F2x(), {0, 0, 1}));
  EXPECT_EQ(frobenius(poly(F2x(), {1, 1})), poly(F2x(), {1, 0, 1}));
  EXPECT_EQ(frobenius(poly(F2x(), {1, 1, 0, 1})), poly(F2x(), {1, 0, 1, 0, 0, 0, 1}));
  EXPECT_THROW(frobenius(poly(Zx(), {1, 1})), ring_error);
}

TEST(Frobenius, RingHomomorphism200) {
  std::mt19937_64 g(2024);
  for (int i = 0; i < 200; ++i) {
    auto a = random_poly(g, F2x(), 16, 0, 1), b = random_poly(g, F2x(), 16, 0, 1);
    EXPECT_EQ(frobenius(a * b), frobenius(a) * frobenius(b));
    EXPECT_EQ(frobenius(a + b), frobenius(a) + frobenius(b));
    EXPECT_EQ(frobenius(a), a * a);  // independent route: plain multiplication
  }
}

TEST(Units, SpecExamples) {
  EXPECT_TRUE(is_unit(poly(Zx(), {-1})));
  EXPECT_TRUE(is_unit(poly(Z4x(), {1, 2})));
  EXPECT_FALSE(is_unit(poly(F2x(), {0, 1})));
  EXPECT_FALSE(is_unit(poly(Zx(), {1, 2})));
  EXPECT_FALSE(is_unit(RingElement::zero(Z4())));
}

TEST(Units, InverseWitness) {
  std::mt19937_64 g(5);
  int units = 0;
  for (int i = 0; i < 400; ++i) {
    for (auto R : {Z4x(), RingDescriptor::poly(RingDescriptor::int_mod(3)), Zx(), F2x()}) {
      auto a = random_poly(g, R, 4);
      auto inv = unit_inverse(a);
      EXPECT_EQ(inv.has_value(), is_unit(a));
      if (inv) {
        ++units;
        EXPECT_TRUE((a * *inv).is_one());
      }
    }
  }
  EXPECT_GT(units, 50);
}

TEST(Tate, SpecExamples) {
  EXPECT_TRUE(tate_cohomology(Z(), 1, 8).presentation.is_trivial());
  auto z0 = tate_cohomology(Z(), 0, 8).presentation;
  EXPECT_EQ(z0.cyclic, (std::vector<Integer>{2}));
  auto f = tate_cohomology(F2x(), 0, 5);
  ASSERT_EQ(f.presentation.families.size(), 1u);
  EXPECT_EQ(f.presentation.families[0].exponents, exponent_range(0, 5));
  EXPECT_EQ(f.presentation.families[0].truncation, 5);
  EXPECT_NE(f.action.find("basis {1, x}"), std::string::npos);
  EXPECT_TRUE(tate_cohomology(Zx(), 1, 8).presentation.is_trivial());
}

TEST(Tate, TwoTorsionParityOne) {
  // parity 1 is {a : 2a = 0}, nonzero once the ring has 2-torsion
  EXPECT_EQ(tate_cohomology(Z4(), 1, 3).presentation.cyclic, (std::vector<Integer>{2}));
  EXPECT_EQ(tate_cohomology(F2x(), 1, 3).presentation.name, "F2[x]");
  EXPECT_THROW(tate_cohomology(Z4x(), 0, 3), ring_error);
}

// Brute force over Z/2^k: R/2R and the 2-torsion by enumeration.
TEST(Tate, BruteForceScalarRings) {
  for (int k = 1; k <= 4; ++k) {
    RingDescriptor R = RingDescriptor::int_mod(k);
    const int n = 1 << k;
    std::set<int> quotient, torsion;
    for (int a = 0; a < n; ++a) {
      quotient.insert(a % 2);
      if ((2 * a) % n == 0) torsion.insert(a);
    }
    for (int parity : {0, 1}) {
      auto lg = tate_cohomology(R, parity, 0).presentation.log2_order();
      std::size_t size = parity == 0 ? quotient.size() : torsion.size();
      ASSERT_TRUE(lg.has_value());
      EXPECT_EQ(std::size_t(1) << *lg, size) << R.name() << " parity " << parity;
    }
  }
}
