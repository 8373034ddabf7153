#include "test_util.hpp"

#include "unil/q_oracle.hpp"

#include <gtest/gtest.h>

using namespace unil;
using namespace unil::testing;

namespace {

Matrix M(RingDescriptor r, std::initializer_list<std::initializer_list<long long>> rows) { return Matrix::from_ints(r, rows); }

bool unimodular(const Matrix& m) {
  Integer d = determinant(m).value();
  return d == 1 || d == -1;
}

FinChainComplex two_term(const Matrix& d) {
  const RingDescriptor& R = d.ring();
  return {R, {d.rows(), d.cols()}, {Matrix(R, 0, d.rows()), d}};
}

std::optional<int> log2_of(const GroupDescription& g) { return g.log2_order(); }

}  // namespace

TEST(Smith, SpecExamples) {
  auto s = smith_normal_form(M(Z(), {{2, 0}, {0, 3}}));
  EXPECT_EQ(s.D, M(Z(), {{1, 0}, {0, 6}}));
  EXPECT_EQ(smith_normal_form(Matrix::identity(Z(), 3)).D, Matrix::identity(Z(), 3));
  auto z = smith_normal_form(M(Z(), {{0}}));
  EXPECT_EQ(z.D, M(Z(), {{0}}));
  EXPECT_TRUE(z.diagonal.empty());
}

TEST(Smith, Properties200) {
  std::mt19937_64 g(16);
  for (int i = 0; i < 200; ++i) {
    const std::size_t r = 1 + i % 4, c = 1 + (i / 4) % 5;
    Matrix m = random_matrix(g, Z(), r, c, 0, -9, 9);
    if (i % 7 == 0) m = m.times(6);
    auto s = smith_normal_form(m);
    EXPECT_EQ(s.U * m * s.V, s.D) << "case " << i;
    EXPECT_TRUE(unimodular(s.U));
    EXPECT_TRUE(unimodular(s.V));
    for (std::size_t a = 0; a < s.D.rows(); ++a)
      for (std::size_t b = 0; b < s.D.cols(); ++b)
        if (a != b) {
          EXPECT_TRUE(s.D(a, b).is_zero());
        }
    for (std::size_t k = 0; k + 1 < s.diagonal.size(); ++k) EXPECT_EQ(s.diagonal[k + 1] % s.diagonal[k], 0);
  }
}

TEST(Smith, QuotientPresentation) {
  auto p = present_quotient(M(Z(), {{2, 0}, {0, 4}, {0, 0}}));
  EXPECT_EQ(p.invariant_factors, (std::vector<Integer>{2, 4, 0}));
  EXPECT_EQ(p.group().name, "Z x Z/2 x Z/4");
}

TEST(Oracle, SpecExamples) {
  auto C = segment_complex(Z());
  EXPECT_EQ(oracle_q_group(C, 0, QFlavor::Sym).cyclic, (std::vector<Integer>{4}));
  EXPECT_EQ(oracle_q_group(C, 0, QFlavor::Hyper).cyclic, (std::vector<Integer>{2}));
  EXPECT_TRUE(oracle_q_group(C, 3, QFlavor::Sym).is_trivial());
  FinChainComplex wide{Z(), {1, 1, 1, 1, 1}, {Matrix(Z(), 0, 1), M(Z(), {{0}}), M(Z(), {{0}}), M(Z(), {{0}}), M(Z(), {{0}})}};
  EXPECT_THROW(oracle_q_group(wide, 0, QFlavor::Sym), ring_error);
}

// Q-groups of Z^k in degree 0: symmetric forms, quadratic forms, and their diagonal mod 2.
TEST(Oracle, FreeModuleInDegreeZero) {
  for (std::size_t k = 1; k <= 3; ++k) {
    auto C = one_term_complex(Z(), k, 0);
    const std::size_t t = k * (k + 1) / 2;
    EXPECT_EQ(oracle_q_group(C, 0, QFlavor::Sym).cyclic, std::vector<Integer>(t, 0));
    EXPECT_EQ(oracle_q_group(C, 0, QFlavor::Quad).cyclic, std::vector<Integer>(t, 0));
    EXPECT_EQ(oracle_q_group(C, 0, QFlavor::Hyper).cyclic, std::vector<Integer>(k, 2));
    EXPECT_TRUE(oracle_q_group(C, 1, QFlavor::Hyper).is_trivial());
    EXPECT_TRUE(oracle_q_group(C, -1, QFlavor::Hyper).is_trivial());
  }
  auto F = one_term_complex(F2(), 1, 0);
  EXPECT_EQ(oracle_q_group(F, 0, QFlavor::Sym).cyclic, (std::vector<Integer>{2}));
}

TEST(Oracle, AgreesWithClosedForms) {
  auto C = segment_complex(Z());
  for (int n = -2; n <= 3; ++n)
    for (auto f : {QFlavor::Sym, QFlavor::Hyper, QFlavor::Quad}) {
      EXPECT_TRUE(oracle_d_squared_zero(C, n, f));
      EXPECT_TRUE(oracle_q_group(C, n, f).same_structure(segment_q_groups(Z(), n, f, 0)))
          << "n=" << n << " " << flavor_name(f);
    }
}

// Sym groups of a complex in degrees <= 1 vanish above degree 2.
TEST(Oracle, RuleCOnRandomF2Complexes) {
  std::mt19937_64 g(17);
  for (int i = 0; i < 60; ++i) {
    const std::size_t a = 1 + i % 2, b = 1 + (i / 2) % 2;
    auto C = two_term(random_matrix(g, F2(), a, b, 0, 0, 1));
    for (int n = 3; n <= 4; ++n) EXPECT_TRUE(oracle_q_group(C, n, QFlavor::Sym).is_trivial()) << i;
    for (int n = -1; n <= 3; ++n)
      for (auto f : {QFlavor::Sym, QFlavor::Hyper, QFlavor::Quad}) EXPECT_TRUE(oracle_d_squared_zero(C, n, f));
  }
  for (int r = 0; r <= 2; ++r) {
    auto C = one_term_complex(F2(), 2, r);
    EXPECT_TRUE(oracle_q_group(C, 2 * r + 1, QFlavor::Sym).is_trivial());
    EXPECT_FALSE(oracle_q_group(C, 2 * r, QFlavor::Sym).is_trivial());
  }
}

// Kernel and cokernel of J^0 over Z: the map is zero, so they are Q^0 and Q-hat^0 themselves.
TEST(Oracle, KerCokerJ0MatchesOracle) {
  auto C = segment_complex(Z());
  auto kc = ker_coker_j(Z(), JLevel::J0, 0);
  EXPECT_TRUE(kc.kernel.same_structure(oracle_q_group(C, 0, QFlavor::Sym)));
  EXPECT_TRUE(kc.cokernel.same_structure(oracle_q_group(C, 0, QFlavor::Hyper)));
  auto j0 = detail::j_on_z_segment(0);
  EXPECT_TRUE(j0.kernel.same_structure(kc.kernel));
  EXPECT_TRUE(j0.cokernel.same_structure(kc.cokernel));
  auto j1 = detail::j_on_z_segment(1);
  auto kc1 = ker_coker_j(Z(), JLevel::J1, 0);
  EXPECT_TRUE(j1.kernel.same_structure(kc1.kernel));
  EXPECT_TRUE(j1.cokernel.same_structure(kc1.cokernel));
}

TEST(TwistedOracle, SpecExamples) {
  auto seg = bundle_segment(build_universal_bundle(Z()), 0);
  EXPECT_EQ(oracle_twisted_q(seg, 2, TwistedScope::Full).log2_order, 0);
  auto q0 = oracle_twisted_q(seg, 0);
  ASSERT_TRUE(q0.extension.has_value());
  EXPECT_EQ(q0.extension->quotient.cyclic, (std::vector<Integer>{4}));
  EXPECT_EQ(q0.log2_order, 3);
  for (int r = 0; r <= 2; ++r) {
    auto t = oracle_twisted_q_f2(M(F2(), {{1}}), r, 2 * r - 1);
    ASSERT_TRUE(t.determined());
    EXPECT_EQ(t.group->cyclic, (std::vector<Integer>{2})) << r;
  }
  EXPECT_THROW(oracle_twisted_q(seg, 3), ring_error);
}

TEST(TwistedOracle, AgreesWithSequence) {
  auto seg = bundle_segment(build_universal_bundle(Z()), 0);
  for (int n = -2; n <= 2; ++n)
    EXPECT_EQ(oracle_twisted_q(seg, n).log2_order, log2_of(twisted_q_segment(Z(), n, 4))) << n;
  for (int n = -1; n <= 2; ++n)
    EXPECT_EQ(oracle_twisted_q(seg, n, TwistedScope::Full).log2_order, log2_of(twisted_q_full(Z(), n, 4))) << n;
}

TEST(TwistedOracle, F2Exactness) {
  const Matrix xs[] = {M(F2(), {{1}}), M(F2(), {{1, 0}, {0, 0}}), M(F2(), {{1, 0}, {0, 1}})};
  for (const auto& X : xs)
    for (int r = 0; r <= 2; ++r)
      for (int n = 2 * r - 2; n <= 2 * r + 2; ++n) {
        if (X.rows() == 2 && r > 1) continue;
        auto e = check_twisted_exactness_f2(X, r, n);
        EXPECT_TRUE(e.holds()) << "rank " << X.rows() << " r=" << r << " n=" << n;
      }
}
