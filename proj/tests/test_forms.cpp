#include "test_util.hpp"

#include "unil/forms.hpp"
#include "unil/linalg.hpp"

#include <gtest/gtest.h>

using namespace unil;
using namespace unil::testing;

namespace {

Matrix M(RingDescriptor r, std::initializer_list<std::initializer_list<long long>> rows) { return Matrix::from_ints(r, rows); }

// Linear map chi -> chi - eps chi^t on k x k matrices, as a k^2 x k^2 matrix.
Matrix skew_operator(RingDescriptor r, std::size_t k, int eps) {
  Matrix A(r, k * k, k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      A(i * k + j, i * k + j) += RingElement::one(r);
      A(i * k + j, j * k + i) -= RingElement::scalar(r, eps);
    }
  return A;
}

Matrix vec(const Matrix& m) {
  Matrix v(m.ring(), m.rows() * m.cols(), 1);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v(i * m.cols() + j, 0) = m(i, j);
  return v;
}

}  // namespace

TEST(Symmetrize, SpecExamples) {
  EXPECT_EQ(symmetrize(M(Z(), {{0, 1}, {0, 0}}), 1), M(Z(), {{0, 1}, {1, 0}}));
  EXPECT_EQ(symmetrize(M(Z(), {{0, 1}, {0, 0}}), -1), M(Z(), {{0, 1}, {-1, 0}}));
  EXPECT_EQ(symmetrize(M(Z(), {{1}}), 1), M(Z(), {{2}}));
  EXPECT_THROW(symmetrize(Matrix(Z(), 1, 2), 1), ring_error);
}

TEST(QuadraticClass, SpecExamples) {
  EXPECT_EQ(quad_class_normalize(M(Z(), {{0, 0}, {1, 0}}), 1), quad_class_normalize(M(Z(), {{0, 1}, {0, 0}}), 1));
  EXPECT_EQ(quad_class_normalize(M(Z(), {{0, 0}, {1, 0}}), 1).rep(), M(Z(), {{0, 1}, {0, 0}}));
  EXPECT_TRUE(quad_class_normalize(Matrix(Z(), 2, 2), -1).is_zero());
  EXPECT_TRUE(quad_class_normalize(M(Z(), {{2, 0}, {0, 0}}), -1).is_zero());
}

// Closed-form zero test against solving chi - eps chi^t = M directly.
TEST(QuadraticClass, MembershipMatchesLinearSolve200) {
  std::mt19937_64 g(77);
  for (auto R : {Z4(), F2()})
    for (int eps : {1, -1}) {
      Matrix A = skew_operator(R, 3, eps);
      int zeros = 0;
      for (int i = 0; i < 200; ++i) {
        Matrix m = random_matrix(g, R, 3, 3);
        // bias towards members so both branches are exercised
        if (i % 2) {
          Matrix chi = random_matrix(g, R, 3, 3);
          m = chi - chi.transpose().times(eps);
        }
        bool closed = quad_class_normalize(m, eps).is_zero();
        bool solved = solve(A, vec(m)).has_value();
        EXPECT_EQ(closed, solved) << R.name() << " eps=" << eps;
        zeros += closed;
      }
      EXPECT_GE(zeros, 100);
    }
}

TEST(QuadraticClass, SymmetrizationFactorsThroughClasses) {
  std::mt19937_64 g(3);
  for (int i = 0; i < 200; ++i) {
    RingDescriptor R = i % 2 ? Zx() : Z4();
    int eps = i % 4 < 2 ? 1 : -1;
    Matrix psi = random_matrix(g, R, 3, 3, 2), chi = random_matrix(g, R, 3, 3, 2);
    Matrix psi2 = psi + chi - chi.transpose().times(eps);
    EXPECT_EQ(quad_class_normalize(psi, eps), quad_class_normalize(psi2, eps));
    EXPECT_EQ(symmetrize(psi, eps), symmetrize(psi2, eps));
    // canonical form is idempotent
    auto q = quad_class_normalize(psi, eps);
    EXPECT_EQ(quad_class_normalize(q.rep(), eps).rep(), q.rep());
  }
}

TEST(MatrixInverse, SpecExamples) {
  EXPECT_EQ(matrix_inverse(M(Z(), {{0, 1}, {-1, 0}})), M(Z(), {{0, -1}, {1, 0}}));
  Matrix m(Zx(), 2, 2);
  m(0, 0) = poly(Zx(), {0, 2});
  m(0, 1) = m(1, 0) = RingElement::one(Zx());
  Matrix expect(Zx(), 2, 2);
  expect(0, 1) = expect(1, 0) = RingElement::one(Zx());
  expect(1, 1) = poly(Zx(), {0, -2});
  auto inv = matrix_inverse(m);
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(*inv, expect);
  EXPECT_EQ(m * *inv, Matrix::identity(Zx(), 2));
  EXPECT_FALSE(matrix_inverse(M(Z(), {{2}})).has_value());
  EXPECT_THROW(inverse_or_throw(M(Z(), {{2}})), not_invertible);
}

TEST(MatrixInverse, TriangularProductsRoundTrip200) {
  std::mt19937_64 g(99);
  const RingDescriptor rings[] = {Z(), Z4(), F2(), Zx(), F2x(), Z4x()};
  for (int i = 0; i < 200; ++i) {
    RingDescriptor R = rings[i % 6];
    const std::size_t n = 1 + i % 4;
    Matrix L = Matrix::identity(R, n), U = Matrix::identity(R, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (a > b) L(a, b) = random_poly(g, R, 2);
        if (a < b) U(a, b) = random_poly(g, R, 2);
      }
    if (R.kind() != ScalarKind::GF2) U(0, 0) = RingElement::scalar(R, -1);
    Matrix P = L * U;
    auto inv = matrix_inverse(P);
    ASSERT_TRUE(inv.has_value()) << R.name();
    EXPECT_EQ(*inv * P, Matrix::identity(R, n));
    EXPECT_EQ(P * *inv, Matrix::identity(R, n));
  }
}

TEST(SymQuotient, SpecExamples) {
  EXPECT_EQ(sym_quotient_reduce(M(Z(), {{5}}), Denominator::Quad).rep, M(Z(), {{1}}));
  EXPECT_EQ(sym_quotient_reduce(M(Z(), {{5}}), Denominator::TwoQuad).rep, M(Z(), {{1}}));
  EXPECT_EQ(sym_quotient_reduce(M(Z(), {{7}}), Denominator::TwoQuad).rep, M(Z(), {{3}}));
  Matrix h(F2x(), 2, 2);
  h(0, 1) = h(1, 0) = RingElement::one(F2x());
  EXPECT_TRUE(sym_quotient_reduce(h, Denominator::Quad).rep.is_zero());
  EXPECT_THROW(sym_quotient_reduce(M(Z(), {{0, 1}, {0, 0}}), Denominator::Quad), ring_error);
}

// Membership of a difference in the denominator, tested on generators of the denominator.
TEST(SymQuotient, IdempotentHomomorphism200) {
  std::mt19937_64 g(8);
  const Denominator dens[] = {Denominator::Quad, Denominator::TwoQuad, Denominator::TwoSym, Denominator::FourSym};
  for (int i = 0; i < 200; ++i) {
    RingDescriptor R = i % 2 ? Zx() : Z();
    Denominator d = dens[i % 4];
    Matrix a = random_matrix(g, R, 2, 2, 3), b = random_matrix(g, R, 2, 2, 3);
    a = a + a.transpose();
    a(0, 0) += random_poly(g, R, 3);
    b = b + b.transpose();
    b(1, 1) += random_poly(g, R, 3);
    auto ra = sym_quotient_reduce(a, d), rb = sym_quotient_reduce(b, d);
    EXPECT_EQ(sym_quotient_reduce(ra.rep, d), ra);
    EXPECT_TRUE(is_canonical(ra.rep, d));
    EXPECT_EQ(sym_quotient_reduce(a + b, d), sym_quotient_reduce(ra.rep + rb.rep, d));
    // adding an element of the denominator does not change the class
    Matrix chi = random_matrix(g, R, 2, 2, 3);
    Matrix quad = chi + chi.transpose();
    Matrix sym = chi + chi.transpose();
    sym(0, 0) = chi(0, 0);
    Matrix den;
    switch (d) {
      case Denominator::Quad: den = quad; break;
      case Denominator::TwoQuad: den = quad.times(2); break;
      case Denominator::TwoSym: den = sym.times(2); break;
      default: den = sym.times(4); break;
    }
    EXPECT_EQ(sym_quotient_reduce(a + den, d), ra);
  }
}

TEST(Nonsingular, SpecExamples) {
  EXPECT_TRUE(is_nonsingular_quadratic(M(Z(), {{0, 1}, {0, 0}}), -1));
  EXPECT_FALSE(is_nonsingular_quadratic(M(Z(), {{1}}), 1));
  Matrix m(Zx(), 2, 2);
  m(0, 0) = RingElement::x(Zx());
  m(0, 1) = RingElement::one(Zx());
  EXPECT_TRUE(is_nonsingular_quadratic(m, 1));
}

TEST(Determinant, BareissMatchesCofactor) {
  std::mt19937_64 g(4);
  for (int i = 0; i < 100; ++i) {
    RingDescriptor R = i % 2 ? Zx() : Z();
    Matrix m = random_matrix(g, R, 4, 4, 2);
    EXPECT_EQ(detail::det_bareiss(m), detail::det_subsets(m));
  }
}
