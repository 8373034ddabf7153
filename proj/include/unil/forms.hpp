#pragma once

/// Symmetrization, quadratic classes and their canonical forms, determinants,
/// inverses, and the Sym_r / Quad_r quotient arithmetic.

#include "unil/linalg.hpp"

#include <optional>
#include <string>

namespace unil {

inline void require_square(const Matrix& m, const char* what) {
  if (!m.is_square()) throw ring_error(std::string(what) + ": matrix is not square");
}

inline RingElement eps_element(RingDescriptor r, int eps) {
  if (eps != 1 && eps != -1) throw ring_error("epsilon must be +1 or -1");
  return RingElement::scalar(r, eps);
}

/// N_eps(psi) = psi + eps psi^t.
inline Matrix symmetrize(const Matrix& psi, int eps) {
  require_square(psi, "symmetrize");
  return psi + eps_element(psi.ring(), eps) * psi.transpose();
}

inline bool is_eps_symmetric(const Matrix& m, int eps) {
  return m.is_square() && m == eps_element(m.ring(), eps) * m.transpose();
}

/// Reduces every coefficient of e modulo m (m > 0) into [0, m); m = 1 gives 0.
inline RingElement reduce_coeffs_mod(const RingElement& e, const Integer& m) {
  const auto& r = e.ring();
  Integer mod = m;
  if (r.kind() != ScalarKind::Int) mod = gcd(m, r.characteristic());
  std::vector<Integer> c(e.coeffs());
  for (auto& v : c) {
    v %= mod;
    if (v < 0) v += mod;
  }
  return RingElement::from_coeffs(r, std::move(c));
}

/// An element of Q_eps(P) = Hom(P, P*) / {chi - eps chi^t}, held in canonical form.
class QuadraticClass {
 public:
  QuadraticClass() = default;
  QuadraticClass(const Matrix& psi, int eps) : eps_(eps), rep_(canonical(psi, eps)) {}

  int epsilon() const { return eps_; }
  std::size_t rank() const { return rep_.rows(); }
  const RingDescriptor& ring() const { return rep_.ring(); }
  const Matrix& rep() const { return rep_; }
  bool is_zero() const { return rep_.is_zero(); }

  friend bool operator==(const QuadraticClass& a, const QuadraticClass& b) {
    return a.eps_ == b.eps_ && a.rep_ == b.rep_;
  }

  /// Fold the strictly lower part into the upper part; for eps = -1 reduce the diagonal mod 2R.
  static Matrix canonical(const Matrix& psi, int eps) {
    require_square(psi, "quadratic class");
    RingElement e = eps_element(psi.ring(), eps);
    Matrix m = psi;
    const std::size_t k = m.rows();
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        m(j, i) += e * m(i, j);
        m(i, j) = RingElement(m.ring());
      }
    if (eps == -1)
      for (std::size_t i = 0; i < k; ++i) m(i, i) = reduce_coeffs_mod(m(i, i), 2);
    return m;
  }

 private:
  int eps_ = 1;
  Matrix rep_;
};

inline QuadraticClass quad_class_normalize(const Matrix& psi, int eps) { return QuadraticClass(psi, eps); }

/// Restriction i^t psi i of a quadratic class along an inclusion.
inline QuadraticClass restrict_class(const QuadraticClass& q, const Matrix& inc) {
  return QuadraticClass(inc.transpose() * q.rep() * inc, q.epsilon());
}

namespace detail {

inline RingElement det_bareiss(Matrix m) {
  const std::size_t n = m.rows();
  const auto& R = m.ring();
  if (n == 0) return RingElement::one(R);
  bool negate = false;
  RingElement prev = RingElement::one(R);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      std::size_t i = k + 1;
      while (i < n && m(i, k).is_zero()) ++i;
      if (i == n) return RingElement(R);
      swap_rows(m, k, i);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = exact_divide(m(i, j) * m(k, k) - m(i, k) * m(k, j), prev);
    prev = m(k, k);
  }
  return negate ? -m(n - 1, n - 1) : m(n - 1, n - 1);
}

/// Division-free expansion over row-by-row column subsets; O(2^n n) ring operations.
inline RingElement det_subsets(const Matrix& m) {
  const std::size_t n = m.rows();
  const auto& R = m.ring();
  if (n > 20) throw ring_error("determinant over a non-domain limited to rank 20");
  std::vector<RingElement> dp(std::size_t{1} << n, RingElement(R));
  dp[0] = RingElement::one(R);
  for (std::size_t S = 0; S < dp.size(); ++S) {
    if (dp[S].is_zero()) continue;
    std::size_t i = static_cast<std::size_t>(__builtin_popcountll(S));
    if (i == n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (S & (std::size_t{1} << j) || m(i, j).is_zero()) continue;
      int above = __builtin_popcountll(S >> (j + 1));
      RingElement t = dp[S] * m(i, j);
      dp[S | (std::size_t{1} << j)] += (above & 1) ? -t : t;
    }
  }
  return dp.back();
}

}  // namespace detail

inline RingElement determinant(const Matrix& m) {
  require_square(m, "determinant");
  if (m.ring().is_domain()) return detail::det_bareiss(m);
  return detail::det_subsets(m);
}

/// Exact inverse, or nullopt when det(M) is not a unit.
inline std::optional<Matrix> matrix_inverse(const Matrix& M) {
  require_square(M, "matrix_inverse");
  const auto& R = M.ring();
  const std::size_t n = M.rows();
  if (!R.is_poly()) {
    if (!has_left_inverse(M)) return std::nullopt;
    return solve(M, Matrix::identity(R, n));
  }
  auto dinv = unit_inverse(determinant(M));
  if (!dinv) return std::nullopt;
  Matrix inv(R, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Matrix minor(R, n - 1, n - 1);
      for (std::size_t a = 0, ra = 0; a < n; ++a) {
        if (a == i) continue;
        for (std::size_t b = 0, cb = 0; b < n; ++b) {
          if (b == j) continue;
          minor(ra, cb++) = M(a, b);
        }
        ++ra;
      }
      RingElement c = determinant(minor) * *dinv;
      inv(j, i) = ((i + j) & 1u) ? -c : c;
    }
  return inv;
}

struct not_invertible : ring_error {
  using ring_error::ring_error;
};

inline Matrix inverse_or_throw(const Matrix& M) {
  auto inv = matrix_inverse(M);
  if (!inv) throw not_invertible("matrix is not invertible over " + M.ring().name());
  return *inv;
}

inline bool is_invertible(const Matrix& M) {
  if (!M.is_square()) return false;
  if (!M.ring().is_poly()) return has_left_inverse(M);
  return is_unit(determinant(M));
}

inline bool is_nonsingular_quadratic(const Matrix& psi, int eps) { return is_invertible(symmetrize(psi, eps)); }

/// Denominators for quotients of Sym_r(A): Quad = {M + M^t}, 2Quad, 2Sym, 4Sym, or none.
enum class Denominator { Quad, TwoQuad, TwoSym, FourSym, None };

inline std::string denominator_name(Denominator d) {
  switch (d) {
    case Denominator::Quad: return "Quad";
    case Denominator::TwoQuad: return "2Quad";
    case Denominator::TwoSym: return "2Sym";
    case Denominator::FourSym: return "4Sym";
    case Denominator::None: return "none";
  }
  return "?";
}

/// Moduli (diagonal, off-diagonal) applied coefficientwise; 0 means no reduction.
/// Quad has even diagonal and arbitrary off-diagonal entries, so Sym/Quad keeps only the
/// diagonal mod 2. 2Quad: diagonal mod 4, off-diagonal mod 2.
inline std::pair<int, int> denominator_moduli(Denominator d) {
  switch (d) {
    case Denominator::Quad: return {2, 1};
    case Denominator::TwoQuad: return {4, 2};
    case Denominator::TwoSym: return {2, 2};
    case Denominator::FourSym: return {4, 4};
    case Denominator::None: return {0, 0};
  }
  return {0, 0};
}

struct SymQuotientElem {
  Denominator denominator = Denominator::None;
  Matrix rep;  // symmetric, canonical

  std::size_t rank() const { return rep.rows(); }
  friend bool operator==(const SymQuotientElem&, const SymQuotientElem&) = default;
};

inline SymQuotientElem sym_quotient_reduce(const Matrix& M, Denominator d) {
  if (!is_eps_symmetric(M, 1)) throw ring_error("sym_quotient_reduce: matrix is not symmetric");
  auto [dm, om] = denominator_moduli(d);
  Matrix r = M;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) {
      int m = i == j ? dm : om;
      if (m > 0) r(i, j) = reduce_coeffs_mod(r(i, j), m);
    }
  return {d, r};
}

inline bool is_canonical(const Matrix& M, Denominator d) {
  return is_eps_symmetric(M, 1) && sym_quotient_reduce(M, d).rep == M;
}

}  // namespace unil
