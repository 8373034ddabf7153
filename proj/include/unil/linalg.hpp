#pragma once

/// Linear algebra over the scalar rings Z, Z/2^k and F2. Z is Euclidean under |.|;
/// Z/2^k is treated the same way with the 2-adic valuation as size, so one
/// elimination routine serves both.

#include "unil/matrix.hpp"

#include <optional>
#include <utility>

namespace unil {

namespace detail {

inline void require_scalar(const Matrix& m) {
  if (m.ring().is_poly()) throw ring_error("linear algebra needs a scalar ring, got " + m.ring().name());
}

/// Size used to choose pivots; smaller divides larger on Z/2^k.
inline Integer pivot_size(const RingElement& a) {
  if (a.ring().kind() == ScalarKind::Int) return abs(a.value());
  return valuation2(a.value());
}

/// (q, r) with a = q*b + r and r "smaller" than b (r = 0 whenever possible).
inline std::pair<RingElement, RingElement> divmod(const RingElement& a, const RingElement& b) {
  const auto& r = a.ring();
  if (r.kind() == ScalarKind::Int) {
    Integer av = a.value(), bv = b.value();
    Integer q = av / bv;  // truncates toward zero
    Integer rem = av - q * bv;
    return {RingElement::scalar(r, q), RingElement::scalar(r, rem)};
  }
  int va = valuation2(a.value()), vb = valuation2(b.value());
  if (a.is_zero()) return {RingElement(r), RingElement(r)};
  if (va < vb) return {RingElement(r), a};
  Integer bu = b.value() >> vb;
  Integer q = (a.value() >> vb) * scalar_unit_inverse(r, bu);
  return {RingElement::scalar(r, q), RingElement(r)};
}

/// Exact quotient a/b if b divides a.
inline std::optional<RingElement> divide_scalar(const RingElement& a, const RingElement& b) {
  if (a.is_zero()) return RingElement(a.ring());
  if (b.is_zero()) return std::nullopt;
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

/// Multiplier making a non-zero element "normalized" (positive on Z, power of two on Z/2^k).
inline RingElement normalizing_unit(const RingElement& a) {
  const auto& r = a.ring();
  if (r.kind() == ScalarKind::Int) return RingElement::scalar(r, a.value() < 0 ? -1 : 1);
  int v = valuation2(a.value());
  return RingElement::scalar(r, scalar_unit_inverse(r, a.value() >> v));
}

inline void swap_rows(Matrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
inline void swap_cols(Matrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
/// row[dst] += f * row[src]
inline void add_row(Matrix& m, std::size_t dst, std::size_t src, const RingElement& f) {
  if (f.is_zero()) return;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!m(src, j).is_zero()) m(dst, j) += f * m(src, j);
}
inline void add_col(Matrix& m, std::size_t dst, std::size_t src, const RingElement& f) {
  if (f.is_zero()) return;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (!m(i, src).is_zero()) m(i, dst) += f * m(i, src);
}
inline void scale_row(Matrix& m, std::size_t i, const RingElement& f) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = f * m(i, j);
}
inline void scale_col(Matrix& m, std::size_t j, const RingElement& f) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = f * m(i, j);
}

}  // namespace detail

/// U * A * V = D with D diagonal, each diagonal entry dividing the next.
struct SmithForm {
  Matrix D, U, V;
  std::size_t rank = 0;  // number of nonzero diagonal entries
};

inline SmithForm smith_form(const Matrix& A) {
  detail::require_scalar(A);
  const auto& R = A.ring();
  SmithForm s{A, Matrix::identity(R, A.rows()), Matrix::identity(R, A.cols()), 0};
  Matrix& D = s.D;
  const std::size_t m = A.rows(), n = A.cols();
  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    for (;;) {
      // smallest nonzero entry of the remaining block
      std::optional<std::pair<std::size_t, std::size_t>> best;
      Integer best_size;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (D(i, j).is_zero()) continue;
          Integer sz = detail::pivot_size(D(i, j));
          if (!best || sz < best_size) {
            best = {i, j};
            best_size = sz;
          }
        }
      if (!best) return s;
      detail::swap_rows(D, t, best->first);
      detail::swap_rows(s.U, t, best->first);
      detail::swap_cols(D, t, best->second);
      detail::swap_cols(s.V, t, best->second);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t).is_zero()) continue;
        auto [q, r] = detail::divmod(D(i, t), D(t, t));
        detail::add_row(D, i, t, -q);
        detail::add_row(s.U, i, t, -q);
        if (!r.is_zero()) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j).is_zero()) continue;
        auto [q, r] = detail::divmod(D(t, j), D(t, t));
        detail::add_col(D, j, t, -q);
        detail::add_col(s.V, j, t, -q);
        if (!r.is_zero()) clean = false;
      }
      if (!clean) continue;
      // divisibility of the rest of the block
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < m && !bad; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!detail::divide_scalar(D(i, j), D(t, t))) {
            bad = i;
            break;
          }
      if (!bad) break;
      detail::add_row(D, t, *bad, RingElement::one(R));
      detail::add_row(s.U, t, *bad, RingElement::one(R));
    }
    RingElement u = detail::normalizing_unit(D(t, t));
    detail::scale_row(D, t, u);
    detail::scale_row(s.U, t, u);
    ++s.rank;
  }
  return s;
}

/// X with A X = B, if one exists.
inline std::optional<Matrix> solve(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows()) throw ring_error("solve: row mismatch");
  const auto& R = A.ring();
  SmithForm s = smith_form(A);
  Matrix UB = s.U * B;
  Matrix Y(R, A.cols(), B.cols());
  for (std::size_t c = 0; c < B.cols(); ++c) {
    for (std::size_t i = 0; i < A.rows(); ++i) {
      if (i < s.rank) {
        auto q = detail::divide_scalar(UB(i, c), s.D(i, i));
        if (!q) return std::nullopt;
        Y(i, c) = *q;
      } else if (!UB(i, c).is_zero()) {
        return std::nullopt;
      }
    }
  }
  return s.V * Y;
}

/// Columns are independent and span a direct summand.
inline bool has_left_inverse(const Matrix& A) {
  if (A.cols() == 0) return true;
  SmithForm s = smith_form(A);
  if (s.rank != A.cols()) return false;
  for (std::size_t i = 0; i < s.rank; ++i)
    if (!is_unit(s.D(i, i))) return false;
  return true;
}

inline bool is_surjective(const Matrix& A) { return has_left_inverse(A.transpose()); }

/// Reduced column echelon basis of the column span, normalized so that equal spans of
/// free summands give equal matrices. Zero columns are dropped.
inline Matrix column_echelon(const Matrix& A) {
  detail::require_scalar(A);
  Matrix M = A;
  const auto& R = A.ring();
  std::size_t c = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  for (std::size_t i = 0; i < M.rows() && c < M.cols(); ++i) {
    for (;;) {
      std::optional<std::size_t> best;
      Integer best_size;
      for (std::size_t j = c; j < M.cols(); ++j) {
        if (M(i, j).is_zero()) continue;
        Integer sz = detail::pivot_size(M(i, j));
        if (!best || sz < best_size) {
          best = j;
          best_size = sz;
        }
      }
      if (!best) break;
      detail::swap_cols(M, c, *best);
      bool done = true;
      for (std::size_t j = c + 1; j < M.cols(); ++j) {
        if (M(i, j).is_zero()) continue;
        auto [q, r] = detail::divmod(M(i, j), M(i, c));
        detail::add_col(M, j, c, -q);
        if (!r.is_zero()) done = false;
      }
      if (done) {
        detail::scale_col(M, c, detail::normalizing_unit(M(i, c)));
        for (std::size_t j = 0; j < c; ++j) {
          if (M(i, j).is_zero()) continue;
          RingElement q = detail::divmod(M(i, j), M(i, c)).first;
          if (R.kind() == ScalarKind::Int) {
            // floor division so the residue lands in [0, pivot)
            Integer a = M(i, j).value(), p = M(i, c).value();
            Integer fq = a / p;
            if (a - fq * p < 0) fq -= 1;
            q = RingElement::scalar(R, fq);
          }
          detail::add_col(M, j, c, -q);
        }
        pivots.push_back({i, c});
        ++c;
        break;
      }
    }
  }
  return M.submatrix(0, 0, M.rows(), c);
}

struct non_free_error : ring_error {
  using ring_error::ring_error;
};

/// Basis of ker A (as columns), in column echelon form. Throws if the kernel is not free.
inline Matrix kernel_basis(const Matrix& A) {
  const auto& R = A.ring();
  SmithForm s = smith_form(A);
  for (std::size_t i = 0; i < s.rank; ++i)
    if (R.kind() != ScalarKind::Int && !is_unit(s.D(i, i))) throw non_free_error("kernel is not free");
  std::vector<std::size_t> idx;
  for (std::size_t j = s.rank; j < A.cols(); ++j) idx.push_back(j);
  if (idx.empty()) return Matrix(R, A.cols(), 0);
  return column_echelon(s.V.columns(idx));
}

/// Columns C with [V | C] a basis of span(K), where span(V) is a summand of span(K).
/// Prefers complements spanned by columns of K.
inline Matrix complement_in(const Matrix& K, const Matrix& V) {
  const auto& R = K.ring();
  if (V.cols() == 0) return K;
  auto coords = solve(K, V);
  if (!coords) throw ring_error("complement: subspace not contained in ambient span");
  const std::size_t p = K.cols();
  Matrix chosen = *coords;
  std::vector<std::size_t> picked;
  for (std::size_t j = 0; j < p && chosen.cols() < p; ++j) {
    Matrix e(R, p, 1);
    e(j, 0) = RingElement::one(R);
    Matrix trial = hstack(chosen, e);
    if (has_left_inverse(trial)) {
      chosen = trial;
      picked.push_back(j);
    }
  }
  if (chosen.cols() == p && has_left_inverse(chosen)) return K.columns(picked);
  SmithForm s = smith_form(*coords);
  for (std::size_t i = 0; i < s.rank; ++i)
    if (!is_unit(s.D(i, i))) throw non_free_error("subspace is not a direct summand");
  if (s.rank != V.cols()) throw non_free_error("subspace columns are dependent");
  // U C W = [I; 0], so the last columns of U^{-1} complete C to a basis.
  auto Uinv = solve(s.U, Matrix::identity(R, p));
  std::vector<std::size_t> idx;
  for (std::size_t j = s.rank; j < p; ++j) idx.push_back(j);
  return K * Uinv->columns(idx);
}

}  // namespace unil
