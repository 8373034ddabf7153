#pragma once

/// Dense matrices over the exact rings. Maps act on column vectors; a form
/// P -> P* is the matrix of its bilinear pairing, so duals are transposes.

#include "unil/ring.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace unil {

class Matrix {
 public:
  Matrix() = default;
  Matrix(RingDescriptor r, std::size_t rows, std::size_t cols)
      : ring_(r), rows_(rows), cols_(cols), data_(rows * cols, RingElement(r)) {}

  static Matrix identity(RingDescriptor r, std::size_t n) {
    Matrix m(r, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = RingElement::one(r);
    return m;
  }
  static Matrix from_ints(RingDescriptor r, std::initializer_list<std::initializer_list<long long>> rows) {
    std::size_t nr = rows.size(), nc = nr ? rows.begin()->size() : 0;
    Matrix m(r, nr, nc);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != nc) throw ring_error("ragged matrix literal");
      std::size_t j = 0;
      for (long long v : row) m(i, j++) = RingElement::scalar(r, v);
      ++i;
    }
    return m;
  }
  static Matrix diagonal(const std::vector<RingElement>& d, RingDescriptor r) {
    Matrix m(r, d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  const RingDescriptor& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  RingElement& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const RingElement& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& e : data_)
      if (!e.is_zero()) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix t(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_shape(a, b);
    Matrix c(a.ring_, a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] + b.data_[i];
    return c;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_shape(a, b);
    Matrix c(a.ring_, a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] - b.data_[i];
    return c;
  }
  friend Matrix operator-(const Matrix& a) {
    Matrix c(a.ring_, a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = -a.data_[i];
    return c;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (!(a.ring_ == b.ring_)) throw ring_error("matrix ring mismatch");
    if (a.cols_ != b.rows_) throw ring_error("matrix product shape mismatch");
    Matrix c(a.ring_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const RingElement& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Matrix operator*(const RingElement& s, const Matrix& a) {
    Matrix c(a.ring_, a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = s * a.data_[i];
    return c;
  }
  Matrix times(const Integer& k) const {
    Matrix c(ring_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) c.data_[i] = data_[i].times(k);
    return c;
  }

  Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw ring_error("submatrix out of range");
    Matrix m(ring_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }
  Matrix columns(const std::vector<std::size_t>& idx) const {
    Matrix m(ring_, rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
  }
  Matrix column(std::size_t j) const { return submatrix(0, j, rows_, 1); }
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw ring_error("block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  /// Entry-wise image in R[x].
  Matrix lift_to_poly() const {
    Matrix m(ring_.with_x(), rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = data_[i].lift_to_poly();
    return m;
  }
  /// Entry-wise image under x -> 0.
  Matrix augment() const {
    Matrix m(ring_.base(), rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = data_[i].augment();
    return m;
  }
  /// Coefficient matrix of x^d.
  Matrix coefficient(std::size_t d) const {
    Matrix m(ring_.base(), rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = RingElement::scalar(ring_.base(), data_[i].coeff(d));
    return m;
  }

  /// Nested-list literal, e.g. [[[1],[0,1]],[[],[1]]] for polynomial rings and [[1,0],[0,1]] for scalars.
  std::string to_literal() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) s += ",";
        const auto& e = (*this)(i, j);
        s += ring_.is_poly() ? e.to_literal() : e.value().str();
      }
      s += "]";
    }
    return s + "]";
  }

 private:
  static void check_shape(const Matrix& a, const Matrix& b) {
    if (!(a.ring_ == b.ring_)) throw ring_error("matrix ring mismatch");
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ring_error("matrix shape mismatch");
  }

  RingDescriptor ring_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<RingElement> data_;
};

inline Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m(a.ring(), a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

/// [[a, b], [c, d]] with compatible shapes.
inline Matrix block2x2(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  if (a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols())
    throw ring_error("block shape mismatch");
  Matrix m(a.ring(), a.rows() + c.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  m.set_block(a.rows(), 0, c);
  m.set_block(a.rows(), a.cols(), d);
  return m;
}

inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw ring_error("hstack row mismatch");
  Matrix m(a.ring(), a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw ring_error("vstack column mismatch");
  Matrix m(a.ring(), a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

inline Matrix zeros(RingDescriptor r, std::size_t rows, std::size_t cols) { return Matrix(r, rows, cols); }

inline Matrix matrix_power(const Matrix& m, unsigned n) {
  Matrix r = Matrix::identity(m.ring(), m.rows()), b = m;
  while (n) {
    if (n & 1u) r = r * b;
    b = b * b;
    n >>= 1u;
  }
  return r;
}

}  // namespace unil
