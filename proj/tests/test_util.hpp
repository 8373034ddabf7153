#pragma once

#include "unil/ring.hpp"
#include "unil/matrix.hpp"

#include <random>
#include <vector>

namespace unil::testing {

inline RingDescriptor Z() { return RingDescriptor::integers(); }
inline RingDescriptor F2() { return RingDescriptor::gf2(); }
inline RingDescriptor Z4() { return RingDescriptor::int_mod(2); }
inline RingDescriptor Zx() { return RingDescriptor::poly(Z()); }
inline RingDescriptor F2x() { return RingDescriptor::poly(F2()); }
inline RingDescriptor Z4x() { return RingDescriptor::poly(Z4()); }

inline RingElement poly(RingDescriptor r, std::vector<long long> c) {
  std::vector<Integer> v(c.begin(), c.end());
  return RingElement::from_coeffs(r, std::move(v));
}

inline RingElement random_poly(std::mt19937_64& g, RingDescriptor r, int max_degree, long lo = -5, long hi = 5) {
  std::uniform_int_distribution<long> coef(lo, hi);
  std::uniform_int_distribution<int> deg(-1, max_degree);
  int d = r.is_poly() ? deg(g) : std::min(deg(g), 0);
  std::vector<Integer> c;
  for (int i = 0; i <= d; ++i) c.push_back(coef(g));
  return RingElement::from_coeffs(r, std::move(c));
}

inline Matrix random_matrix(std::mt19937_64& g, RingDescriptor r, std::size_t rows, std::size_t cols, int max_degree = 0,
                            long lo = -5, long hi = 5) {
  Matrix m(r, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_poly(g, r, max_degree, lo, hi);
  return m;
}

/// F2[x] element from the bits of n (bit i = coefficient of x^i).
inline RingElement f2_from_bits(unsigned n) {
  std::vector<Integer> c;
  for (int i = 0; n >> i; ++i) c.push_back((n >> i) & 1u);
  return RingElement::from_coeffs(F2x(), std::move(c));
}

}  // namespace unil::testing
