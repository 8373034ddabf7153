#pragma once

/// Exact coefficient rings: Z, Z/2^k, F2 and their polynomial extensions.
/// All rings carry the trivial involution.

#include "unil/group.hpp"
#include "unil/integer.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unil {

struct ring_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class ScalarKind { Int, IntMod, GF2 };

class RingDescriptor {
 public:
  RingDescriptor() = default;

  static RingDescriptor integers() { return RingDescriptor(ScalarKind::Int, 0, false); }
  static RingDescriptor gf2() { return RingDescriptor(ScalarKind::GF2, 1, false); }
  static RingDescriptor int_mod(int k) {
    if (k < 1 || k > 4) throw ring_error("Z/2^k requires 1 <= k <= 4");
    return RingDescriptor(ScalarKind::IntMod, k, false);
  }
  static RingDescriptor poly(const RingDescriptor& base) {
    if (base.poly_) throw ring_error("polynomial nesting depth is limited to 1");
    return RingDescriptor(base.kind_, base.k_, true);
  }

  ScalarKind kind() const { return kind_; }
  bool is_poly() const { return poly_; }
  /// Exponent k of Z/2^k (1 for F2, 0 for Z).
  int mod_exponent() const { return k_; }
  RingDescriptor base() const { return RingDescriptor(kind_, k_, false); }
  RingDescriptor with_x() const { return poly(*this); }

  /// 0 for Z-based rings, otherwise the modulus of the scalar part.
  Integer characteristic() const {
    if (kind_ == ScalarKind::Int) return 0;
    return Integer(1) << k_;
  }
  bool char_two() const { return kind_ != ScalarKind::Int && k_ == 1; }
  bool is_domain() const { return kind_ == ScalarKind::Int || k_ == 1; }
  /// e with (nilradical)^(e+1) = 0; e = 0 on domains.
  int nilradical_exponent() const { return is_domain() ? 0 : k_ - 1; }

  std::string name() const {
    std::string s;
    switch (kind_) {
      case ScalarKind::Int: s = "Z"; break;
      case ScalarKind::GF2: s = "F2"; break;
      case ScalarKind::IntMod: s = "Z" + std::to_string(1 << k_); break;
    }
    return poly_ ? s + "[x]" : s;
  }

  /// Parses "Z", "F2", "Z2".."Z16", optionally followed by "[x]".
  static RingDescriptor parse(std::string text) {
    bool poly = false;
    if (text.size() > 3 && text.substr(text.size() - 3) == "[x]") {
      poly = true;
      text.resize(text.size() - 3);
    }
    RingDescriptor r;
    if (text == "Z")
      r = integers();
    else if (text == "F2")
      r = gf2();
    else if (text == "Z2")
      r = int_mod(1);
    else if (text == "Z4")
      r = int_mod(2);
    else if (text == "Z8")
      r = int_mod(3);
    else if (text == "Z16")
      r = int_mod(4);
    else
      throw ring_error("unknown ring: " + text);
    return poly ? RingDescriptor::poly(r) : r;
  }

  friend bool operator==(const RingDescriptor&, const RingDescriptor&) = default;

 private:
  RingDescriptor(ScalarKind kind, int k, bool poly) : kind_(kind), k_(k), poly_(poly) {}

  ScalarKind kind_ = ScalarKind::Int;
  int k_ = 0;
  bool poly_ = false;
};

/// Reduces an integer into the canonical range of the scalar ring.
inline Integer reduce_scalar(const RingDescriptor& r, Integer v) {
  if (r.kind() == ScalarKind::Int) return v;
  Integer m = Integer(1) << r.mod_exponent();
  v %= m;
  if (v < 0) v += m;
  return v;
}

class RingElement {
 public:
  RingElement() = default;
  explicit RingElement(RingDescriptor r) : ring_(r) {}

  static RingElement scalar(RingDescriptor r, const Integer& v) {
    RingElement e(r);
    Integer c = reduce_scalar(r, v);
    if (c != 0) e.c_.push_back(std::move(c));
    return e;
  }
  static RingElement zero(RingDescriptor r) { return RingElement(r); }
  static RingElement one(RingDescriptor r) { return scalar(r, 1); }
  static RingElement x(RingDescriptor r) {
    if (!r.is_poly()) throw ring_error("x requires a polynomial ring");
    return from_coeffs(r, {0, 1});
  }
  static RingElement monomial(RingDescriptor r, const Integer& c, std::size_t deg) {
    if (deg > 0 && !r.is_poly()) throw ring_error("monomial of positive degree in a scalar ring");
    std::vector<Integer> v(deg + 1);
    v[deg] = c;
    return from_coeffs(r, std::move(v));
  }
  static RingElement from_coeffs(RingDescriptor r, std::vector<Integer> c) {
    for (auto& v : c) v = reduce_scalar(r, std::move(v));
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (!r.is_poly() && c.size() > 1) throw ring_error("scalar ring element with positive degree");
    RingElement e(r);
    e.c_ = std::move(c);
    return e;
  }

  const RingDescriptor& ring() const { return ring_; }
  const std::vector<Integer>& coeffs() const { return c_; }
  Integer coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Integer(0); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  /// Constant term as an integer.
  Integer value() const { return coeff(0); }

  /// Image under x -> 0, as an element of the scalar base ring.
  RingElement augment() const { return scalar(ring_.base(), coeff(0)); }
  /// Same element viewed in R[x] (requires a scalar ring).
  RingElement lift_to_poly() const { return from_coeffs(ring_.with_x(), c_); }

  friend bool operator==(const RingElement& a, const RingElement& b) {
    return a.ring_ == b.ring_ && a.c_ == b.c_;
  }

  friend RingElement operator+(const RingElement& a, const RingElement& b) {
    check_same(a, b);
    std::vector<Integer> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return from_coeffs(a.ring_, std::move(c));
  }
  friend RingElement operator-(const RingElement& a, const RingElement& b) {
    check_same(a, b);
    std::vector<Integer> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return from_coeffs(a.ring_, std::move(c));
  }
  friend RingElement operator-(const RingElement& a) {
    std::vector<Integer> c(a.c_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = -a.c_[i];
    return from_coeffs(a.ring_, std::move(c));
  }
  friend RingElement operator*(const RingElement& a, const RingElement& b) {
    check_same(a, b);
    if (a.is_zero() || b.is_zero()) return RingElement(a.ring_);
    std::vector<Integer> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return from_coeffs(a.ring_, std::move(c));
  }
  RingElement& operator+=(const RingElement& o) { return *this = *this + o; }
  RingElement& operator-=(const RingElement& o) { return *this = *this - o; }
  RingElement& operator*=(const RingElement& o) { return *this = *this * o; }

  RingElement times(const Integer& k) const {
    std::vector<Integer> c(c_);
    for (auto& v : c) v *= k;
    return from_coeffs(ring_, std::move(c));
  }
  RingElement pow(unsigned n) const {
    RingElement r = one(ring_), b = *this;
    while (n) {
      if (n & 1u) r *= b;
      b *= b;
      n >>= 1u;
    }
    return r;
  }

  /// Coefficient list, low to high, e.g. "[1,0,1]".
  std::string to_literal() const {
    std::string s = "[";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ",";
      s += c_[i].str();
    }
    return s + "]";
  }
  /// Human-readable form such as "1 + 3x^2".
  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      std::string coef = c_[i].str();
      std::string term;
      if (i == 0)
        term = coef;
      else {
        if (coef == "1")
          coef.clear();
        else if (coef == "-1")
          coef = "-";
        term = coef + (i == 1 ? "x" : "x^" + std::to_string(i));
      }
      if (!s.empty()) s += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
      else s = term;
    }
    return s;
  }

 private:
  static void check_same(const RingElement& a, const RingElement& b) {
    if (!(a.ring_ == b.ring_)) throw ring_error("ring mismatch: " + a.ring_.name() + " vs " + b.ring_.name());
  }

  RingDescriptor ring_;
  std::vector<Integer> c_;
};

enum class ArithOp { Add, Sub, Mul, Neg };

inline RingElement ring_arith(ArithOp op, const RingElement& a, const RingElement& b) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Neg: return -a;
  }
  throw ring_error("unknown op");
}

/// a -> a^2 on a characteristic-2 ring.
inline RingElement frobenius(const RingElement& a) {
  if (!a.ring().char_two()) throw ring_error("frobenius needs characteristic 2, got " + a.ring().name());
  std::vector<Integer> c(a.coeffs().empty() ? 0 : 2 * a.coeffs().size() - 1);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) c[2 * i] = a.coeffs()[i];
  return RingElement::from_coeffs(a.ring(), std::move(c));
}

inline bool is_nilpotent_scalar(const RingDescriptor& r, const Integer& v) {
  if (v == 0) return true;
  return r.kind() != ScalarKind::Int && valuation2(v) >= 1;
}

inline bool is_unit_scalar(const RingDescriptor& r, const Integer& v) {
  if (r.kind() == ScalarKind::Int) return v == 1 || v == -1;
  return valuation2(v) == 0;
}

inline bool is_unit(const RingElement& a) {
  const auto& r = a.ring();
  if (a.is_zero() || !is_unit_scalar(r, a.coeff(0))) return false;
  for (std::size_t i = 1; i < a.coeffs().size(); ++i)
    if (!is_nilpotent_scalar(r, a.coeffs()[i])) return false;
  return true;
}

/// Inverse of a unit of Z/2^k; solves u*w = 1 by Newton iteration.
inline Integer scalar_unit_inverse(const RingDescriptor& r, const Integer& u) {
  if (r.kind() == ScalarKind::Int) return u;  // +-1
  Integer w = 1;
  for (int i = 0; i < 3; ++i) w = reduce_scalar(r, w * (2 - u * w));
  return w;
}

/// Inverse when a is a unit: a0^{-1} * sum (-a0^{-1} n)^i with n the nilpotent tail.
inline std::optional<RingElement> unit_inverse(const RingElement& a) {
  if (!is_unit(a)) return std::nullopt;
  const auto& r = a.ring();
  RingElement inv0 = RingElement::scalar(r, scalar_unit_inverse(r, a.coeff(0)));
  RingElement tail = a - RingElement::scalar(r, a.coeff(0));
  RingElement step = -(inv0 * tail);
  RingElement sum = RingElement::one(r), term = RingElement::one(r);
  for (;;) {
    term *= step;
    if (term.is_zero()) break;
    sum += term;
  }
  return inv0 * sum;
}

/// Exact quotient a / b in a domain (Z, F2, Z[x], F2[x]); throws if b does not divide a.
inline RingElement exact_divide(const RingElement& a, const RingElement& b) {
  const auto& r = a.ring();
  if (b.is_zero()) throw ring_error("division by zero");
  if (!r.is_domain()) throw ring_error("exact division needs a domain");
  std::vector<Integer> rem(a.coeffs());
  const auto& bc = b.coeffs();
  int db = b.degree();
  if (a.degree() < db) {
    if (a.is_zero()) return RingElement(r);
    throw ring_error("inexact division");
  }
  std::vector<Integer> q(a.degree() - db + 1);
  const Integer& lead = bc.back();
  for (int i = a.degree(); i >= db; --i) {
    Integer c = reduce_scalar(r, rem[i]);
    if (c == 0) continue;
    Integer qi;
    if (r.kind() == ScalarKind::Int) {
      if (c % lead != 0) throw ring_error("inexact division");
      qi = c / lead;
    } else {
      qi = c;  // F2: lead = 1
    }
    q[i - db] = qi;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= qi * bc[j];
  }
  for (auto& v : rem)
    if (reduce_scalar(r, v) != 0) throw ring_error("inexact division");
  return RingElement::from_coeffs(r, std::move(q));
}

struct TateGroup {
  int parity = 0;
  GroupPresentation presentation;
  /// Module structure over the ring via a.y = a^2 y (char 2) or a.y = a y.
  std::string action;
};

/// Exponents 0..D, for families of the form F2[x].
inline std::vector<int> exponent_range(int lo, int hi, int step = 1) {
  std::vector<int> v;
  for (int e = lo; e <= hi; e += step) v.push_back(e);
  return v;
}

/// Tate cohomology of Z/2 acting trivially on R: parity 0 is R/2R, parity 1 is {a : 2a = 0}.
inline TateGroup tate_cohomology(const RingDescriptor& r, int parity, int degree_cap) {
  if (parity != 0 && parity != 1) throw ring_error("parity must be 0 or 1");
  if (r.is_poly() && r.kind() == ScalarKind::IntMod && r.mod_exponent() > 1)
    throw ring_error("Tate cohomology over " + r.name() + " is not supported");
  TateGroup t;
  t.parity = parity;
  const bool two_torsion_free = r.kind() == ScalarKind::Int;
  if (!r.is_poly()) {
    if (r.kind() == ScalarKind::Int)
      t.presentation = parity == 0 ? cyclic_group(2) : trivial_group();
    else
      t.presentation = cyclic_group(2);  // R/2R = Z/2 and {a : 2a = 0} = 2^{k-1}R = Z/2
    t.action = "a.y = a y";
    return t;
  }
  if (parity == 1 && two_torsion_free) {
    t.presentation = trivial_group();
  } else {
    t.presentation.families.push_back({"y", 2, exponent_range(0, degree_cap), degree_cap});
    t.presentation.name = "F2[x]";
  }
  t.action = parity == 0 ? "a.y = a^2 y; free of rank 2 with basis {1, x}" : "a.y = a^2 y";
  return t;
}

}  // namespace unil
