#pragma once

/// UNil_n(Z; Z, Z) and UNil_n(F2; F2, F2) assembled from the relative kernels and
/// cokernels of the J maps, with normal forms for elements of UNil_2(Z).

#include "unil/chain_bundle.hpp"

namespace unil {

struct UNilDescription {
  std::string coefficient;  // "Z" or "F2"
  int n = 0;
  int n_reduced = 0;        // n mod 4 (Z) or n mod 2 (F2)
  int degree_cap = 0;
  GroupDescription description;
  std::vector<std::string> provenance;
};

namespace detail {

inline int mod_pos(int n, int m) { return ((n % m) + m) % m; }

/// Names K_0 by its abstract type once the two order-2 families are confirmed.
inline void name_k0(GroupPresentation& k0, int D) {
  bool shape = k0.cyclic.empty() && k0.families.size() == 2;
  if (shape) {
    for (const auto& f : k0.families) shape &= f.order == 2;
    const auto& a = k0.families[0];
    const auto& d = k0.families[1];
    shape &= a.label == "2a" && a.exponents == exponent_range(1, D) && d.label == "2d" &&
             d.exponents == exponent_range(0, D);
  }
  if (shape) k0.name = "F2[x] x F2[x]";
}

}  // namespace detail

inline UNilDescription unil_group(const RingDescriptor& coeff, int n, int D) {
  if (coeff.is_poly() || (coeff.kind() != ScalarKind::Int && coeff.kind() != ScalarKind::GF2))
    throw ring_error("UNil is implemented for coefficients Z and F2");
  UNilDescription u;
  u.coefficient = coeff.name();
  u.n = n;
  u.degree_cap = D;
  if (coeff.kind() == ScalarKind::GF2) {
    u.n_reduced = detail::mod_pos(n, 2);
    if (u.n_reduced == 1) {
      u.description = GroupDescription::of(relative_kernel(JLevel::Char2, D));
      u.provenance.push_back("relative kernel of J over F2[x] -> F2, = ker(psi^2-1)/F2");
    } else {
      u.description = GroupDescription::of(relative_cokernel(JLevel::Char2, D));
      u.provenance.push_back("relative cokernel of J over F2[x] -> F2");
    }
    return u;
  }
  u.n_reduced = detail::mod_pos(n, 4);
  switch (u.n_reduced) {
    case 0:
      u.description = GroupDescription::of(relative_kernel(JLevel::J1, D));
      u.provenance.push_back("UNil_0 = K_1, relative kernel of J1");
      break;
    case 1:
      u.description = GroupDescription::of(relative_image(2, D));
      u.provenance.push_back("UNil_1 = I_2, relative image of J2");
      break;
    case 2:
      u.description = GroupDescription::of(relative_cokernel(JLevel::J0, D));
      u.provenance.push_back("UNil_2 = UNil_-2 = C_-1, relative cokernel of J0");
      break;
    case 3: {
      ExtensionDescription e;
      e.sub = relative_cokernel(JLevel::J1, D);
      e.quotient = relative_kernel(JLevel::J0, D);
      detail::name_k0(e.quotient, D);
      e.resolved = false;
      e.annotations = {"not finitely generated", "4 UNil_3(Z) = 0",
                       "quotient K_0 = {diag(2a, 2d)}: a in xF2[x], d in F2[x]"};
      u.description = GroupDescription::ext(std::move(e));
      u.provenance.push_back("UNil_3 = UNil_-1: 0 -> C_0 -> UNil_-1 -> K_0 -> 0");
      u.provenance.push_back("C_0 relative cokernel of J1, K_0 relative kernel of J0");
      break;
    }
  }
  return u;
}

/// Element of UNil_2(Z) = coker(psi^2 - 1 on F2[x]/F2): only odd exponents survive.
struct UNil2Element {
  RingElement normal;
  int truncation = 0;

  friend bool operator==(const UNil2Element& a, const UNil2Element& b) { return a.normal == b.normal; }
};

inline UNil2Element unil2_normalize(const RingElement& p, int D = 0) {
  RingElement nf = frobenius_coker_reduce(p, true);
  return {nf, std::max(D, p.degree())};
}

inline UNil2Element unil2_add(const UNil2Element& a, const UNil2Element& b) {
  RingElement s = a.normal + b.normal;
  return {frobenius_coker_reduce(s, true), std::max(a.truncation, b.truncation)};
}

/// 0 -> UNil_{n-1}(Z) -> Q_n(B^{Z[x]}, beta) -> Q_n(B^Z, beta) -> 0 for n in [-1, 2].
struct SequenceReport {
  int n = 0;
  int unil_index = 0;  // n - 1
  int degree_cap = 0;
  GroupDescription unil, middle, right;
  bool segment_specialization = false;  // Q_n of the full bundle equals that of B(0)
  int log2_unil = 0, log2_middle = 0, log2_right = 0;
  bool exact() const { return log2_unil + log2_right == log2_middle; }
};

inline SequenceReport nq_sequence(int n, int D) {
  if (n < -1 || n > 2) throw ring_error("nq_sequence covers n in [-1, 2]");
  const RingDescriptor Z = RingDescriptor::integers();
  SequenceReport s;
  s.n = n;
  s.unil_index = n - 1;
  s.degree_cap = D;
  s.unil = unil_group(Z, n - 1, D).description;
  s.middle = twisted_q_full(Z.with_x(), n, D);
  s.right = twisted_q_full(Z, n, D);
  s.segment_specialization = n == -1 || n == 0;
  auto lg = [](const GroupDescription& g) {
    auto v = g.log2_order();
    if (!v) throw ring_error("sequence term is not a finite 2-group at this degree cap");
    return *v;
  };
  s.log2_unil = lg(s.unil);
  s.log2_middle = lg(s.middle);
  s.log2_right = lg(s.right);
  return s;
}

}  // namespace unil
