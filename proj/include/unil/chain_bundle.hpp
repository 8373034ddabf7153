#pragma once

/// Universal chain bundles over F2, F2[x], Z, Z[x]; Wu classes; the J maps on the
/// degree-0 segment and their kernels and cokernels; b^2 + d + x d^2 decomposition and
/// Frobenius-cokernel normal forms; closed forms for the Q-groups of the segment.

#include "unil/abelian.hpp"
#include "unil/forms.hpp"
#include "unil/group.hpp"
#include "unil/nilforms.hpp"

#include <set>
#include <sstream>

namespace unil {

enum class BundleFamily { Char2Perfect, OrderTwoFree };

inline std::string family_name(BundleFamily f) {
  return f == BundleFamily::Char2Perfect ? "Char2Perfect" : "OrderTwoFree";
}

struct ChainBundle {
  RingDescriptor ring;
  BundleFamily family = BundleFamily::OrderTwoFree;
  std::size_t rank = 1;
  Matrix X;  // beta_{-4i}; the other components of beta follow from the period data

  /// Coefficient ring of the Tate group H^0(Z/2; A) = A/2A.
  RingDescriptor tate_ring() const {
    return ring.is_poly() ? RingDescriptor::poly(RingDescriptor::gf2()) : RingDescriptor::gf2();
  }
  /// d : B_i -> B_{i-1}. Every B_i is A^r; only odd-to-even maps are nonzero (x2).
  Matrix differential(int i) const {
    Matrix d(ring, rank, rank);
    if (family == BundleFamily::OrderTwoFree && (i & 1)) d = Matrix::identity(ring, rank).times(2);
    return d;
  }
  std::string period_description() const {
    if (family == BundleFamily::Char2Perfect) return "B_i = A' for all i, d = 0";
    return "B_{2i+1} -(x2)-> B_{2i}, d = 0 out of even degrees";
  }
};

inline ChainBundle build_universal_bundle(const RingDescriptor& r) {
  const bool f2 = r.kind() == ScalarKind::GF2;
  const bool z = r.kind() == ScalarKind::Int;
  if (!f2 && !z) throw ring_error("no universal chain bundle implemented over " + r.name());
  ChainBundle b;
  b.ring = r;
  b.family = f2 ? BundleFamily::Char2Perfect : BundleFamily::OrderTwoFree;
  if (r.is_poly()) {
    b.rank = 2;
    b.X = Matrix::diagonal({RingElement::one(r), RingElement::x(r)}, r);
  } else {
    b.rank = 1;
    b.X = Matrix::identity(r, 1);
  }
  return b;
}

struct BundleSegment {
  ChainBundle parent;
  int index = 0;
  int bottom_degree = 0;  // complex.ranks[k] sits in degree bottom_degree + k
  FreeComplex complex;
};

/// B(i): B_{2i+1} -(x2)-> B_{2i} for OrderTwoFree; the single module B_i in char 2.
inline BundleSegment bundle_segment(const ChainBundle& b, int i) {
  BundleSegment s;
  s.parent = b;
  s.index = i;
  s.complex.ring = b.ring;
  if (b.family == BundleFamily::OrderTwoFree) {
    s.bottom_degree = 2 * i;
    s.complex.ranks = {b.rank, b.rank};
    s.complex.d = {Matrix(b.ring, 0, b.rank), b.differential(1)};
  } else {
    s.bottom_degree = i;
    s.complex.ranks = {b.rank};
    s.complex.d = {Matrix(b.ring, 0, b.rank)};
  }
  return s;
}

inline RingElement reduce_mod2(const RingElement& e, const RingDescriptor& target) {
  std::vector<Integer> c;
  for (const auto& v : e.coeffs()) {
    Integer m = v % 2;
    c.push_back(m < 0 ? -m : m);
  }
  return RingElement::from_coeffs(target, std::move(c));
}

/// v_r(beta)(h) = <beta_{-2r}, h (x) h> = h^t X h in H^r(Z/2; A).
inline RingElement wu_class(const ChainBundle& b, int degree, const Matrix& h) {
  if (!(h.ring() == b.ring) || h.rows() != b.rank || h.cols() != 1)
    throw ring_error("wu_class: expected a column of length " + std::to_string(b.rank) + " over " + b.ring.name());
  if (!(b.differential(degree) * h).is_zero()) throw ring_error("wu_class: input is not a cycle");
  return reduce_mod2((h.transpose() * b.X * h)(0, 0), b.tate_ring());
}

enum class JLevel { J0, J1, Char2 };

inline std::string level_name(JLevel l) {
  switch (l) {
    case JLevel::J0: return "J0";
    case JLevel::J1: return "J1";
    case JLevel::Char2: return "C2";
  }
  return "?";
}

inline JLevel parse_level(const std::string& s) {
  if (s == "J0") return JLevel::J0;
  if (s == "J1") return JLevel::J1;
  if (s == "C2" || s == "Char2") return JLevel::Char2;
  throw ring_error("unknown level '" + s + "' (expected J0, J1 or C2)");
}

/// Quotient of Sym_r(A) on which the level's J map is defined.
inline Denominator level_domain(JLevel l) {
  switch (l) {
    case JLevel::J0: return Denominator::TwoQuad;
    case JLevel::J1: return Denominator::TwoSym;
    case JLevel::Char2: return Denominator::None;
  }
  return Denominator::None;
}

inline void require_level(const ChainBundle& b, JLevel l) {
  const bool c2 = b.family == BundleFamily::Char2Perfect;
  if (c2 != (l == JLevel::Char2))
    throw ring_error("level " + level_name(l) + " is not defined over " + b.ring.name());
}

/// The formula on any symmetric lift: M - MXM (OrderTwoFree) or MXM - M (char 2), mod Quad.
inline SymQuotientElem j_map_unchecked(const ChainBundle& b, const Matrix& M) {
  Matrix MXM = M * b.X * M;
  Matrix out = b.family == BundleFamily::OrderTwoFree ? M - MXM : MXM - M;
  return sym_quotient_reduce(out, Denominator::Quad);
}

inline SymQuotientElem j_map(const RingDescriptor& ring, JLevel level, const Matrix& M) {
  ChainBundle b = build_universal_bundle(ring);
  require_level(b, level);
  if (!(M.ring() == ring) || M.rows() != b.rank || M.cols() != b.rank)
    throw ring_error("j_map: expected a symmetric " + std::to_string(b.rank) + "x" + std::to_string(b.rank) +
                     " matrix over " + ring.name());
  if (!is_eps_symmetric(M, 1)) throw ring_error("j_map: matrix is not symmetric");
  if (!is_canonical(M, level_domain(level)))
    throw ring_error("j_map: entry outside the canonical range of Sym/" + denominator_name(level_domain(level)));
  return j_map_unchecked(b, M);
}

// ---------------------------------------------------------------------------------------
// F2[x] helpers

inline RingDescriptor f2x() { return RingDescriptor::poly(RingDescriptor::gf2()); }

inline void require_f2x(const RingElement& p, const char* what) {
  if (!(p.ring() == f2x())) throw ring_error(std::string(what) + ": expected an element of F2[x]");
}

struct SquareDecomposition {
  RingElement b, d;
};

/// The unique (b, d) with p = b^2 + d + x d^2. Coefficientwise: a_{2i+1} = d_{2i+1} + d_i and
/// a_{2i} = b_i + d_{2i}; solved from the top degree down so that d has finite support.
inline SquareDecomposition square_decompose(const RingElement& p) {
  require_f2x(p, "square_decompose");
  const int n = p.degree();
  std::vector<Integer> d(std::max(n + 1, 0)), b(std::max(n + 1, 0));
  auto dd = [&](int j) -> Integer { return j <= n ? d[j] : Integer(0); };
  for (int i = n; i >= 0; --i) {
    d[i] = (dd(2 * i + 1) + p.coeff(2 * i + 1)) % 2;
    b[i] = (dd(2 * i) + p.coeff(2 * i)) % 2;
  }
  return {RingElement::from_coeffs(f2x(), b), RingElement::from_coeffs(f2x(), d)};
}

struct FrobeniusReduction {
  RingElement normal;    // a_{2i} = 0 for i > 0 (and a_0 = 0 with modConstants)
  RingElement preimage;  // p - normal = (psi^2 - 1)(preimage) (+ a constant with modConstants)
};

inline FrobeniusReduction frobenius_coker_reduce_with_preimage(const RingElement& p, bool mod_constants) {
  require_f2x(p, "frobenius_coker_reduce");
  std::vector<Integer> c(p.coeffs());
  std::vector<Integer> q(c.size() / 2 + 1);
  for (int e = static_cast<int>(c.size()) - 1; e > 0; --e) {
    if (e % 2 || c[e] == 0) continue;
    c[e] = 0;
    c[e / 2] = 1 - c[e / 2];
    q[e / 2] = 1 - q[e / 2];
  }
  if (mod_constants && !c.empty()) c[0] = 0;
  return {RingElement::from_coeffs(f2x(), c), RingElement::from_coeffs(f2x(), q)};
}

inline RingElement frobenius_coker_reduce(const RingElement& p, bool mod_constants) {
  return frobenius_coker_reduce_with_preimage(p, mod_constants).normal;
}

// ---------------------------------------------------------------------------------------
// Presentations and names

namespace detail {

inline std::vector<int> odd_upto(int D) { return exponent_range(1, D, 2); }

inline std::string family_token(const PolyFamily& f) {
  const int D = f.truncation;
  std::vector<int> zero_odd{0};
  for (int e : odd_upto(D)) zero_odd.push_back(e);
  if (f.order == 2) {
    if (f.exponents == odd_upto(D)) return "coker(psi^2-1 on F2[x]/F2)";
    if (f.exponents == zero_odd) return "coker(psi^2-1 on F2[x])";
  }
  std::string base = f.order == 2 ? "F2[x]" : "Z" + std::to_string(f.order) + "[x]";
  if (f.exponents == exponent_range(0, D)) return base;
  if (f.exponents == exponent_range(1, D)) return "x" + base;
  std::ostringstream os;
  os << f.label << "{";
  for (std::size_t i = 0; i < f.exponents.size(); ++i) os << (i ? "," : "") << f.exponents[i];
  os << "}";
  return os.str();
}

}  // namespace detail

/// Human-readable name from the structure.
inline void describe(GroupPresentation& g) {
  g.canonicalize();
  if (g.is_trivial()) {
    g.name = "0";
    return;
  }
  std::vector<std::string> tok;
  for (const auto& c : g.cyclic) tok.push_back(c == 0 ? "Z" : "Z/" + c.str());
  for (const auto& f : g.families)
    if (!f.exponents.empty()) tok.push_back(detail::family_token(f));
  std::string s;
  for (std::size_t i = 0; i < tok.size(); ++i) s += (i ? " x " : "") + tok[i];
  g.name = s;
}

// ---------------------------------------------------------------------------------------
// The J map as a homomorphism of finite 2-groups on degree-capped coordinates

struct JHom {
  ChainBundle bundle;
  JLevel level = JLevel::J0;
  int degree_cap = 0;
  fin::Hom hom;
};

namespace detail {

inline std::vector<std::pair<std::size_t, std::size_t>> sym_slots(std::size_t r) {
  if (r == 1) return {{0, 0}};
  return {{0, 0}, {0, 1}, {1, 1}};
}

inline std::string slot_name(std::size_t r, std::size_t i, std::size_t j) {
  if (r == 1) return "a";
  if (i != j) return "b";
  return i == 0 ? "a" : "d";
}

inline std::string diag_name(std::size_t r, std::size_t i) { return r == 1 ? "p" : (i == 0 ? "p" : "q"); }

}  // namespace detail

/// Y = domain quotient of Sym_r(A) on coordinates (entry, exponent <= D).
inline fin::CoordSpace j_domain_space(const ChainBundle& b, JLevel level, int D) {
  const int top = b.ring.is_poly() ? D : 0;
  std::vector<fin::Coord> c;
  for (auto [i, j] : detail::sym_slots(b.rank)) {
    int lo = 1;
    if (level == JLevel::J0 && i == j) lo = 2;  // diagonal of Sym/2Quad lives in Z/4
    for (int e = 0; e <= top; ++e) c.push_back({detail::slot_name(b.rank, i, j), e, lo});
  }
  return fin::CoordSpace(std::move(c));
}

/// Y' = Sym_r(A)/Quad_r(A): diagonal entries mod 2, exponents up to 2D + 1.
inline fin::CoordSpace j_codomain_space(const ChainBundle& b, int D) {
  const int top = b.ring.is_poly() ? 2 * D + 1 : 0;
  std::vector<fin::Coord> c;
  for (std::size_t i = 0; i < b.rank; ++i)
    for (int e = 0; e <= top; ++e) c.push_back({detail::diag_name(b.rank, i), e, 1});
  return fin::CoordSpace(std::move(c));
}

/// Generator matrix of a domain coordinate: x^e in entries (i, j) and (j, i).
inline Matrix coordinate_matrix(const ChainBundle& b, const fin::Coord& c) {
  Matrix M(b.ring, b.rank, b.rank);
  for (auto [i, j] : detail::sym_slots(b.rank)) {
    if (detail::slot_name(b.rank, i, j) != c.component) continue;
    RingElement m = RingElement::monomial(b.ring, 1, static_cast<std::size_t>(c.exponent));
    M(i, j) = m;
    M(j, i) = m;
  }
  return M;
}

inline fin::Vec codomain_vector(const ChainBundle& b, const fin::CoordSpace& cod, const Matrix& rep) {
  fin::Vec v(cod.size());
  for (std::size_t i = 0; i < b.rank; ++i) {
    const auto& e = rep(i, i);
    for (int k = 0; k <= e.degree(); ++k) {
      Integer c = e.coeff(static_cast<std::size_t>(k)) % 2;
      if (c == 0) continue;
      auto at = cod.find(detail::diag_name(b.rank, i), k);
      if (!at) throw ring_error("J map image exceeds the coordinate window");
      v[*at] = 1;
    }
  }
  return v;
}

inline JHom j_hom(const RingDescriptor& ring, JLevel level, int D) {
  JHom h;
  h.bundle = build_universal_bundle(ring);
  require_level(h.bundle, level);
  h.level = level;
  h.degree_cap = D;
  h.hom.dom = j_domain_space(h.bundle, level, D);
  h.hom.cod = j_codomain_space(h.bundle, D);
  for (const auto& c : h.hom.dom.coords())
    h.hom.images.push_back(codomain_vector(h.bundle, h.hom.cod, j_map_unchecked(h.bundle, coordinate_matrix(h.bundle, c)).rep));
  return h;
}

/// Column priority for cokernel normal forms: q before p, each from the top degree down.
/// Non-pivot coordinates of degree <= D form the basis.
inline std::vector<std::size_t> coker_priority(const fin::CoordSpace& cod) {
  std::vector<std::size_t> order = fin::identity_order(cod.size());
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (cod[x].component != cod[y].component) return cod[x].component > cod[y].component;
    return cod[x].exponent > cod[y].exponent;
  });
  return order;
}

struct KerCoker {
  JHom j;
  GroupPresentation kernel, cokernel;
  std::vector<fin::Element> kernel_generators;
  std::vector<fin::Vec> image_echelon;       // reduced echelon basis of im J (mod 2)
  std::vector<std::size_t> priority;          // column order of the echelon basis
  std::vector<std::size_t> coker_basis;       // codomain coordinates spanning coker in degree <= D

  fin::Vec normal_form(const fin::Vec& y) const { return fin::reduce_gf2(y, image_echelon, priority); }
};

inline KerCoker ker_coker_j(const RingDescriptor& ring, JLevel level, int D) {
  if (D < 0) throw ring_error("degree cap must be non-negative");
  KerCoker r;
  r.j = j_hom(ring, level, D);
  const auto& H = r.j.hom;
  r.kernel_generators = fin::kernel(H, fin::identity_order(H.dom.size()));
  r.kernel = fin::present(H.dom, r.kernel_generators, D).first;
  describe(r.kernel);

  r.priority = coker_priority(H.cod);
  r.image_echelon = fin::rref_gf2(H.images, r.priority);
  std::set<std::size_t> pivots;
  for (const auto& row : r.image_echelon) pivots.insert(fin::leading_column(row, r.priority));
  std::vector<fin::Element> basis;
  for (std::size_t i = 0; i < H.cod.size(); ++i) {
    if (pivots.count(i) || H.cod[i].exponent > D) continue;
    r.coker_basis.push_back(i);
    fin::Element e;
    e.coords.assign(H.cod.size(), 0);
    e.coords[i] = 1;
    e.log_order = 1;
    basis.push_back(std::move(e));
  }
  r.cokernel = fin::present(H.cod, basis, D).first;
  describe(r.cokernel);
  return r;
}

// ---------------------------------------------------------------------------------------
// Relative groups for the augmentation A[x] -> A (A = Z or F2). The augmentation keeps
// the constant coefficient of the first diagonal entry: a_0 on the domain, p_0 on the
// codomain.

inline RingDescriptor base_ring_for(JLevel level) {
  return level == JLevel::Char2 ? RingDescriptor::gf2() : RingDescriptor::integers();
}

/// K = ker(J over A[x]) intersected with ker(augmentation).
inline GroupPresentation relative_kernel(JLevel level, int D) {
  const RingDescriptor base = base_ring_for(level);
  JHom jp = j_hom(base.with_x(), level, D);
  JHom jb = j_hom(base, level, D);
  std::vector<fin::Coord> cod = jp.hom.cod.coords();
  const std::size_t offset = cod.size();
  for (auto c : jb.hom.dom.coords()) {
    c.component = "eta." + c.component;
    cod.push_back(c);
  }
  fin::Hom h{jp.hom.dom, fin::CoordSpace(cod), {}};
  for (std::size_t j = 0; j < jp.hom.dom.size(); ++j) {
    fin::Vec v = jp.hom.images[j];
    v.resize(cod.size());
    const auto& c = jp.hom.dom[j];
    if (c.exponent == 0)
      if (auto at = jb.hom.dom.find(c.component, 0)) v[offset + *at] = 1;
    h.images.push_back(std::move(v));
  }
  GroupPresentation g = fin::present(h.dom, fin::kernel(h, fin::identity_order(h.dom.size())), D).first;
  describe(g);
  return g;
}

/// C = ker(coker J over A[x] -> coker J over A), on classes of degree <= D.
inline GroupPresentation relative_cokernel(JLevel level, int D) {
  const RingDescriptor base = base_ring_for(level);
  KerCoker kp = ker_coker_j(base.with_x(), level, D);
  KerCoker kb = ker_coker_j(base, level, D);
  const auto& cod = kp.j.hom.cod;
  // the map to the base cokernel reads the p_0 coefficient of a normal form
  const std::size_t p0 = *cod.find("p", 0);
  const bool base_nonzero = !kb.coker_basis.empty();
  std::vector<fin::Vec> gens;
  for (std::size_t i = 0; i < cod.size(); ++i) {
    if (cod[i].exponent > D) continue;
    fin::Vec y(cod.size());
    y[i] = 1;
    fin::Vec nf = kp.normal_form(y);
    bool zero = true, beyond = false;
    for (std::size_t k = 0; k < nf.size(); ++k)
      if (nf[k]) {
        zero = false;
        beyond |= cod[k].exponent > D;
      }
    if (!zero && !beyond) gens.push_back(std::move(nf));
  }
  std::vector<std::size_t> order;
  if (base_nonzero) order.push_back(p0);
  for (auto it = kp.coker_basis.rbegin(); it != kp.coker_basis.rend(); ++it)
    if (*it != p0 || !base_nonzero) order.push_back(*it);
  for (std::size_t i = 0; i < cod.size(); ++i)
    if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);
  std::vector<fin::Element> els;
  for (const auto& row : fin::rref_gf2(gens, order))
    if (!base_nonzero || fin::leading_column(row, order) != p0) els.push_back({row, 1});
  GroupPresentation g = fin::present(cod, els, D).first;
  describe(g);
  return g;
}

/// I_n = ker(im J^n over Z[x] -> im J^n over Z). Only n >= 2 is reachable here, where
/// Q^n of the segment vanishes and so does the image.
inline GroupPresentation relative_image(int n, int D);

// ---------------------------------------------------------------------------------------
// Closed forms for the degree-0 segment B^A(0), A = Z or Z[x]

enum class QFlavor { Sym, Quad, Hyper };

inline std::string flavor_name(QFlavor f) {
  switch (f) {
    case QFlavor::Sym: return "sym";
    case QFlavor::Quad: return "quad";
    case QFlavor::Hyper: return "hyper";
  }
  return "?";
}

inline QFlavor parse_flavor(const std::string& s) {
  if (s == "sym") return QFlavor::Sym;
  if (s == "quad") return QFlavor::Quad;
  if (s == "hyper") return QFlavor::Hyper;
  throw ring_error("unknown flavor '" + s + "' (expected sym, quad or hyper)");
}

/// Sym_r(A)/(denominator) as a presented group on degree <= D coordinates.
inline GroupPresentation sym_quotient_group(const RingDescriptor& A, Denominator den, int D) {
  ChainBundle b = build_universal_bundle(A);
  if (b.family != BundleFamily::OrderTwoFree) throw ring_error("segment Q-groups are implemented over Z and Z[x]");
  auto [dm, om] = denominator_moduli(den);
  std::vector<fin::Coord> coords;
  const int top = A.is_poly() ? D : 0;
  for (auto [i, j] : detail::sym_slots(b.rank)) {
    int m = i == j ? dm : om;
    if (m <= 1) continue;
    for (int e = 0; e <= top; ++e) coords.push_back({detail::slot_name(b.rank, i, j), e, valuation2(Integer(m))});
  }
  fin::CoordSpace Y(coords);
  std::vector<fin::Element> gens;
  for (std::size_t i = 0; i < Y.size(); ++i) {
    fin::Element e;
    e.coords.assign(Y.size(), 0);
    e.coords[i] = 1;
    e.log_order = Y[i].log_order;
    gens.push_back(std::move(e));
  }
  GroupPresentation g = fin::present(Y, gens, D).first;
  describe(g);
  if (A.is_poly()) {
    std::string r = std::to_string(b.rank), a = A.name();
    std::string q = den == Denominator::Quad ? "Quad_" : den == Denominator::TwoQuad ? "2Quad_" : "2Sym_";
    g.name = "Sym_" + r + "(" + a + ")/" + q + r + "(" + a + ")";
  }
  return g;
}

inline GroupPresentation segment_q_groups(const RingDescriptor& A, int n, QFlavor flavor, int D) {
  switch (flavor) {
    case QFlavor::Hyper: return sym_quotient_group(A, Denominator::Quad, D);
    case QFlavor::Sym:
      if (n <= -1) return sym_quotient_group(A, Denominator::Quad, D);
      if (n == 0) return sym_quotient_group(A, Denominator::TwoQuad, D);
      if (n == 1) return sym_quotient_group(A, Denominator::TwoSym, D);
      return trivial_group();
    case QFlavor::Quad:
      if (A.is_poly()) throw ring_error("quadratic Q-groups of the segment are implemented over Z only");
      if (A.kind() != ScalarKind::Int) throw ring_error("segment Q-groups are implemented over Z and Z[x]");
      return n >= 0 ? cyclic_group(2) : trivial_group();
  }
  throw ring_error("unsupported flavor");
}

// ---------------------------------------------------------------------------------------
// J^m on the segment for all m, and the twisted quadratic groups through the sequence
// 0 -> coker J^{m+1} -> Q_m(B, beta) -> ker J^m -> 0.

inline void require_order_two_free(const RingDescriptor& A) {
  if (build_universal_bundle(A).family != BundleFamily::OrderTwoFree)
    throw ring_error("the segment sequence is implemented over Z and Z[x]");
}

inline JLevel level_for_degree(int m) { return m == 0 ? JLevel::J0 : JLevel::J1; }

/// J^m for m <= -1 is injective; over Z it is then an isomorphism of groups of order 2.
inline GroupPresentation j_kernel(const RingDescriptor& A, int m, int D) {
  require_order_two_free(A);
  if (m == 0 || m == 1) return ker_coker_j(A, level_for_degree(m), D).kernel;
  return trivial_group();
}

inline GroupPresentation j_cokernel(const RingDescriptor& A, int m, int D) {
  require_order_two_free(A);
  if (m == 0 || m == 1) return ker_coker_j(A, level_for_degree(m), D).cokernel;
  if (m >= 2) return sym_quotient_group(A, Denominator::Quad, D);
  if (!A.is_poly()) return trivial_group();
  throw ring_error("coker J^m for m <= -1 is not implemented over " + A.name());
}

inline GroupPresentation relative_image(int n, int D) {
  // the domain Q^n of the segment vanishes for n >= 2, so both images are zero
  if (n < 2) throw ring_error("relative image is implemented for n >= 2");
  GroupPresentation dom = segment_q_groups(RingDescriptor::integers().with_x(), n, QFlavor::Sym, D);
  GroupPresentation g = dom.is_trivial() ? trivial_group() : dom;
  describe(g);
  return g;
}

inline GroupDescription extension_or_group(GroupPresentation sub, GroupPresentation quotient) {
  if (sub.is_trivial()) return GroupDescription::of(std::move(quotient));
  if (quotient.is_trivial()) return GroupDescription::of(std::move(sub));
  ExtensionDescription e;
  e.sub = std::move(sub);
  e.quotient = std::move(quotient);
  return GroupDescription::ext(std::move(e));
}

inline GroupDescription twisted_q_segment(const RingDescriptor& A, int m, int D) {
  return extension_or_group(j_cokernel(A, m + 1, D), j_kernel(A, m, D));
}

/// Q_m of the full universal bundle for m = -1..2, reduced to the degree-0 segment.
inline GroupDescription twisted_q_full(const RingDescriptor& A, int m, int D) {
  require_order_two_free(A);
  if (m == -1 || m == 0) return twisted_q_segment(A, m, D);
  if (m == 1) return GroupDescription::of(j_kernel(A, 1, D));
  if (m == 2) return GroupDescription::of(trivial_group());
  throw ring_error("Q_m of the full bundle is implemented for m in [-1, 2]");
}

// ---------------------------------------------------------------------------------------
// The reduction lemma for F2[x]: on Y/X -> Y'/X' with X = first diagonal entry, the J map
// reads (b, d) -> b^2 + d + x d^2. Checks it is a bijection between pairs of degree <= D
// and polynomials of degree <= 2D + 1.

struct ReductionCheck {
  std::size_t pairs = 0, targets = 0, distinct = 0, inverted = 0;
  bool ok() const { return pairs == targets && distinct == pairs && inverted == pairs; }
};

inline ReductionCheck check_f2x_reduction(int D) {
  if (D < 0 || D > 5) throw ring_error("reduction check limited to 0 <= D <= 5");
  const RingDescriptor R = f2x();
  ChainBundle b = build_universal_bundle(R);
  auto poly = [&](unsigned bits, int n) {
    std::vector<Integer> c(n);
    for (int i = 0; i < n; ++i) c[i] = (bits >> i) & 1u;
    return RingElement::from_coeffs(R, c);
  };
  ReductionCheck rc;
  rc.targets = std::size_t{1} << (2 * D + 2);
  std::set<std::vector<Integer>> seen;
  for (unsigned bb = 0; bb < (1u << (D + 1)); ++bb)
    for (unsigned db = 0; db < (1u << (D + 1)); ++db) {
      RingElement B = poly(bb, D + 1), Dd = poly(db, D + 1);
      Matrix M(R, 2, 2);
      M(0, 1) = B;
      M(1, 0) = B;
      M(1, 1) = Dd;
      RingElement q = j_map_unchecked(b, M).rep(1, 1);
      ++rc.pairs;
      if (seen.insert(q.coeffs()).second) ++rc.distinct;
      auto sd = square_decompose(q);
      if (sd.b == B && sd.d == Dd) ++rc.inverted;
    }
  return rc;
}

}  // namespace unil
