#pragma once

/// Brute-force Q-groups of small chain complexes over Z and Z/2^k: the finite pieces of
/// W^%C, W-hat^%C and W_%C are assembled explicitly and their homology is read off
/// from Smith normal forms. Twisted quadratic groups of bundle segments are obtained by
/// orbit enumeration over F2 and through the J-map exact sequence over Z.

#include "unil/chain_bundle.hpp"

#include <array>
#include <map>
#include <set>

namespace unil {

/// Complex of free modules in degrees 0..ranks.size()-1 over Z or Z/2^k.
using FinChainComplex = FreeComplex;

struct IntSmith {
  Matrix D, U, V;
  std::vector<Integer> diagonal;  // nonzero diagonal entries, each dividing the next
};

inline IntSmith smith_normal_form(const Matrix& M) {
  if (M.ring().is_poly()) throw ring_error("smith_normal_form: scalar ring expected");
  SmithForm s = smith_form(M);
  IntSmith r{s.D, s.U, s.V, {}};
  for (std::size_t i = 0; i < s.rank; ++i) r.diagonal.push_back(s.D(i, i).value());
  return r;
}

/// Z-module with generators and relations; factors sorted, each dividing the next, 0 for Z.
struct ZModulePresentation {
  std::size_t generators = 0;
  Matrix relations;  // generators x relations, over Z
  std::vector<Integer> invariant_factors;

  GroupPresentation group() const {
    GroupPresentation g;
    for (const auto& f : invariant_factors)
      if (f != 1) g.cyclic.push_back(f);
    std::stable_partition(g.cyclic.begin(), g.cyclic.end(), [](const Integer& c) { return c != 0; });
    describe(g);
    return g;
  }
};

inline ZModulePresentation present_quotient(const Matrix& relations) {
  ZModulePresentation p;
  p.generators = relations.rows();
  p.relations = relations;
  IntSmith s = smith_normal_form(relations);
  for (const auto& d : s.diagonal) p.invariant_factors.push_back(abs(d));
  for (std::size_t i = s.diagonal.size(); i < p.generators; ++i) p.invariant_factors.push_back(0);
  return p;
}

/// H = {x : g x = 0 mod N} / (im f + N Z^a) for maps f : Z^b -> Z^a, g : Z^a -> Z^c.
/// N = 0 means plain Z.
inline ZModulePresentation homology_mod(const Matrix& f, const Matrix& g, const Integer& N) {
  const RingDescriptor Z = RingDescriptor::integers();
  const std::size_t a = f.rows();
  if (g.cols() != a) throw ring_error("homology: shape mismatch");
  Matrix K;
  if (N == 0) {
    K = g.rows() ? kernel_basis(g) : Matrix::identity(Z, a);
  } else {
    Matrix big = hstack(g, Matrix::identity(Z, g.rows()).times(N));
    Matrix kb = g.rows() ? kernel_basis(big) : Matrix::identity(Z, a);
    K = column_echelon(kb.submatrix(0, 0, a, kb.cols()));
  }
  Matrix I = N == 0 ? f : hstack(f, Matrix::identity(Z, a).times(N));
  if (K.cols() == 0) return present_quotient(Matrix(Z, 0, I.cols()));
  auto coeffs = solve(K, I);
  if (!coeffs) throw ring_error("homology: boundaries are not cycles (d^2 != 0)");
  return present_quotient(*coeffs);
}

namespace detail {

/// C (x) C with d(x (x) y) = dx (x) y + (-1)^p x (x) dy and T(x (x) y) = eps (-1)^{pq} y (x) x.
struct TensorSquare {
  int top = 0;                                     // supported in degrees 0..top
  std::vector<std::vector<std::array<std::size_t, 4>>> basis;  // per degree: (p, i, q, j)
  std::vector<Matrix> d;                           // d[k] : M_k -> M_{k-1}
  std::vector<Matrix> T;                           // T[k] : M_k -> M_k

  std::size_t dim(int k) const { return k >= 0 && k <= top ? basis[k].size() : 0; }
};

inline TensorSquare tensor_square(const FinChainComplex& C, int eps) {
  const RingDescriptor Z = RingDescriptor::integers();
  const int L = static_cast<int>(C.ranks.size()) - 1;
  TensorSquare M;
  M.top = 2 * L;
  M.basis.resize(M.top + 1);
  std::map<std::array<std::size_t, 4>, std::size_t> index;
  for (int k = 0; k <= M.top; ++k)
    for (int p = 0; p <= L; ++p) {
      int q = k - p;
      if (q < 0 || q > L) continue;
      for (std::size_t i = 0; i < C.ranks[p]; ++i)
        for (std::size_t j = 0; j < C.ranks[q]; ++j) {
          std::array<std::size_t, 4> b{static_cast<std::size_t>(p), i, static_cast<std::size_t>(q), j};
          index[b] = M.basis[k].size();
          M.basis[k].push_back(b);
        }
    }
  auto entry = [&](int p, std::size_t a, std::size_t i) -> Integer { return C.d[p](a, i).value(); };
  M.d.resize(M.top + 1);
  M.T.resize(M.top + 1);
  for (int k = 0; k <= M.top; ++k) {
    M.d[k] = Matrix(Z, M.dim(k - 1), M.dim(k));
    M.T[k] = Matrix(Z, M.dim(k), M.dim(k));
    for (std::size_t c = 0; c < M.basis[k].size(); ++c) {
      auto [p, i, q, j] = M.basis[k][c];
      if (p > 0)
        for (std::size_t a = 0; a < C.ranks[p - 1]; ++a) {
          Integer v = entry(static_cast<int>(p), a, i);
          if (v != 0) M.d[k](index.at({p - 1, a, q, j}), c) += RingElement::scalar(Z, v);
        }
      if (q > 0)
        for (std::size_t b = 0; b < C.ranks[q - 1]; ++b) {
          Integer v = entry(static_cast<int>(q), b, j);
          if (v == 0) continue;
          if (p % 2) v = -v;
          M.d[k](index.at({p, i, q - 1, b}), c) += RingElement::scalar(Z, v);
        }
      int sign = ((p * q) % 2 ? -1 : 1) * eps;
      M.T[k](index.at({q, j, p, i}), c) = RingElement::scalar(Z, sign);
    }
  }
  return M;
}

struct Block {
  int s = 0, k = 0;
  std::size_t offset = 0, size = 0;
};

inline std::vector<Block> blocks(const TensorSquare& M, QFlavor flavor, int n) {
  std::vector<Block> out;
  std::size_t off = 0;
  for (int k = 0; k <= M.top; ++k) {
    int s = flavor == QFlavor::Quad ? n - k : k - n;  // W_%: e_s (x) M_{n-s}; W^%: phi_s in M_{n+s}
    if (flavor != QFlavor::Hyper && s < 0) continue;
    Block b{s, k, off, M.dim(k)};
    off += b.size;
    out.push_back(b);
  }
  return out;
}

inline std::size_t total(const std::vector<Block>& bs) {
  std::size_t t = 0;
  for (const auto& b : bs) t += b.size;
  return t;
}

/// Differential of the assembled complex from degree n to n - 1.
inline Matrix assembled_d(const TensorSquare& M, QFlavor flavor, int n) {
  const RingDescriptor Z = RingDescriptor::integers();
  auto src = blocks(M, flavor, n), dst = blocks(M, flavor, n - 1);
  Matrix D(Z, total(dst), total(src));
  auto find = [&](int s) -> const Block* {
    for (const auto& b : dst)
      if (b.s == s) return &b;
    return nullptr;
  };
  for (const auto& b : src) {
    if (b.size == 0) continue;
    const Matrix one_plus_T = Matrix::identity(Z, b.size) + ((b.s % 2 == 0) ? M.T[b.k] : -M.T[b.k]);
    if (flavor == QFlavor::Quad) {
      // d(e_s (x) m) = e_{s-1} (x) (1 + (-1)^s T) m + (-1)^s e_s (x) dm
      if (const Block* t = find(b.s - 1); t && t->size) D.set_block(t->offset, b.offset, one_plus_T);
      if (const Block* t = find(b.s); t && t->size) {
        Matrix dm = M.d[b.k];
        D.set_block(t->offset, b.offset, b.s % 2 ? -dm : dm);
      }
    } else {
      // (d phi)_s = d phi_s - (-1)^n (1 + (-1)^s T) phi_{s-1}
      if (const Block* t = find(b.s); t && t->size) D.set_block(t->offset, b.offset, M.d[b.k]);
      if (const Block* t = find(b.s + 1); t && t->size) {
        const int s1 = b.s + 1;
        Matrix c = Matrix::identity(Z, b.size) + ((s1 % 2 == 0) ? M.T[b.k] : -M.T[b.k]);
        D.set_block(t->offset, b.offset, n % 2 ? c : -c);
      }
    }
  }
  return D;
}

}  // namespace detail

inline Integer complex_modulus(const FinChainComplex& C) {
  const auto& R = C.ring;
  if (R.is_poly()) throw ring_error("oracle: polynomial rings are not supported");
  return R.kind() == ScalarKind::Int ? Integer(0) : R.characteristic();
}

inline void validate_fin_complex(const FinChainComplex& C) {
  complex_modulus(C);
  if (C.ranks.empty() || C.ranks.size() > 4) throw ring_error("oracle: support must lie within 4 degrees");
  if (C.d.size() != C.ranks.size()) throw ring_error("oracle: one differential per degree required");
  for (std::size_t p = 1; p < C.ranks.size(); ++p)
    if (C.d[p].rows() != C.ranks[p - 1] || C.d[p].cols() != C.ranks[p]) throw ring_error("oracle: differential shape");
  if (!C.d_squared_zero()) throw ring_error("oracle: d^2 != 0");
}

/// Q^n (sym), Q-hat^n (hyper) or Q_n (quad) of C with the eps-transposition.
inline ZModulePresentation oracle_q_module(const FinChainComplex& C, int n, QFlavor flavor, int eps = 1) {
  validate_fin_complex(C);
  const Integer N = complex_modulus(C);
  auto M = detail::tensor_square(C, eps);
  Matrix g = detail::assembled_d(M, flavor, n);
  Matrix f = detail::assembled_d(M, flavor, n + 1);
  return homology_mod(f, g, N);
}

inline GroupPresentation oracle_q_group(const FinChainComplex& C, int n, QFlavor flavor, int eps = 1) {
  return oracle_q_module(C, n, flavor, eps).group();
}

/// d o d on the assembled complex, for self-checks.
inline bool oracle_d_squared_zero(const FinChainComplex& C, int n, QFlavor flavor, int eps = 1) {
  auto M = detail::tensor_square(C, eps);
  Matrix dd = detail::assembled_d(M, flavor, n - 1) * detail::assembled_d(M, flavor, n);
  const Integer N = complex_modulus(C);
  for (std::size_t i = 0; i < dd.rows(); ++i)
    for (std::size_t j = 0; j < dd.cols(); ++j) {
      Integer v = dd(i, j).value();
      if (N == 0 ? v != 0 : v % N != 0) return false;
    }
  return true;
}

inline FinChainComplex segment_complex(const RingDescriptor& A) {
  return bundle_segment(build_universal_bundle(A), 0).complex;
}

/// The complex with one free module of rank k in degree r over the given scalar ring.
inline FinChainComplex one_term_complex(const RingDescriptor& R, std::size_t k, int r) {
  if (r < 0 || r > 3) throw ring_error("one-term complex: degree must lie in [0, 3]");
  FinChainComplex C;
  C.ring = R;
  C.ranks.assign(r + 1, 0);
  C.ranks[r] = k;
  C.d.push_back(Matrix(R, 0, C.ranks[0]));
  for (int p = 1; p <= r; ++p) C.d.push_back(Matrix(R, C.ranks[p - 1], C.ranks[p]));
  return C;
}

// ---------------------------------------------------------------------------------------
// Twisted quadratic groups

enum class TwistedScope { Segment, Full };

struct TwistedQResult {
  std::optional<GroupPresentation> group;  // isomorphism type when determined
  std::optional<ExtensionDescription> extension;
  int log2_order = 0;
  std::optional<int> exponent_log2;
  std::string method;

  bool determined() const { return group.has_value(); }
  std::string name() const {
    if (group) return group->name;
    if (extension) return "ext(" + extension->quotient.name + " by " + extension->sub.name + ")";
    return "?";
  }
};

namespace detail {

/// k x k matrices over F2 are bit masks, bit (i * k + j).
inline unsigned f2_transpose(unsigned m, std::size_t k) {
  unsigned t = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if ((m >> (i * k + j)) & 1u) t |= 1u << (j * k + i);
  return t;
}

inline unsigned f2_mul(unsigned a, unsigned b, std::size_t k) {
  unsigned c = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      unsigned v = 0;
      for (std::size_t l = 0; l < k; ++l) v ^= ((a >> (i * k + l)) & (b >> (l * k + j))) & 1u;
      if (v) c |= 1u << (i * k + j);
    }
  return c;
}

/// Counts of elements killed by 2^j determine a finite abelian 2-group.
inline GroupPresentation type_from_torsion_counts(const std::vector<std::size_t>& killed) {
  // killed[j] = #{g : 2^j g = 0}; log2 differences count summands of order >= 2^j
  std::vector<int> lg;
  for (auto c : killed) lg.push_back(valuation2(Integer(c)));
  GroupPresentation g;
  for (std::size_t j = 1; j < lg.size(); ++j) {
    int at_least_j = lg[j] - lg[j - 1];
    int at_least_next = j + 1 < lg.size() ? lg[j + 1] - lg[j] : 0;
    for (int c = 0; c < at_least_j - at_least_next; ++c) g.cyclic.push_back(Integer(1) << j);
  }
  describe(g);
  return g;
}

}  // namespace detail

/// Q_n of the one-module bundle segment over F2 (module F2^k in degree r, form X) by
/// enumerating pairs (phi, theta) and the orbits of the equivalence moves.
inline TwistedQResult oracle_twisted_q_f2(const Matrix& X, int r, int n) {
  const std::size_t k = X.rows();
  if (!(X.ring() == RingDescriptor::gf2()) || !X.is_square() || k == 0 || k > 2)
    throw ring_error("twisted oracle: X must be a square matrix over F2 of rank 1 or 2");
  if (!is_eps_symmetric(X, 1)) throw ring_error("twisted oracle: X must be symmetric");
  unsigned xb = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (X(i, j).value() != 0) xb |= 1u << (i * k + j);
  const unsigned all = 1u << (k * k);
  const int s0 = 2 * r - n;
  using detail::f2_mul;
  using detail::f2_transpose;
  auto sym = [&](unsigned m) { return m ^ f2_transpose(m, k); };

  // states (phi, theta) packed as phi << 8 | theta
  std::vector<unsigned> states;
  for (unsigned phi = 0; phi < all; ++phi) {
    if (f2_transpose(phi, k) != phi) continue;
    if (s0 < 0 && phi != 0) continue;
    for (unsigned th = 0; th < all; ++th) {
      unsigned rhs = s0 > 0 ? phi : s0 == 0 ? phi ^ f2_mul(f2_mul(phi, xb, k), phi, k) : 0u;
      if (sym(th) == rhs) states.push_back(phi << 8 | th);
    }
  }
  auto move = [&](unsigned st, unsigned zeta, unsigned eta) {
    unsigned phi = st >> 8, th = st & 0xFF;
    th ^= sym(eta);
    if (s0 >= 1) {
      phi ^= sym(zeta);
      th ^= zeta;
      if (s0 == 1) th ^= f2_mul(f2_mul(zeta, xb, k), f2_transpose(zeta, k), k);
    }
    return phi << 8 | th;
  };
  std::map<unsigned, std::size_t> cls;
  std::size_t ncls = 0;
  for (unsigned st : states) {
    if (cls.count(st)) continue;
    std::vector<unsigned> stack{st};
    cls[st] = ncls;
    while (!stack.empty()) {
      unsigned cur = stack.back();
      stack.pop_back();
      for (unsigned z = 0; z < (s0 >= 1 ? all : 1u); ++z)
        for (unsigned e = 0; e < all; ++e) {
          unsigned nx = move(cur, z, e);
          if (!cls.count(nx)) {
            cls[nx] = ncls;
            stack.push_back(nx);
          }
        }
    }
    ++ncls;
  }
  std::vector<unsigned> rep(ncls);
  for (auto [st, c] : cls) rep[c] = st;
  auto add = [&](unsigned a, unsigned b) {
    unsigned pa = a >> 8, pb = b >> 8;
    unsigned th = (a & 0xFF) ^ (b & 0xFF);
    if (s0 == 0) th ^= f2_mul(f2_mul(pa, xb, k), pb, k);
    return cls.at((pa ^ pb) << 8 | th);
  };
  // the sum of classes must not depend on representatives
  for (auto [sa, ca] : cls)
    for (auto [sb, cb] : cls)
      if (add(sa, sb) != add(rep[ca], rep[cb])) throw ring_error("twisted oracle: addition is not well defined");
  const std::size_t zero = cls.at(0);
  std::vector<std::size_t> killed{1};
  for (int j = 1;; ++j) {
    std::size_t c = 0;
    for (std::size_t g = 0; g < ncls; ++g) {
      std::size_t m = g;
      for (int t = 0; t < j; ++t) m = add(rep[m], rep[m]);
      c += m == zero;
    }
    killed.push_back(c);
    if (c == ncls) break;
  }
  TwistedQResult res;
  res.group = detail::type_from_torsion_counts(killed);
  res.log2_order = valuation2(Integer(ncls));
  res.exponent_log2 = static_cast<int>(killed.size()) - 1;
  res.method = "enumeration";
  return res;
}

namespace detail {

struct JOnSegment {
  GroupPresentation kernel, cokernel;
};

/// J^m : Q^m -> Q-hat^m on B^Z(0), with both groups computed by the oracle and the map
/// evaluated on every element through the matrix formula.
inline JOnSegment j_on_z_segment(int m) {
  const RingDescriptor Z = RingDescriptor::integers();
  FinChainComplex C = segment_complex(Z);
  GroupPresentation dom = oracle_q_group(C, m, QFlavor::Sym);
  GroupPresentation cod = oracle_q_group(C, m, QFlavor::Hyper);
  auto order = [](const GroupPresentation& g) { return Integer(1) << *g.log2_order(); };
  if (dom.is_trivial()) return {trivial_group(), cod};
  if (m <= -1) {
    // J^m is injective in negative degrees; equal finite orders make it bijective
    if (order(dom) != order(cod)) throw ring_error("J^m: orders differ in negative degree");
    return {trivial_group(), trivial_group()};
  }
  if (dom.cyclic.size() != 1 || cod.cyclic.size() != 1) throw ring_error("J^m: unexpected group shape");
  ChainBundle b = build_universal_bundle(Z);
  const long n = static_cast<long>(dom.cyclic[0]);
  std::set<long> image;
  std::size_t ker = 0;
  for (long a = 0; a < n; ++a) {
    Matrix M = Matrix::from_ints(Z, {{a}});
    long v = static_cast<long>(j_map_unchecked(b, M).rep(0, 0).value() % cod.cyclic[0]);
    image.insert(v);
    ker += v == 0;
  }
  JOnSegment j;
  j.kernel = cyclic_group(Integer(ker));
  j.cokernel = cyclic_group(order(cod) / Integer(image.size()));
  return j;
}

}  // namespace detail

inline TwistedQResult twisted_from_sequence(const GroupPresentation& sub, const GroupPresentation& quotient) {
  TwistedQResult res;
  res.method = "exact sequence";
  res.log2_order = *sub.log2_order() + *quotient.log2_order();
  if (sub.is_trivial() || quotient.is_trivial()) {
    res.group = sub.is_trivial() ? quotient : sub;
    if (res.group->is_trivial()) res.group = trivial_group();
    int e = 0;
    for (const auto& c : res.group->cyclic) e = std::max(e, valuation2(c));
    res.exponent_log2 = e;
  } else {
    res.extension = ExtensionDescription{sub, quotient, false, {"extension class not determined by the sequence"}};
  }
  return res;
}

inline TwistedQResult oracle_twisted_q(const BundleSegment& seg, int n, TwistedScope scope = TwistedScope::Segment) {
  const auto& b = seg.parent;
  if (b.ring.is_poly()) throw ring_error("twisted oracle: polynomial rings are not supported");
  if (b.family == BundleFamily::Char2Perfect) {
    if (scope == TwistedScope::Full) throw ring_error("twisted oracle: full bundles over F2 are not supported");
    return oracle_twisted_q_f2(b.X, seg.bottom_degree, n);
  }
  if (seg.index != 0) throw ring_error("twisted oracle: only the degree-0 segment over Z is supported");
  if (n < -2 || n > 2) throw ring_error("twisted oracle: n must lie in [-2, 2]");
  if (scope == TwistedScope::Full) {
    if (n == 1) return twisted_from_sequence(trivial_group(), detail::j_on_z_segment(1).kernel);
    if (n == 2) {
      // Q_2 of the bundle is the image of J^2, whose domain Q^2 vanishes
      if (!oracle_q_group(segment_complex(b.ring), 2, QFlavor::Sym).is_trivial())
        throw ring_error("twisted oracle: Q^2 of the segment is nonzero");
      return twisted_from_sequence(trivial_group(), trivial_group());
    }
    if (n == -2) throw ring_error("twisted oracle: full bundle covers n in [-1, 2]");
  }
  return twisted_from_sequence(detail::j_on_z_segment(n + 1).cokernel, detail::j_on_z_segment(n).kernel);
}

/// Orders in the sequence Q-hat^{n+1} -H-> Q_n -> Q^n -J-> Q-hat^n for the one-module
/// F2 segment: |Q_n| |im J^n| should equal |Q^n| |im H|.
struct TwistedExactness {
  std::size_t q_twisted = 0, q_sym = 0, im_j = 0, im_h = 0;
  bool holds() const { return q_twisted * im_j == q_sym * im_h; }
};

inline std::size_t f2_j_image_size(const Matrix& X, int r, int n) {
  const std::size_t k = X.rows();
  const int s0 = 2 * r - n;
  FinChainComplex C = one_term_complex(RingDescriptor::gf2(), k, r);
  auto sz = [](const GroupPresentation& g) { return std::size_t{1} << *g.log2_order(); };
  if (s0 < 0) return 1;  // Q^n = 0
  if (s0 > 0) {
    // J is an isomorphism Q^n -> Q-hat^n away from the bottom degree
    std::size_t a = sz(oracle_q_group(C, n, QFlavor::Sym)), h = sz(oracle_q_group(C, n, QFlavor::Hyper));
    if (a != h) throw ring_error("exactness: Q^n and Q-hat^n differ above the bottom");
    return a;
  }
  // bottom degree: phi symmetric, J(phi) = phi + phi X phi in Sym/Quad (diagonal)
  std::set<std::vector<Integer>> image;
  for (unsigned bits = 0; bits < (1u << (k * k)); ++bits) {
    Matrix phi(RingDescriptor::gf2(), k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) phi(i, j) = RingElement::scalar(RingDescriptor::gf2(), (bits >> (i * k + j)) & 1u);
    if (!is_eps_symmetric(phi, 1)) continue;
    Matrix v = phi + phi * X * phi;
    std::vector<Integer> diag;
    for (std::size_t i = 0; i < k; ++i) diag.push_back(v(i, i).value());
    image.insert(diag);
  }
  return image.size();
}

inline TwistedExactness check_twisted_exactness_f2(const Matrix& X, int r, int n) {
  const std::size_t k = X.rows();
  FinChainComplex C = one_term_complex(RingDescriptor::gf2(), k, r);
  auto sz = [](const GroupPresentation& g) { return std::size_t{1} << *g.log2_order(); };
  TwistedExactness t;
  t.q_twisted = std::size_t{1} << oracle_twisted_q_f2(X, r, n).log2_order;
  t.q_sym = sz(oracle_q_group(C, n, QFlavor::Sym));
  t.im_j = f2_j_image_size(X, r, n);
  t.im_h = sz(oracle_q_group(C, n + 1, QFlavor::Hyper)) / f2_j_image_size(X, r, n + 1);
  return t;
}

}  // namespace unil
