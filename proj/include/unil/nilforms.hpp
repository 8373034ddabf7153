#pragma once

/// Nilmodules, epsilon-quadratic nilforms, nil-lagrangians, and the mapping cone
/// D = C(x - nu : C[x] -> C[x]) of a nilcomplex.

#include "unil/forms.hpp"

#include <random>
#include <string>
#include <vector>

namespace unil {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<Check> checks;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void add(std::string name, bool pass, std::string detail = {}) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }
  const Check* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
};

/// Power bound k(1+e) after which a nilpotent k x k matrix vanishes.
inline unsigned nilpotency_bound(const Matrix& nu) {
  return static_cast<unsigned>(nu.rows()) * static_cast<unsigned>(1 + nu.ring().nilradical_exponent());
}

/// Least N with nu^N = 0, searched up to the bound; nullopt if nu is not nilpotent.
inline std::optional<unsigned> nilpotency_exponent(const Matrix& nu) {
  require_square(nu, "nilpotency");
  if (nu.rows() == 0 || nu.is_zero()) return nu.rows() == 0 ? 0u : 1u;
  Matrix p = nu;
  const unsigned bound = nilpotency_bound(nu);
  for (unsigned n = 1; n <= bound; ++n) {
    if (p.is_zero()) return n;
    p = p * nu;
  }
  return std::nullopt;
}

inline bool is_nilpotent(const Matrix& nu) { return nilpotency_exponent(nu).has_value(); }

struct NilModule {
  Matrix nu;

  explicit NilModule(Matrix n) : nu(std::move(n)) {
    if (!is_nilpotent(nu)) throw ring_error("nilmodule endomorphism is not nilpotent");
  }
  std::size_t rank() const { return nu.rows(); }
};

/// (P, nu, deltaPsi, psi) with nu^t psi - psi nu = deltaPsi + eps deltaPsi^t.
struct NilForm {
  int epsilon = 1;
  Matrix nu, delta_psi, psi;

  const RingDescriptor& ring() const { return psi.ring(); }
  std::size_t rank() const { return psi.rows(); }
  Matrix phi() const { return symmetrize(psi, epsilon); }
};

inline NilForm zero_nilform(RingDescriptor r, int eps) { return {eps, Matrix(r, 0, 0), Matrix(r, 0, 0), Matrix(r, 0, 0)}; }

inline ValidationReport validate_nilform(const NilForm& z) {
  ValidationReport rep;
  const std::size_t k = z.psi.rows();
  bool shapes = z.psi.is_square() && z.nu.rows() == k && z.nu.cols() == k && z.delta_psi.rows() == k &&
                z.delta_psi.cols() == k && z.nu.ring() == z.psi.ring() && z.delta_psi.ring() == z.psi.ring();
  rep.add("shape", shapes);
  if (!shapes) return rep;
  auto ex = nilpotency_exponent(z.nu);
  rep.add("nilpotency", ex.has_value(), ex ? "nu^" + std::to_string(*ex) + " = 0" : "nu is not nilpotent");
  Matrix lhs = z.nu.transpose() * z.psi - z.psi * z.nu;
  rep.add("qnil-relation", lhs == symmetrize(z.delta_psi, z.epsilon));
  rep.add("nonsingular", is_invertible(z.phi()));
  return rep;
}

struct LagrangianWitness {
  Matrix inclusion;  // k x m
  std::optional<std::pair<Matrix, Matrix>> witness;  // (deltaChi, chi)
};

namespace detail {

/// Solves chi - eps chi^t = A and dchi - eps dchi^t + nuL^t chi - chi nuL = B for (dchi, chi).
inline std::optional<std::pair<Matrix, Matrix>> solve_qnil_witness(const Matrix& A, const Matrix& B, const Matrix& nuL,
                                                                   int eps) {
  const auto& R = A.ring();
  const std::size_t m = A.rows(), mm = m * m;
  // unknowns: dchi(i,j) at i*m+j, chi(i,j) at mm + i*m+j; equations: B block then A block
  Matrix sys(R, 2 * mm, 2 * mm), rhs(R, 2 * mm, 1);
  RingElement e = eps_element(R, eps), one = RingElement::one(R);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t row = i * m + j;
      sys(row, i * m + j) += one;
      sys(row, j * m + i) -= e;
      for (std::size_t t = 0; t < m; ++t) {
        sys(row, mm + t * m + j) += nuL(t, i);   // (nuL^t chi)_{ij} = sum_t nuL(t,i) chi(t,j)
        sys(row, mm + i * m + t) -= nuL(t, j);   // (chi nuL)_{ij} = sum_t chi(i,t) nuL(t,j)
      }
      rhs(row, 0) = B(i, j);
      std::size_t row2 = mm + i * m + j;
      sys(row2, mm + i * m + j) += one;
      sys(row2, mm + j * m + i) -= e;
      rhs(row2, 0) = A(i, j);
    }
  auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;
  Matrix dchi(R, m, m), chi(R, m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      dchi(i, j) = (*sol)(i * m + j, 0);
      chi(i, j) = (*sol)(mm + i * m + j, 0);
    }
  return std::make_pair(dchi, chi);
}

}  // namespace detail

/// Lagrangian of the underlying form (P, psi): a summand L with i^t psi i = 0 in Q_eps
/// and 0 -> L -> P -> L* -> 0 exact via i^t N(psi).
inline ValidationReport check_form_lagrangian(const Matrix& psi, int eps, const Matrix& inc) {
  ValidationReport rep;
  if (inc.rows() != psi.rows()) throw ring_error("lagrangian: dimension mismatch");
  Matrix phi = symmetrize(psi, eps);
  rep.add("summand", has_left_inverse(inc));
  rep.add("rank", 2 * inc.cols() == psi.rows(), std::to_string(inc.cols()) + " of " + std::to_string(psi.rows()));
  rep.add("form-vanishes", restrict_class(QuadraticClass(psi, eps), inc).is_zero());
  rep.add("exact", is_surjective(inc.transpose() * phi) && (inc.transpose() * phi * inc).is_zero());
  return rep;
}

inline ValidationReport check_nil_lagrangian_report(const NilForm& z, const LagrangianWitness& L) {
  ValidationReport rep;
  const Matrix& i = L.inclusion;
  if (i.rows() != z.rank()) throw ring_error("nil-lagrangian: dimension mismatch");
  auto nuL = solve(i, z.nu * i);
  rep.add("invariant", nuL.has_value(), "nu(L) in L");
  for (auto& c : check_form_lagrangian(z.psi, z.epsilon, i).checks) rep.checks.push_back(c);
  if (!nuL) return rep;
  Matrix A = i.transpose() * z.psi * i, B = i.transpose() * z.delta_psi * i;
  bool zero_class;
  if (L.witness) {
    const auto& [dchi, chi] = *L.witness;
    RingElement e = eps_element(z.ring(), z.epsilon);
    zero_class = A == chi - e * chi.transpose() &&
                 B == dchi - e * dchi.transpose() + nuL->transpose() * chi - chi * *nuL;
  } else {
    zero_class = detail::solve_qnil_witness(A, B, *nuL, z.epsilon).has_value();
  }
  rep.add("qnil-zero", zero_class);
  return rep;
}

inline bool check_nil_lagrangian(const NilForm& z, const LagrangianWitness& L) {
  return check_nil_lagrangian_report(z, L).ok();
}

/// A bounded chain complex of free modules: ranks[r] for r = 0..top, d[r]: C_r -> C_{r-1} for r >= 1.
struct FreeComplex {
  RingDescriptor ring;
  std::vector<std::size_t> ranks;
  std::vector<Matrix> d;  // d[0] unused (0 x ranks[0])

  bool d_squared_zero() const {
    for (std::size_t r = 2; r < ranks.size(); ++r)
      if (!(d[r - 1] * d[r]).is_zero()) return false;
    return true;
  }
};

/// Mapping cone of x - nu: D_r = C_r[x] + C_{r-1}[x], d = [[d, (-1)^{r-1}(x - nu)], [0, d]].
inline FreeComplex nilcomplex_to_cone(const FreeComplex& C, const std::vector<Matrix>& nu) {
  const auto& R = C.ring;
  const std::size_t top = C.ranks.size();
  if (nu.size() != top) throw ring_error("cone: one nu per degree required");
  for (std::size_t r = 0; r < top; ++r) {
    if (nu[r].rows() != C.ranks[r] || nu[r].cols() != C.ranks[r]) throw ring_error("cone: nu shape mismatch");
    if (!is_nilpotent(nu[r])) throw ring_error("cone: nu is not nilpotent");
  }
  for (std::size_t r = 1; r < top; ++r)
    if (!(C.d[r] * nu[r] == nu[r - 1] * C.d[r])) throw ring_error("cone: nu is not a chain map");
  const RingDescriptor Rx = R.with_x();
  auto rank_at = [&](long r) -> std::size_t { return r >= 0 && r < static_cast<long>(top) ? C.ranks[r] : 0; };
  auto dC = [&](long r) -> Matrix {  // C_r -> C_{r-1} over R[x]
    if (r >= 1 && r < static_cast<long>(top)) return C.d[r].lift_to_poly();
    return Matrix(Rx, rank_at(r - 1), rank_at(r));
  };
  FreeComplex D{Rx, {}, {}};
  for (std::size_t r = 0; r <= top; ++r) D.ranks.push_back(rank_at(r) + rank_at(static_cast<long>(r) - 1));
  D.d.push_back(Matrix(Rx, 0, D.ranks[0]));
  for (std::size_t r = 1; r <= top; ++r) {
    long lr = static_cast<long>(r);
    Matrix f(Rx, rank_at(lr - 1), rank_at(lr - 1));
    if (r - 1 < top) {
      f = RingElement::x(Rx) * Matrix::identity(Rx, rank_at(lr - 1)) - nu[r - 1].lift_to_poly();
      if ((r - 1) % 2 == 1) f = -f;
    }
    Matrix z(Rx, rank_at(lr - 2), rank_at(lr));
    D.d.push_back(block2x2(dC(lr), f, z, dC(lr - 1)));
  }
  return D;
}

namespace detail {

inline long rand_int(std::mt19937_64& g, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g); }

inline Matrix random_matrix(std::mt19937_64& g, RingDescriptor r, std::size_t rows, std::size_t cols, long lo, long hi) {
  Matrix m(r, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = RingElement::scalar(r, rand_int(g, lo, hi));
  return m;
}

/// Product of signed permutations and elementary transvections with entries in {-1, 0, 1}.
inline Matrix random_unimodular(std::mt19937_64& g, RingDescriptor r, std::size_t n, int steps) {
  Matrix m = Matrix::identity(r, n);
  if (n == 0) return m;
  for (int s = 0; s < steps; ++s) {
    std::size_t i = static_cast<std::size_t>(rand_int(g, 0, static_cast<long>(n) - 1));
    std::size_t j = static_cast<std::size_t>(rand_int(g, 0, static_cast<long>(n) - 1));
    if (i == j) {
      if (rand_int(g, 0, 1)) scale_row(m, i, RingElement::scalar(r, -1));
      continue;
    }
    switch (rand_int(g, 0, 2)) {
      case 0: swap_rows(m, i, j); break;
      case 1: add_row(m, i, j, RingElement::one(r)); break;
      default: add_row(m, i, j, RingElement::scalar(r, -1)); break;
    }
  }
  return m;
}

/// Strictly upper triangular part.
inline Matrix strict_upper(const Matrix& m) {
  Matrix u(m.ring(), m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) u(i, j) = m(i, j);
  return u;
}

}  // namespace detail

/// Valid nilform on P = L + L' (rank 2m) with psi = [[0, I], [0, Q]], nu = [[a, b], [0, a^t]],
/// a strictly upper triangular, conjugated by a random unimodular change of basis.
/// The data is built over Z and reduced into the target ring. Seed 0 gives the plain
/// hyperbolic form with nu = 0.
inline std::pair<NilForm, LagrangianWitness> hyperbolic_nilform_generator(std::uint64_t seed, std::size_t rank, int eps,
                                                                          RingDescriptor ring) {
  if (rank % 2) throw ring_error("hyperbolic generator needs even rank");
  if (ring.is_poly()) throw ring_error("hyperbolic generator needs a scalar ring");
  const std::size_t m = rank / 2;
  const RingDescriptor Z = RingDescriptor::integers();
  std::mt19937_64 g(seed * 0x9E3779B97F4A7C15ULL + rank * 131 + (eps > 0 ? 7 : 11));
  const bool plain = seed == 0;
  auto rnd = [&](std::size_t r, std::size_t c) {
    return plain ? Matrix(Z, r, c) : detail::random_matrix(g, Z, r, c, -2, 2);
  };
  Matrix a = detail::strict_upper(rnd(m, m));
  Matrix Q = rnd(m, m);
  RingElement e = RingElement::scalar(Z, eps);
  Matrix S = Q + e * Q.transpose();
  Matrix C = a * S - S * a.transpose();
  Matrix b(Z, m, m);
  if (eps == 1) {
    Matrix Y = rnd(m, m);
    Y = detail::strict_upper(Y) + detail::strict_upper(Y).transpose();
    b = detail::strict_upper(C) + Y;
    // diagonal of b fixes the parity of T22's diagonal
    for (std::size_t i = 0; i < m; ++i) {
      Integer t = 0;
      for (std::size_t k = 0; k < m; ++k) t += a(i, k).value() * (Q(k, i).value() - Q(i, k).value());
      Integer extra = plain ? Integer(0) : Integer(2 * detail::rand_int(g, -1, 1));
      b(i, i) = RingElement::scalar(Z, -t + extra);
    }
  } else {
    Matrix Zs = rnd(m, m);
    b = -detail::strict_upper(C) + Zs - Zs.transpose();
    // C_ii = -2 sum_k a_ik S_ik, and b_ii = -C_ii / 2
    for (std::size_t i = 0; i < m; ++i) {
      Integer half = 0;
      for (std::size_t k = 0; k < m; ++k) half += a(i, k).value() * S(i, k).value();
      b(i, i) = RingElement::scalar(Z, half);
    }
  }
  Matrix I = Matrix::identity(Z, m), O(Z, m, m);
  Matrix psi = block2x2(O, I, O, Q);
  Matrix nu = block2x2(a, b, O, a.transpose());
  Matrix T = nu.transpose() * psi - psi * nu;
  Matrix T22 = T.submatrix(m, m, m, m);
  Matrix delta = detail::strict_upper(T22);
  if (eps == 1)
    for (std::size_t i = 0; i < m; ++i) delta(i, i) = RingElement::scalar(Z, T22(i, i).value() / 2);
  Matrix dpsi = block2x2(O, O, O, delta);
  if (!(T == symmetrize(dpsi, eps))) throw std::logic_error("nilform generator: relation not solved");
  Matrix inc = vstack(I, O);
  Matrix gmat = plain ? Matrix::identity(Z, rank) : detail::random_unimodular(g, Z, rank, 3 * static_cast<int>(rank));
  Matrix ginv = inverse_or_throw(gmat);
  auto to_ring = [&](const Matrix& M) {
    Matrix out(ring, M.rows(), M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i)
      for (std::size_t j = 0; j < M.cols(); ++j) out(i, j) = RingElement::scalar(ring, M(i, j).value());
    return out;
  };
  NilForm z{eps, to_ring(ginv * nu * gmat), to_ring(gmat.transpose() * dpsi * gmat),
            to_ring(gmat.transpose() * psi * gmat)};
  return {z, LagrangianWitness{to_ring(ginv * inc), std::nullopt}};
}

}  // namespace unil
