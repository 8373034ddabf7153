#pragma once

/// Epsilon-quadratic unilforms (P1, P-1 = P1*, mu1, mu-1), sublagrangians and the
/// sublagrangian reduction.

#include "unil/nilforms.hpp"

namespace unil {

struct UnilForm {
  QuadraticClass mu1, mu_minus1;

  static UnilForm make(const Matrix& mu1, const Matrix& mu_minus1, int eps) {
    if (!mu1.is_square() || mu1.rows() != mu_minus1.rows() || !mu_minus1.is_square())
      throw ring_error("unilform: mu1 and mu-1 must be square of equal rank");
    return {QuadraticClass(mu1, eps), QuadraticClass(mu_minus1, eps)};
  }

  int epsilon() const { return mu1.epsilon(); }
  std::size_t rank() const { return mu1.rank(); }
  const RingDescriptor& ring() const { return mu1.ring(); }
  Matrix lambda1() const { return symmetrize(mu1.rep(), epsilon()); }
  Matrix lambda_minus1() const { return symmetrize(mu_minus1.rep(), epsilon()); }

  friend bool operator==(const UnilForm&, const UnilForm&) = default;
};

inline UnilForm zero_unilform(RingDescriptor r, int eps) { return UnilForm::make(Matrix(r, 0, 0), Matrix(r, 0, 0), eps); }

/// Checks that lambda-1 lambda1 is nilpotent and records the least vanishing power.
inline ValidationReport validate_unilform(const UnilForm& u, unsigned* exponent = nullptr) {
  ValidationReport rep;
  bool same = u.mu1.epsilon() == u.mu_minus1.epsilon() && u.mu1.rank() == u.mu_minus1.rank() &&
              u.mu1.ring() == u.mu_minus1.ring();
  rep.add("shape", same);
  if (!same) return rep;
  auto ex = nilpotency_exponent(u.lambda_minus1() * u.lambda1());
  if (ex && exponent) *exponent = *ex;
  rep.add("nilpotent", ex.has_value(), ex ? "(lambda-1 lambda1)^" + std::to_string(*ex) + " = 0" : "not nilpotent");
  return rep;
}

struct SubLagrangianPair {
  Matrix v1;        // k x a, into P1
  Matrix v_minus1;  // k x b, into P-1
};

inline ValidationReport check_sublagrangian_report(const UnilForm& u, const SubLagrangianPair& p) {
  ValidationReport rep;
  const std::size_t k = u.rank();
  if (p.v1.rows() != k || p.v_minus1.rows() != k) throw ring_error("sublagrangian: dimension mismatch");
  rep.add("summand", has_left_inverse(p.v1) && has_left_inverse(p.v_minus1));
  rep.add("orthogonal", (p.v1.transpose() * p.v_minus1).is_zero(), "<V1, V-1> = 0");
  rep.add("lambda1(V1) in V-1", solve(p.v_minus1, u.lambda1() * p.v1).has_value());
  rep.add("lambda-1(V-1) in V1", solve(p.v1, u.lambda_minus1() * p.v_minus1).has_value());
  rep.add("mu1|V1 = 0", restrict_class(u.mu1, p.v1).is_zero());
  rep.add("mu-1|V-1 = 0", restrict_class(u.mu_minus1, p.v_minus1).is_zero());
  return rep;
}

inline bool check_sublagrangian(const UnilForm& u, const SubLagrangianPair& p) {
  return check_sublagrangian_report(u, p).ok();
}

/// Sublagrangian with V1 = annihilator of V-1 and complementary ranks.
inline bool check_lagrangian(const UnilForm& u, const SubLagrangianPair& p) {
  if (!check_sublagrangian(u, p)) return false;
  if (p.v1.cols() + p.v_minus1.cols() != u.rank()) return false;
  Matrix ann = kernel_basis(p.v_minus1.transpose());
  return ann.cols() == p.v1.cols() && solve(p.v1, ann).has_value();
}

/// (V-1^perp / V1, V1^perp / V-1, mu1', mu-1'), realized on explicit complements W1, W-1
/// normalized so that W1^t W-1 = I.
inline UnilForm sublagrangian_reduction(const UnilForm& u, const SubLagrangianPair& p) {
  auto rep = check_sublagrangian_report(u, p);
  if (!rep.ok()) throw ring_error("sublagrangian reduction: " + rep.first_failure()->name + " fails");
  const auto& R = u.ring();
  const std::size_t k = u.rank();
  Matrix perp1 = p.v_minus1.cols() ? kernel_basis(p.v_minus1.transpose()) : Matrix::identity(R, k);
  Matrix perp_minus1 = p.v1.cols() ? kernel_basis(p.v1.transpose()) : Matrix::identity(R, k);
  Matrix w1 = complement_in(perp1, p.v1);
  Matrix w_minus1 = complement_in(perp_minus1, p.v_minus1);
  if (w1.cols() != w_minus1.cols()) throw non_free_error("sublagrangian reduction: quotient ranks differ");
  Matrix G = w1.transpose() * w_minus1;
  auto Ginv = matrix_inverse(G);
  if (!Ginv) throw ring_error("sublagrangian reduction: induced pairing is singular");
  w_minus1 = w_minus1 * *Ginv;
  return UnilForm::make(w1.transpose() * u.mu1.rep() * w1, w_minus1.transpose() * u.mu_minus1.rep() * w_minus1,
                        u.epsilon());
}

inline UnilForm direct_sum(const UnilForm& a, const UnilForm& b) {
  if (!(a.ring() == b.ring()) || a.epsilon() != b.epsilon()) throw ring_error("direct sum: ring or epsilon mismatch");
  return UnilForm::make(block_diag(a.mu1.rep(), b.mu1.rep()), block_diag(a.mu_minus1.rep(), b.mu_minus1.rep()),
                        a.epsilon());
}

/// Basis change g on P1 (and g^{-t} on P-1 = P1*): mu1 -> g^t mu1 g, mu-1 -> g^{-1} mu-1 g^{-t}.
inline UnilForm change_basis(const UnilForm& u, const Matrix& g) {
  Matrix ginv = inverse_or_throw(g);
  return UnilForm::make(g.transpose() * u.mu1.rep() * g, ginv * u.mu_minus1.rep() * ginv.transpose(), u.epsilon());
}

/// Valid unilforms built from blocks with lambda-1 lambda1 square-zero: on P1 = A + B,
/// mu1 = [[0, X], [0, Y]] and mu-1 = [[Z, 0], [0, 0]], then conjugated.
inline UnilForm random_unilform(std::uint64_t seed, std::size_t rank, int eps, RingDescriptor ring) {
  std::mt19937_64 g(seed * 0xD1B54A32D192ED03ULL + rank * 977 + (eps > 0 ? 3 : 5));
  auto rnd = [&](std::size_t r, std::size_t c) { return detail::random_matrix(g, ring, r, c, -3, 3); };
  if (rank == 0) return zero_unilform(ring, eps);
  const std::size_t ka = static_cast<std::size_t>(detail::rand_int(g, 1, static_cast<long>(rank)));
  const std::size_t kb = rank - ka;
  Matrix mu1 = block2x2(Matrix(ring, ka, ka), rnd(ka, kb), Matrix(ring, kb, ka), rnd(kb, kb));
  Matrix mum = block2x2(rnd(ka, ka), Matrix(ring, ka, kb), Matrix(ring, kb, ka), Matrix(ring, kb, kb));
  // perturb by Q_eps-trivial terms so representatives are not already canonical
  Matrix chi = rnd(rank, rank);
  mu1 = mu1 + chi - eps_element(ring, eps) * chi.transpose();
  UnilForm u = UnilForm::make(mu1, mum, eps);
  Matrix gm = detail::random_unimodular(g, ring, rank, 3 * static_cast<int>(rank));
  return change_basis(u, gm);
}

}  // namespace unil
