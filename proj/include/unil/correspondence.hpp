#pragma once

/// The maps r, c, j, k, c^{-1} between unilforms, nilforms and linear quadratic forms
/// over R[x], with machine checks of ckr = 1 and rc = j.

#include "unil/unilforms.hpp"

#include <string>

namespace unil {

/// psi0 + x psi1 over R[x], stored by its two coefficient matrices over R.
struct PolyQuadraticForm {
  int epsilon = 1;
  Matrix psi0, psi1;

  const RingDescriptor& ring() const { return psi0.ring(); }
  std::size_t rank() const { return psi0.rows(); }
  Matrix total() const { return psi0.lift_to_poly() + RingElement::x(ring().with_x()) * psi1.lift_to_poly(); }
  bool nonsingular() const { return is_nonsingular_quadratic(total(), epsilon); }
};

inline void require_valid(const ValidationReport& rep, const char* what) {
  if (!rep.ok()) throw ring_error(std::string(what) + ": " + rep.first_failure()->name + " fails");
}

/// psi0 = [[0, 1], [0, mu-1]], psi1 = [[mu1, 0], [0, 0]] on P1 + P-1.
inline PolyQuadraticForm map_r(const UnilForm& u) {
  require_valid(validate_unilform(u), "map_r");
  const auto& R = u.ring();
  const std::size_t k = u.rank();
  Matrix O(R, k, k), I = Matrix::identity(R, k);
  return {u.epsilon(), block2x2(O, I, O, u.mu_minus1.rep()), block2x2(u.mu1.rep(), O, O, O)};
}

/// Raw representatives mu1 = deltaPsi - nu^t psi, mu-1 = -phi^{-1} psi^t phi^{-1}.
inline std::pair<Matrix, Matrix> map_c_matrices(const NilForm& z) {
  Matrix phi_inv = inverse_or_throw(z.phi());
  return {z.delta_psi - z.nu.transpose() * z.psi, -(phi_inv * z.psi.transpose() * phi_inv)};
}

inline UnilForm map_c(const NilForm& z) {
  require_valid(validate_nilform(z), "map_c");
  auto [m1, mm1] = map_c_matrices(z);
  return UnilForm::make(m1, mm1, z.epsilon);
}

/// psi0 = psi, psi1 = deltaPsi - nu^t psi.
inline PolyQuadraticForm map_j(const NilForm& z) {
  require_valid(validate_nilform(z), "map_j");
  return {z.epsilon, z.psi, z.delta_psi - z.nu.transpose() * z.psi};
}

/// psi = psi0, nu = -N(psi0)^{-1} N(psi1), deltaPsi = nu^t psi0 + psi1.
inline NilForm map_k(const PolyQuadraticForm& f) {
  auto inv = matrix_inverse(symmetrize(f.psi0, f.epsilon));
  if (!inv) throw not_invertible("map_k: N(psi0) is not invertible over " + f.ring().name());
  Matrix nu = -(*inv * symmetrize(f.psi1, f.epsilon));
  NilForm z{f.epsilon, nu, nu.transpose() * f.psi0 + f.psi1, f.psi0};
  require_valid(validate_nilform(z), "map_k");
  return z;
}

/// nu = [[eps lambda-1 lambda1, 0], [-lambda1, 0]] with psi, psi1 as in map_r.
inline NilForm map_c_inverse(const UnilForm& u) {
  PolyQuadraticForm f = map_r(u);
  const auto& R = u.ring();
  const std::size_t k = u.rank();
  Matrix l1 = u.lambda1(), lm1 = u.lambda_minus1(), O(R, k, k);
  Matrix nu = block2x2(eps_element(R, u.epsilon()) * (lm1 * l1), O, -l1, O);
  return {u.epsilon(), nu, nu.transpose() * f.psi0 + f.psi1, f.psi0};
}

struct StageResult {
  std::string stage;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<StageResult> stages;
  std::vector<std::string> notes;

  bool pass() const {
    for (const auto& s : stages)
      if (!s.pass) return false;
    return true;
  }
  std::string failed_stage() const {
    for (const auto& s : stages)
      if (!s.pass) return s.stage;
    return {};
  }
  bool add(std::string stage, bool ok, std::string detail = {}) {
    stages.push_back({std::move(stage), ok, std::move(detail)});
    return ok;
  }
};

inline bool same_class(const UnilForm& a, const UnilForm& b) { return a == b; }

/// Stabilized form of ckr(u) expected from the explicit formula: mu1~ = diag(mu1, 0),
/// mu-1~ = [[mu-1, s], [0, 0]] with s = +1.
inline UnilForm ckr_expected_shape(const UnilForm& u) {
  const auto& R = u.ring();
  const std::size_t k = u.rank();
  Matrix O(R, k, k), I = Matrix::identity(R, k);
  return UnilForm::make(block_diag(u.mu1.rep(), O), block2x2(u.mu_minus1.rep(), I, O, O), u.epsilon());
}

inline VerifyReport verify_ckr(const UnilForm& u) {
  VerifyReport rep;
  unsigned exp_u = 0;
  if (!rep.add("valid", validate_unilform(u, &exp_u).ok())) return rep;
  const auto& R = u.ring();
  const std::size_t k = u.rank();

  PolyQuadraticForm f = map_r(u);
  if (!rep.add("r:nonsingular", f.nonsingular())) return rep;
  Matrix p1 = vstack(Matrix::identity(R, k), Matrix(R, k, k));
  if (!rep.add("r:augmentation-lagrangian", check_form_lagrangian(f.psi0, f.epsilon, p1).ok(), "P1 + 0")) return rep;

  NilForm z;
  try {
    z = map_k(f);
  } catch (const ring_error& e) {
    rep.add("k", false, e.what());
    return rep;
  }
  rep.add("k", true);
  NilForm zc = map_c_inverse(u);
  if (!rep.add("k:c-inverse", z.nu == zc.nu && z.delta_psi == zc.delta_psi && z.psi == zc.psi)) return rep;
  if (!rep.add("jk", map_j(z).psi0 == f.psi0 && map_j(z).psi1 == f.psi1)) return rep;

  UnilForm ckr = map_c(z);
  UnilForm expected = ckr_expected_shape(u);
  if (same_class(ckr, expected)) {
    rep.add("shape", true);
  } else {
    // The computed off-diagonal block is -1; compare after the isometry diag(1, -1) of P1 + P-1.
    Matrix h = block_diag(Matrix::identity(R, k), -Matrix::identity(R, k));
    bool ok = same_class(change_basis(ckr, h), expected);
    if (!rep.add("shape", ok, "signed basis change diag(1,-1)")) return rep;
  }

  SubLagrangianPair pair{vstack(Matrix(R, k, k), Matrix::identity(R, k)), Matrix(R, 2 * k, 0)};
  if (!rep.add("sublagrangian", check_sublagrangian(ckr, pair), "V1 = 0 + P-1, V-1 = 0")) return rep;
  UnilForm back;
  try {
    back = sublagrangian_reduction(ckr, pair);
  } catch (const ring_error& e) {
    rep.add("reduction", false, e.what());
    return rep;
  }
  rep.add("reduction", same_class(back, u));

  unsigned exp_ckr = 0;
  validate_unilform(ckr, &exp_ckr);
  if (exp_ckr > exp_u + 1)
    rep.notes.push_back("nilpotency exponent grew from " + std::to_string(exp_u) + " to " + std::to_string(exp_ckr));
  return rep;
}

inline VerifyReport verify_rc_equals_j(const NilForm& z, const LagrangianWitness& N) {
  VerifyReport rep;
  if (!rep.add("valid", validate_nilform(z).ok())) return rep;
  if (!rep.add("lagrangian", check_form_lagrangian(z.psi, z.epsilon, N.inclusion).ok())) return rep;
  const auto& R = z.ring();
  const RingDescriptor Rx = R.with_x();
  const std::size_t k = z.rank(), m = N.inclusion.cols();
  const RingElement x = RingElement::x(Rx);
  const RingElement e = eps_element(R, z.epsilon);
  Matrix phi = z.phi();
  Matrix phi_inv = inverse_or_throw(phi);
  Matrix B = z.delta_psi - z.nu.transpose() * z.psi;
  Matrix M = -(phi_inv * z.psi.transpose() * phi_inv);
  Matrix O(R, k, k), I = Matrix::identity(R, k);

  Matrix Psi0 = block2x2(O, I, O, M), Psi1 = block2x2(B, O, O, O);
  PolyQuadraticForm rc = map_r(map_c(z));
  bool formula = QuadraticClass(rc.psi0, z.epsilon) == QuadraticClass(Psi0, z.epsilon) &&
                 QuadraticClass(rc.psi1, z.epsilon) == QuadraticClass(Psi1, z.epsilon);
  if (!rep.add("rc-formula", formula)) return rep;
  Matrix Psi = Psi0.lift_to_poly() + x * Psi1.lift_to_poly();
  Matrix Phi = symmetrize(Psi, z.epsilon);

  // V = (phi N)[x] inside 0 + P*[x]
  Matrix iv = vstack(Matrix(R, k, m), phi * N.inclusion);
  Matrix ivx = iv.lift_to_poly();
  bool sub = has_left_inverse(iv) && QuadraticClass(ivx.transpose() * Psi * ivx, z.epsilon).is_zero() &&
             (ivx.transpose() * Phi * ivx).is_zero();
  if (!rep.add("V-sublagrangian", sub)) return rep;

  // g(u) = (u, phi u) lies in V^perp
  Matrix G = vstack(I, phi);
  Matrix Gx = G.lift_to_poly();
  if (!rep.add("g-orthogonal", (ivx.transpose() * Phi * Gx).is_zero())) return rep;
  bool onto = 2 * m == k && has_left_inverse(hstack(G, iv));
  if (!rep.add("g-onto-quotient", onto)) return rep;

  // <[psi + x B](u), v> = {Psi(u, phi u), (v, phi v)} on every pair of basis vectors
  Matrix A = z.psi.lift_to_poly() + x * B.lift_to_poly();
  Matrix A_alt = (phi - e * z.psi.transpose()).lift_to_poly() + x * B.lift_to_poly();
  bool identity = true;
  for (std::size_t i = 0; i < k && identity; ++i) {
    Matrix u = Gx.column(i);
    Matrix psi_u = Psi * u;
    for (std::size_t j = 0; j < k; ++j) {
      RingElement lhs = A(j, i);  // <A e_i, e_j>
      RingElement rhs = (psi_u.transpose() * Gx.column(j))(0, 0);
      if (!(lhs == rhs) || !(A_alt(j, i) == lhs)) {
        identity = false;
        rep.add("identity", false, "basis pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
        break;
      }
    }
  }
  if (identity) rep.add("identity", true, std::to_string(k * k) + " basis pairs");
  return rep;
}

/// Pool of valid unilforms used by the ckr suite: block forms, images of nilforms under c,
/// the rank-one examples, and direct sums of these.
inline UnilForm ckr_sample(std::uint64_t seed, std::size_t rank, int eps, RingDescriptor ring) {
  std::mt19937_64 g(seed ^ (rank * 0x5851F42D4C957F2DULL));
  switch (detail::rand_int(g, 0, 3)) {
    case 0:
      if (rank % 2 == 0 && rank > 0) {
        auto [z, L] = hyperbolic_nilform_generator(seed + 1, rank, eps, ring);
        (void)L;
        return map_c(z);
      }
      [[fallthrough]];
    case 1:
      if (rank >= 2) {
        std::size_t a = static_cast<std::size_t>(detail::rand_int(g, 1, static_cast<long>(rank) - 1));
        return direct_sum(random_unilform(seed + 7, a, eps, ring), ckr_sample(seed + 13, rank - a, eps, ring));
      }
      [[fallthrough]];
    case 2:
      if (rank == 1) {
        long a = detail::rand_int(g, -3, 3);
        Matrix m1 = Matrix::from_ints(ring, {{a}}), m0 = Matrix::from_ints(ring, {{0}});
        return detail::rand_int(g, 0, 1) ? UnilForm::make(m1, m0, eps) : UnilForm::make(m0, m1, eps);
      }
      [[fallthrough]];
    default:
      return random_unilform(seed, rank, eps, ring);
  }
}

}  // namespace unil
