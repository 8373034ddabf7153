// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "unil/cli.hpp"
#include "unil/q_oracle.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace unil;
using unil::io::json;

namespace {

const RingDescriptor Z = RingDescriptor::integers();
const RingDescriptor F2 = RingDescriptor::gf2();
const RingDescriptor Z4 = RingDescriptor::int_mod(2);
const RingDescriptor Zx = Z.with_x();
const RingDescriptor F2x = F2.with_x();

struct Verdict {
  bool ok = true;
  std::ostringstream why;

  bool expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
    return cond;
  }
};

json run_json(std::vector<std::string> args, int& code) {
  std::ostringstream out, err;
  code = cli::run(std::move(args), out, err);
  return code == 0 ? json::parse(out.str()) : json();
}

RingElement bits(unsigned n) {
  std::vector<Integer> c;
  for (int i = 0; n >> i; ++i) c.push_back((n >> i) & 1u);
  return RingElement::from_coeffs(F2x, c);
}

RingElement rand_poly(std::mt19937_64& g, const RingDescriptor& r, int max_deg, long lo, long hi) {
  std::uniform_int_distribution<long> c(lo, hi);
  std::uniform_int_distribution<int> d(-1, max_deg);
  int deg = r.is_poly() ? d(g) : std::min(d(g), 0);
  std::vector<Integer> v;
  for (int i = 0; i <= deg; ++i) v.push_back(c(g));
  return RingElement::from_coeffs(r, v);
}

Matrix rand_matrix(std::mt19937_64& g, const RingDescriptor& r, std::size_t rows, std::size_t cols, int max_deg,
                   long lo = -5, long hi = 5) {
  Matrix m(r, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rand_poly(g, r, max_deg, lo, hi);
  return m;
}

int gf2_rank(std::vector<std::uint64_t> rows) {
  int rank = 0;
  for (int bit = 63; bit >= 0; --bit) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](std::uint64_t r) { return (r >> bit) & 1u; });
    if (it == rows.end()) continue;
    std::uint64_t p = *it;
    rows.erase(it);
    for (auto& r : rows)
      if ((r >> bit) & 1u) r ^= p;
    ++rank;
  }
  return rank;
}

// 1. UNil_n(Z) for n = 0..3 through the CLI, against the relative groups computed directly.
void theorem_table(Verdict& c) {
  const int D = 16;
  const std::string coker_name = relative_cokernel(JLevel::J0, D).name;
  for (int k = 0; k <= 3; ++k) {
    int code = 0;
    json j = run_json({"unil", "--coeff", "Z", "--n", std::to_string(k), "--degree", std::to_string(D)}, code);
    if (!c.expect(code == 0, "unil exit code")) return;
    const std::string g = j["group"];
    if (k <= 1) c.expect(g == "0", "UNil_" + std::to_string(k) + " = " + g);
    if (k == 2) {
      c.expect(g == coker_name && coker_name == "coker(psi^2-1 on F2[x]/F2)", "UNil_2 = " + g);
      c.expect(j["description"]["presentation"]["families"][0]["exponents"] == json(exponent_range(1, D, 2)),
               "UNil_2 basis");
    }
    if (k == 3) {
      const json& e = j["description"]["extension"];
      c.expect(e["resolved"] == false, "UNil_3 marked resolved");
      c.expect(e["quotient"]["name"] == "F2[x] x F2[x]", "UNil_3 quotient");
      c.expect(e["sub"]["name"] == relative_cokernel(JLevel::J1, D).name, "UNil_3 sub");
    }
  }
}

// 2. UNil_n(F2) for n = 0..7 and the degree <= 7 dimension of UNil_2(Z).
void f2_table(Verdict& c) {
  for (int k = 0; k <= 7; ++k) {
    int code = 0;
    json j = run_json({"unil", "--coeff", "F2", "--n", std::to_string(k), "--degree", "12"}, code);
    if (!c.expect(code == 0, "unil exit code")) return;
    const std::string g = j["group"];
    if (k % 2) c.expect(g == "0", "UNil_odd(F2) = " + g);
    else c.expect(g == "coker(psi^2-1 on F2[x]/F2)", "UNil_even(F2) = " + g);
  }
  auto u = unil_group(Z, 2, 7).description;
  c.expect(u.log2_order() == 4, "dim UNil_2 at D=7");
  c.expect(!u.group.families.empty() && u.group.families[0].exponents == std::vector<int>{1, 3, 5, 7}, "basis x, x3, x5, x7");
  std::vector<std::uint64_t> rows{1};
  for (int i = 1; 2 * i <= 7; ++i) rows.push_back((1ull << (2 * i)) | (1ull << i));
  c.expect(8 - gf2_rank(rows) == 4, "linear-algebra dimension");
}

// 3. square_decompose against enumeration of all (b, d) with degree <= 3.
void decomposition(Verdict& c) {
  const RingElement x = RingElement::x(F2x);
  std::map<std::vector<Integer>, std::vector<std::pair<unsigned, unsigned>>> table;
  for (unsigned b = 0; b < 16; ++b)
    for (unsigned d = 0; d < 16; ++d) {
      RingElement B = bits(b), Dd = bits(d);
      table[(B * B + Dd + x * Dd * Dd).coeffs()].push_back({b, d});
    }
  for (unsigned p = 0; p < 256; ++p) {
    RingElement P = bits(p);
    auto it = table.find(P.coeffs());
    if (!c.expect(it != table.end() && it->second.size() == 1, "no unique pair for " + P.to_string())) return;
    auto sd = square_decompose(P);
    c.expect(sd.b == bits(it->second[0].first) && sd.d == bits(it->second[0].second), "mismatch at " + P.to_string());
    c.expect(sd.b * sd.b + sd.d + x * sd.d * sd.d == P, "identity at " + P.to_string());
  }
}

// 4. Oracle homology of B^Z(0) against the closed forms.
void closed_vs_oracle(Verdict& c) {
  auto C = segment_complex(Z);
  for (int n = -2; n <= 3; ++n)
    for (auto f : {QFlavor::Sym, QFlavor::Hyper}) {
      auto o = oracle_q_group(C, n, f);
      c.expect(o.same_structure(segment_q_groups(Z, n, f, 0)), "n=" + std::to_string(n) + " " + flavor_name(f));
      if (f == QFlavor::Hyper) c.expect(o.cyclic == std::vector<Integer>{2}, "hyper not Z/2");
    }
  c.expect(oracle_q_group(C, 0, QFlavor::Sym).cyclic == std::vector<Integer>{4}, "sym n=0");
  c.expect(oracle_q_group(C, 1, QFlavor::Sym).cyclic == std::vector<Integer>{2}, "sym n=1");
  for (int n = 2; n <= 3; ++n) c.expect(oracle_q_group(C, n, QFlavor::Sym).is_trivial(), "sym n>=2");
}

// 5. J^0 over Z is zero; kernel Z/4, cokernel Z/2, matching the oracle groups.
void j0_vanishes(Verdict& c) {
  for (long long a = 0; a <= 3; ++a)
    c.expect(j_map(Z, JLevel::J0, Matrix::from_ints(Z, {{a}})).rep.is_zero(), "J0[" + std::to_string(a) + "]");
  auto kc = ker_coker_j(Z, JLevel::J0, 0);
  c.expect(kc.kernel.cyclic == std::vector<Integer>{4}, "ker " + kc.kernel.name);
  c.expect(kc.cokernel.cyclic == std::vector<Integer>{2}, "coker " + kc.cokernel.name);
  auto C = segment_complex(Z);
  c.expect(kc.kernel.same_structure(oracle_q_group(C, 0, QFlavor::Sym)), "ker vs oracle");
  c.expect(kc.cokernel.same_structure(oracle_q_group(C, 0, QFlavor::Hyper)), "coker vs oracle");
}

void suite(Verdict& c, const std::string& name, std::size_t count, std::size_t per_ring) {
  auto r = cli::run_suite(name, count, 2024);
  std::map<std::string, std::size_t> per;
  std::map<std::size_t, std::size_t> ranks;
  for (const auto& k : r.cases) {
    ++per[k.ring];
    ++ranks[k.rank];
    if (!k.report.pass()) {
      c.expect(false, "case " + std::to_string(k.index) + " (" + k.ring + ") failed at " + k.report.failed_stage());
      return;
    }
  }
  for (const auto& [ring, n] : per) c.expect(n == per_ring, ring + " has " + std::to_string(n) + " cases");
  c.expect(per.size() * per_ring == count, "ring count");
  if (c.ok) c.why << per.size() << " rings x " << per_ring << ", ranks";
  for (const auto& [rank, n] : ranks)
    if (c.ok) c.why << " " << rank;
}

// 6. ckr = 1, 200 forms over each of F2, Z, Z4 with ranks 1..4.
void ckr(Verdict& c) { suite(c, "ckr", 600, 200); }

// 7. rc = j, 200 nilforms over each of F2 and Z with ranks 2..6.
void rc(Verdict& c) { suite(c, "rc", 400, 200); }

// 8. K_1 and I_2 come out of the pipeline as 0.
void k1_i2(Verdict& c) {
  for (int D : {0, 8, 32}) {
    c.expect(relative_kernel(JLevel::J1, D).is_trivial(), "K_1 at D=" + std::to_string(D));
    c.expect(relative_image(2, D).is_trivial(), "I_2 at D=" + std::to_string(D));
  }
  // K_1 is a kernel of a nonzero map: the absolute kernel of J^1 over Z[x] is Z/2
  c.expect(!ker_coker_j(Zx, JLevel::J1, 8).kernel.is_trivial(), "absolute ker J1");
  c.expect(unil_group(Z, 0, 8).description.is_trivial() && unil_group(Z, 1, 8).description.is_trivial(), "UNil_0, UNil_1");
}

// 9. Wu classes of segment homology generators hit the Tate basis; bijective on degree <= 3 lifts.
void wu(Verdict& c) {
  auto bz = build_universal_bundle(Z);
  c.expect(wu_class(bz, 0, Matrix::from_ints(Z, {{1}})).is_one(), "Z: 1 -> 1");
  c.expect(wu_class(bz, 0, Matrix::from_ints(Z, {{0}})).is_zero(), "Z: 0 -> 0");
  auto bzx = build_universal_bundle(Zx);
  Matrix e1(Zx, 2, 1), e2(Zx, 2, 1);
  e1(0, 0) = RingElement::one(Zx);
  e2(1, 0) = RingElement::one(Zx);
  c.expect(wu_class(bzx, 0, e1).is_one(), "Z[x]: e1 -> 1");
  c.expect(wu_class(bzx, 0, e2) == RingElement::x(F2x), "Z[x]: e2 -> x");
  std::map<std::vector<Integer>, int> hits;
  for (unsigned a = 0; a < 16; ++a)
    for (unsigned b = 0; b < 16; ++b) {
      Matrix h(Zx, 2, 1);
      std::vector<Integer> ca(bits(a).coeffs()), cb(bits(b).coeffs());
      h(0, 0) = RingElement::from_coeffs(Zx, ca);
      h(1, 0) = RingElement::from_coeffs(Zx, cb);
      ++hits[wu_class(bzx, 0, h).coeffs()];
    }
  c.expect(hits.size() == 256, "Z[x]: " + std::to_string(hits.size()) + " distinct classes of 256");
}

// 10. Four property suites, 200 cases each.
void properties(Verdict& c) {
  std::mt19937_64 g(31337);
  int n = 0;
  for (int i = 0; i < 200; ++i, ++n) {
    auto a = rand_poly(g, F2x, 16, 0, 1), b = rand_poly(g, F2x, 16, 0, 1);
    c.expect(frobenius(a * b) == frobenius(a) * frobenius(b) && frobenius(a + b) == frobenius(a) + frobenius(b) &&
                 frobenius(a) == a * a,
             "frobenius case " + std::to_string(i));
  }
  for (int i = 0; i < 200; ++i, ++n) {
    const RingDescriptor R = i % 3 == 0 ? Zx : i % 3 == 1 ? Z4 : F2x;
    const int eps = i % 2 ? -1 : 1;
    Matrix psi = rand_matrix(g, R, 3, 3, 2), chi = rand_matrix(g, R, 3, 3, 2);
    auto q = quad_class_normalize(psi, eps);
    c.expect(quad_class_normalize(q.rep(), eps).rep() == q.rep() &&
                 quad_class_normalize(psi + chi - chi.transpose().times(eps), eps) == q,
             "canonical form case " + std::to_string(i));
  }
  for (int i = 0; i < 200; ++i, ++n) {
    Matrix m = rand_matrix(g, Z, 1 + i % 4, 1 + (i / 4) % 4, 0, -9, 9);
    auto s = smith_normal_form(m);
    Integer du = determinant(s.U).value(), dv = determinant(s.V).value();
    bool ok = s.U * m * s.V == s.D && (du == 1 || du == -1) && (dv == 1 || dv == -1);
    for (std::size_t k = 0; k + 1 < s.diagonal.size(); ++k) ok = ok && s.diagonal[k + 1] % s.diagonal[k] == 0;
    c.expect(ok, "snf case " + std::to_string(i));
  }
  for (int i = 0; i < 200; ++i, ++n) {
    const RingDescriptor R = i % 3 == 0 ? Z : i % 3 == 1 ? F2 : Z4;
    const std::size_t k = 1 + i % 4, len = 1 + i % 3;
    Matrix N(R, k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b) N(a, b) = rand_poly(g, R, 0, -3, 3);
    Matrix d = matrix_power(N, static_cast<unsigned>((k + 1) / 2));
    FreeComplex C{R, std::vector<std::size_t>(len, k), {Matrix(R, 0, k)}};
    for (std::size_t r = 1; r < len; ++r) C.d.push_back(d);
    c.expect(nilcomplex_to_cone(C, std::vector<Matrix>(len, N)).d_squared_zero(), "cone case " + std::to_string(i));
  }
  if (c.ok) c.why << n << " cases";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
      {"UNil_n(Z) table for n = 0..3", theorem_table},
      {"UNil_n(F2) table and dim UNil_2 at D = 7", f2_table},
      {"b^2 + d + x d^2 decomposition, 256 polynomials", decomposition},
      {"closed-form Q-groups of B^Z(0) vs oracle, n in [-2, 3]", closed_vs_oracle},
      {"J^0 over Z vanishes; ker Z/4, coker Z/2", j0_vanishes},
      {"ckr = 1 on 200 unilforms per ring (F2, Z, Z4)", ckr},
      {"rc = j on 200 nilforms per ring (F2, Z)", rc},
      {"K_1 = 0 and I_2 = 0 from the pipeline", k1_i2},
      {"Wu classes biject onto the Tate basis", wu},
      {"property suites at 200 cases each", properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    failed += !c.ok;
    std::cout << (c.ok ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first;
    std::string why = c.why.str();
    if (!why.empty()) std::cout << " (" << why << ")";
    std::cout << " " << ms << " ms\n";
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
  return failed ? 1 : 0;
}
