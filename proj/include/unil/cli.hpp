#pragma once

/// Command-line front end. run() takes the arguments after the program name and writes
/// JSON (or text with --pretty) to `out`; exit codes are 0 ok, 1 verification failure,
/// 2 invalid input.

#include "unil/json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace unil::cli {

using io::json;

inline constexpr int kDefaultDegreeCap = 64;
inline constexpr int kMaxDegreeCap = 4096;

inline int checked_degree(long long d, const char* source) {
  if (d < 0 || d > kMaxDegreeCap)
    throw io::input_error(std::string(source) + ": degree cap must lie in [0, " + std::to_string(kMaxDegreeCap) + "]");
  return static_cast<int>(d);
}

/// UNIL_DEGREE_CAP, else 64.
inline int default_degree_cap() {
  const char* env = std::getenv("UNIL_DEGREE_CAP");
  if (!env || !*env) return kDefaultDegreeCap;
  std::string s(env);
  if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 6)
    throw io::input_error("UNIL_DEGREE_CAP is not a nonnegative integer: " + s);
  return checked_degree(std::stoll(s), "UNIL_DEGREE_CAP");
}

// ---------------------------------------------------------------------------------------
// Verification suites

inline std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct SuiteCase {
  std::size_t index = 0;
  std::string ring;
  std::size_t rank = 0;
  int epsilon = 1;
  std::uint64_t seed = 0;
  VerifyReport report;
  json input;  // filled only on failure
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<SuiteCase> cases;

  std::size_t failures() const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const SuiteCase& c) { return !c.report.pass(); }));
  }
  bool pass() const { return failures() == 0; }
};

/// Rings cycle F2, Z, Z4; ranks cycle 1..4 within each ring; eps alternates every 12 cases.
inline SuiteCase ckr_case(std::uint64_t seed, std::size_t i) {
  static const RingDescriptor rings[] = {RingDescriptor::gf2(), RingDescriptor::integers(), RingDescriptor::int_mod(2)};
  SuiteCase c;
  c.index = i;
  const RingDescriptor R = rings[i % 3];
  c.ring = R.name();
  c.rank = 1 + (i / 3) % 4;
  c.epsilon = (i / 12) % 2 ? -1 : 1;
  c.seed = case_seed(seed, i);
  std::optional<UnilForm> u;
  try {
    u = ckr_sample(c.seed, c.rank, c.epsilon, R);
    c.report = verify_ckr(*u);
  } catch (const std::exception& e) {
    c.report.add("exception", false, e.what());
  }
  if (!c.report.pass() && u) c.input = io::unilform_to_json(*u);
  return c;
}

/// Rings cycle F2, Z; even ranks 2, 4, 6; eps alternates every 6 cases.
inline SuiteCase rc_case(std::uint64_t seed, std::size_t i) {
  static const RingDescriptor rings[] = {RingDescriptor::gf2(), RingDescriptor::integers()};
  SuiteCase c;
  c.index = i;
  const RingDescriptor R = rings[i % 2];
  c.ring = R.name();
  c.rank = 2 * (1 + (i / 2) % 3);
  c.epsilon = (i / 6) % 2 ? -1 : 1;
  c.seed = case_seed(seed, i);
  std::optional<std::pair<NilForm, LagrangianWitness>> zl;
  try {
    zl = hyperbolic_nilform_generator(c.seed, c.rank, c.epsilon, R);
    c.report = verify_rc_equals_j(zl->first, zl->second);
  } catch (const std::exception& e) {
    c.report.add("exception", false, e.what());
  }
  if (!c.report.pass() && zl) {
    c.input = io::nilform_to_json(zl->first);
    c.input["lagrangian"] = io::matrix_to_json(zl->second.inclusion);
  }
  return c;
}

inline SuiteResult run_suite(const std::string& suite, std::size_t count, std::uint64_t seed) {
  if (suite != "ckr" && suite != "rc") throw io::input_error("unknown suite: " + suite);
  SuiteResult r;
  r.suite = suite;
  r.seed = seed;
  for (std::size_t i = 0; i < count; ++i) r.cases.push_back(suite == "ckr" ? ckr_case(seed, i) : rc_case(seed, i));
  return r;
}

inline json suite_to_json(const SuiteResult& r) {
  json cases = json::array();
  std::optional<json> first_failure;
  for (const auto& c : r.cases) {
    json j = {{"case", c.index}, {"ring", c.ring}, {"rank", c.rank}, {"epsilon", c.epsilon}, {"pass", c.report.pass()}};
    j["stage"] = c.report.pass() ? (c.report.stages.empty() ? "" : c.report.stages.back().stage) : c.report.failed_stage();
    if (!c.report.notes.empty()) j["notes"] = c.report.notes;
    if (!c.report.pass()) {
      j["stages"] = io::stages_to_json(c.report);
      j["counterexample"] = c.input;
      if (!first_failure) first_failure = j;
    }
    cases.push_back(std::move(j));
  }
  json out = {{"suite", r.suite},       {"seed", r.seed},           {"count", r.cases.size()},
              {"failed", r.failures()}, {"pass", r.pass()},         {"cases", cases}};
  if (first_failure) out["counterexample"] = *first_failure;
  return out;
}

// ---------------------------------------------------------------------------------------
// Subcommands

inline QFlavor flavor_or_throw(const std::string& s) {
  try {
    return parse_flavor(s);
  } catch (const ring_error&) {
    throw io::input_error("unknown flavor: " + s);
  }
}

inline json cmd_tate(const std::string& ring, int parity, int D) {
  RingDescriptor R = RingDescriptor::parse(ring);
  TateGroup t = tate_cohomology(R, parity, D);
  return {{"ring", R.name()}, {"parity", parity}, {"degree_cap", D}, {"group", io::group_to_json(t.presentation)},
          {"action", t.action}};
}

inline json closed_or_oracle_q(const RingDescriptor& R, int n, QFlavor f, const std::string& method, int D) {
  if (method == "closed") return io::group_to_json(segment_q_groups(R, n, f, D));
  if (method == "oracle") return io::group_to_json(oracle_q_group(segment_complex(R), n, f));
  throw io::input_error("unknown method: " + method);
}

inline json cmd_qgroup(const std::string& ring, int n, const std::string& flavor, const std::string& method, int D) {
  RingDescriptor R = RingDescriptor::parse(ring);
  QFlavor f = flavor_or_throw(flavor);
  return {{"ring", R.name()}, {"n", n}, {"flavor", flavor_name(f)}, {"method", method},
          {"group", closed_or_oracle_q(R, n, f, method, D)}};
}

struct OracleArgs {
  std::string ring = "Z";
  int n = 0;
  std::string flavor = "sym";
  std::string method = "oracle";
  std::string complex;
  std::string scope = "segment";
  int segment = 0;
  int eps = 1;
};

inline json cmd_oracle(const OracleArgs& a) {
  if (a.method != "oracle") throw io::input_error("oracle subcommand takes --method oracle");
  if (a.eps != 1 && a.eps != -1) throw io::input_error("--eps must be 1 or -1");
  json out = {{"n", a.n}, {"method", "oracle"}};
  if (a.flavor == "twisted") {
    if (!a.complex.empty()) throw io::input_error("twisted groups are computed on bundle segments, not --complex");
    if (a.scope != "segment" && a.scope != "full") throw io::input_error("unknown scope: " + a.scope);
    RingDescriptor R = RingDescriptor::parse(a.ring);
    BundleSegment seg = bundle_segment(build_universal_bundle(R), a.segment);
    auto t = oracle_twisted_q(seg, a.n, a.scope == "full" ? TwistedScope::Full : TwistedScope::Segment);
    out.update({{"ring", R.name()}, {"flavor", "twisted"}, {"scope", a.scope}, {"segment", a.segment},
                {"group", io::twisted_to_json(t)}});
    return out;
  }
  QFlavor f = flavor_or_throw(a.flavor);
  FinChainComplex C = a.complex.empty() ? segment_complex(RingDescriptor::parse(a.ring))
                                        : io::complex_from_json(io::parse_json(a.complex, "complex"));
  out.update({{"ring", C.ring.name()}, {"flavor", flavor_name(f)}, {"epsilon", a.eps},
              {"group", io::group_to_json(oracle_q_group(C, a.n, f, a.eps))}});
  return out;
}

inline json cmd_jmap(const std::string& ring, const std::string& level, const std::string& matrix) {
  RingDescriptor R = RingDescriptor::parse(ring);
  JLevel l;
  try {
    l = parse_level(level);
  } catch (const ring_error&) {
    throw io::input_error("unknown level: " + level);
  }
  Matrix M = io::parse_matrix(matrix, R);
  SymQuotientElem q = j_map(R, l, M);
  return {{"ring", R.name()},
          {"level", level_name(l)},
          {"denominator", denominator_name(q.denominator)},
          {"class", io::matrix_to_json(q.rep)},
          {"zero", q.rep.is_zero()}};
}

inline json cmd_decompose(const std::string& poly) {
  auto s = square_decompose(io::parse_poly(poly, f2x()));
  return {{"b", io::poly_to_json(s.b)}, {"d", io::poly_to_json(s.d)}};
}

inline json cmd_reduce(const std::string& poly, const std::string& unil2, bool mod_constants) {
  if (poly.empty() == unil2.empty()) throw io::input_error("reduce takes exactly one of --poly and --unil2");
  if (!unil2.empty()) {
    if (mod_constants) throw io::input_error("--mod-constants applies to --poly only");
    UNil2Element e = unil2_normalize(io::parse_poly(unil2, f2x()));
    return {{"normal", io::poly_to_json(e.normal)}, {"text", e.normal.to_string()}};
  }
  auto r = frobenius_coker_reduce_with_preimage(io::parse_poly(poly, f2x()), mod_constants);
  return {{"normal", io::poly_to_json(r.normal)},
          {"preimage", io::poly_to_json(r.preimage)},
          {"mod_constants", mod_constants},
          {"text", r.normal.to_string()}};
}

inline json cmd_unil(const std::string& coeff, int n, int D) {
  RingDescriptor R = RingDescriptor::parse(coeff);
  UNilDescription u = unil_group(R, n, D);
  return {{"coeff", u.coefficient},  {"n", u.n},
          {"n_reduced", u.n_reduced}, {"degree_cap", u.degree_cap},
          {"group", u.description.name()}, {"description", io::description_to_json(u.description)},
          {"provenance", u.provenance}};
}

// ---------------------------------------------------------------------------------------

inline void emit(const json& j, bool pretty, std::ostream& out) {
  if (pretty)
    io::render_text(j, out);
  else
    out << j.dump() << "\n";
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact UNil and L-theory computations", "unil"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "text output instead of JSON");
  std::optional<long long> degree;
  auto add_degree = [&](CLI::App* s) { s->add_option("--degree", degree, "degree cap D (default UNIL_DEGREE_CAP or 64)"); };

  std::string ring, level, matrix, poly, unil2, flavor = "sym", method = "closed", coeff, suite;
  int n = 0, parity = 0;
  bool mod_constants = false;
  std::size_t count = 50;
  std::uint64_t seed = 0;
  OracleArgs oa;

  auto* tate = app.add_subcommand("tate", "Tate cohomology of Z/2 acting trivially on a ring")->fallthrough();
  tate->add_option("--ring", ring)->required();
  tate->add_option("--parity", parity)->check(CLI::IsMember({0, 1}));
  add_degree(tate);

  auto* qgroup = app.add_subcommand("qgroup", "Q-groups of the segment B(0) from the closed forms")->fallthrough();
  qgroup->add_option("--ring", ring)->required();
  qgroup->add_option("--n", n)->required();
  qgroup->add_option("--flavor", flavor)->required();
  qgroup->add_option("--method", method);
  add_degree(qgroup);

  auto* oracle = app.add_subcommand("oracle", "Brute-force Q-groups via explicit W-complexes")->fallthrough();
  oracle->add_option("--ring", oa.ring);
  oracle->add_option("--n", oa.n)->required();
  oracle->add_option("--flavor", oa.flavor, "sym, quad, hyper or twisted");
  oracle->add_option("--method", oa.method);
  oracle->add_option("--complex", oa.complex, "JSON {ring, ranks, d}");
  oracle->add_option("--scope", oa.scope, "twisted: segment or full");
  oracle->add_option("--segment", oa.segment, "twisted: segment index");
  oracle->add_option("--eps", oa.eps);

  auto* jmap = app.add_subcommand("jmap", "The J map on a symmetric matrix")->fallthrough();
  jmap->add_option("--ring", ring)->required();
  jmap->add_option("--level", level)->required();
  jmap->add_option("--matrix", matrix)->required();

  auto* decompose = app.add_subcommand("decompose", "Solve p = b^2 + d + x d^2 over F2[x]")->fallthrough();
  decompose->add_option("--poly", poly)->required();

  auto* reduce = app.add_subcommand("reduce", "Normal forms in coker(psi^2 - 1)")->fallthrough();
  reduce->add_option("--poly", poly);
  reduce->add_option("--unil2", unil2);
  reduce->add_flag("--mod-constants", mod_constants);

  auto* unil = app.add_subcommand("unil", "UNil_n(Z; Z, Z) or UNil_n(F2; F2, F2)")->fallthrough();
  unil->add_option("--coeff", coeff)->required()->check(CLI::IsMember({"Z", "F2"}));
  unil->add_option("--n", n)->required();
  add_degree(unil);

  auto* verify = app.add_subcommand("verify", "Seeded verification of ckr = 1 or rc = j")->fallthrough();
  verify->add_option("--suite", suite)->required()->check(CLI::IsMember({"ckr", "rc"}));
  verify->add_option("--count", count)->check(CLI::Range(0, 100000));
  verify->add_option("--seed", seed);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    auto D = [&] { return degree ? checked_degree(*degree, "--degree") : default_degree_cap(); };
    json result;
    int code = 0;
    if (*tate)
      result = cmd_tate(ring, parity, D());
    else if (*qgroup)
      result = cmd_qgroup(ring, n, flavor, method, D());
    else if (*oracle)
      result = cmd_oracle(oa);
    else if (*jmap)
      result = cmd_jmap(ring, level, matrix);
    else if (*decompose)
      result = cmd_decompose(poly);
    else if (*reduce)
      result = cmd_reduce(poly, unil2, mod_constants);
    else if (*unil)
      result = cmd_unil(coeff, n, D());
    else if (*verify) {
      SuiteResult r = run_suite(suite, count, seed);
      result = suite_to_json(r);
      code = r.pass() ? 0 : 1;
    }
    emit(result, pretty, out);
    return code;
  } catch (const std::invalid_argument& e) {
    err << json{{"error", e.what()}}.dump() << "\n";
    return 2;
  }
}

}  // namespace unil::cli
