#pragma once

/// JSON encoding of ring elements, matrices, groups and reports.

#include "unil/correspondence.hpp"
#include "unil/q_oracle.hpp"
#include "unil/unil.hpp"

#include <json.hpp>

#include <limits>
#include <string>
#include <vector>

namespace unil::io {

using json = nlohmann::json;

/// Malformed command-line payloads; maps to exit code 2 like ring_error.
struct input_error : ring_error {
  using ring_error::ring_error;
};

inline json integer_to_json(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

/// Accepts JSON integers and decimal strings (for values beyond 64 bits).
inline Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    std::size_t start = !s.empty() && s[0] == '-' ? 1 : 0;
    if (s.size() == start) throw input_error("empty integer literal");
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') throw input_error("bad integer literal: " + s);
    return Integer(s);
  }
  throw input_error("expected an integer, got " + j.dump());
}

inline json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    throw input_error(std::string("malformed JSON for ") + what + ": " + text);
  }
}

inline json poly_to_json(const RingElement& e) {
  json a = json::array();
  for (const auto& c : e.coeffs()) a.push_back(integer_to_json(c));
  return a;
}

/// Coefficient list, low degree first, reduced into the ring.
inline RingElement poly_from_json(const json& j, const RingDescriptor& r) {
  if (!j.is_array()) throw input_error("expected a coefficient list, got " + j.dump());
  std::vector<Integer> c;
  for (const auto& v : j) c.push_back(integer_from_json(v));
  return RingElement::from_coeffs(r, std::move(c));
}

inline RingElement parse_poly(const std::string& text, const RingDescriptor& r) {
  return poly_from_json(parse_json(text, "polynomial"), r);
}

/// Matrix entries are integers or coefficient lists; the result prints as the canonical text.
inline json element_to_json(const RingElement& e) {
  if (!e.ring().is_poly()) return integer_to_json(e.value());
  return poly_to_json(e);
}

inline RingElement element_from_json(const json& j, const RingDescriptor& r) {
  if (j.is_array()) return poly_from_json(j, r);
  return RingElement::scalar(r, integer_from_json(j));
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(element_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j, const RingDescriptor& r) {
  if (!j.is_array()) throw input_error("expected a list of rows, got " + j.dump());
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array()) throw input_error("matrix row is not a list: " + j[i].dump());
    if (i == 0) cols = j[i].size();
    if (j[i].size() != cols) throw input_error("ragged matrix");
  }
  Matrix m(r, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = element_from_json(j[i][k], r);
  return m;
}

inline Matrix parse_matrix(const std::string& text, const RingDescriptor& r) {
  return matrix_from_json(parse_json(text, "matrix"), r);
}

/// {"ring": "Z", "ranks": [1, 1], "d": [d_1, d_2, ...]} with d_i : C_i -> C_{i-1}.
inline FreeComplex complex_from_json(const json& j) {
  if (!j.is_object() || !j.contains("ring") || !j.contains("ranks"))
    throw input_error("complex needs \"ring\" and \"ranks\"");
  if (!j["ring"].is_string()) throw input_error("complex ring must be a string");
  FreeComplex C;
  C.ring = RingDescriptor::parse(j["ring"].get<std::string>());
  if (!j["ranks"].is_array() || j["ranks"].empty()) throw input_error("complex ranks must be a nonempty list");
  for (const auto& v : j["ranks"]) {
    if (!v.is_number_unsigned()) throw input_error("complex ranks must be nonnegative integers");
    C.ranks.push_back(v.get<std::size_t>());
  }
  json d = j.value("d", json::array());
  if (!d.is_array() || d.size() != C.ranks.size() - 1)
    throw input_error("complex needs one differential per consecutive pair of degrees");
  C.d.push_back(Matrix(C.ring, 0, C.ranks[0]));
  for (std::size_t i = 0; i < d.size(); ++i) {
    Matrix m = d[i].empty() ? Matrix(C.ring, C.ranks[i], C.ranks[i + 1]) : matrix_from_json(d[i], C.ring);
    if (m.rows() != C.ranks[i] || m.cols() != C.ranks[i + 1])
      throw input_error("differential d_" + std::to_string(i + 1) + " has the wrong shape");
    C.d.push_back(std::move(m));
  }
  return C;
}

inline json family_to_json(const PolyFamily& f) {
  return {{"label", f.label}, {"order", f.order}, {"exponents", f.exponents}, {"truncation", f.truncation}};
}

inline json group_to_json(const GroupPresentation& g) {
  json cyc = json::array();
  for (const auto& c : g.cyclic) cyc.push_back(integer_to_json(c));
  json fams = json::array();
  for (const auto& f : g.families) fams.push_back(family_to_json(f));
  json out = {{"name", g.name}, {"cyclic", cyc}, {"families", fams}};
  auto lg = g.log2_order();
  out["log2_order"] = lg ? json(*lg) : json(nullptr);
  return out;
}

inline json extension_to_json(const ExtensionDescription& e) {
  return {{"sub", group_to_json(e.sub)},
          {"quotient", group_to_json(e.quotient)},
          {"resolved", e.resolved},
          {"annotations", e.annotations}};
}

inline json description_to_json(const GroupDescription& d) {
  json out = {{"name", d.name()}};
  if (d.extension)
    out["extension"] = extension_to_json(*d.extension);
  else
    out["presentation"] = group_to_json(d.group);
  return out;
}

inline json twisted_to_json(const TwistedQResult& t) {
  json out = {{"name", t.name()}, {"log2_order", t.log2_order}, {"method", t.method}, {"determined", t.determined()}};
  out["exponent_log2"] = t.exponent_log2 ? json(*t.exponent_log2) : json(nullptr);
  if (t.group) out["presentation"] = group_to_json(*t.group);
  if (t.extension) out["extension"] = extension_to_json(*t.extension);
  return out;
}

inline json stages_to_json(const VerifyReport& r) {
  json a = json::array();
  for (const auto& s : r.stages) {
    json st = {{"stage", s.stage}, {"pass", s.pass}};
    if (!s.detail.empty()) st["detail"] = s.detail;
    a.push_back(std::move(st));
  }
  return a;
}

inline json unilform_to_json(const UnilForm& u) {
  return {{"ring", u.ring().name()},
          {"epsilon", u.epsilon()},
          {"mu1", matrix_to_json(u.mu1.rep())},
          {"mu_minus1", matrix_to_json(u.mu_minus1.rep())}};
}

inline json nilform_to_json(const NilForm& z) {
  return {{"ring", z.ring().name()},
          {"epsilon", z.epsilon},
          {"nu", matrix_to_json(z.nu)},
          {"delta_psi", matrix_to_json(z.delta_psi)},
          {"psi", matrix_to_json(z.psi)}};
}

/// Indented "key: value" rendering for --pretty.
inline void render_text(const json& j, std::ostream& out, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar_list = [](const json& a) {
    for (const auto& v : a)
      if (v.is_structured()) return false;
    return true;
  };
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const json& v = it.value();
      if (v.is_object() || (v.is_array() && !scalar_list(v))) {
        out << pad << it.key() << ":\n";
        render_text(v, out, indent + 2);
      } else {
        out << pad << it.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const auto& v : j) {
      out << pad << "[" << i++ << "]\n";
      if (v.is_structured())
        render_text(v, out, indent + 2);
      else
        out << pad << "  " << v.dump() << "\n";
    }
  } else {
    out << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace unil::io
