#pragma once

/// Finite abelian 2-groups Y = sum Z/2^{k_i} on named coordinates (component, exponent),
/// embedded in (Z/2^K)^n by y_i -> 2^{K-k_i} y_i so that subgroups become submodules and
/// the Howell normal form gives canonical generators.

#include "unil/group.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace unil::fin {

using Vec = std::vector<std::uint64_t>;

struct Coord {
  std::string component;
  int exponent = 0;
  int log_order = 1;  // coordinate group is Z/2^log_order
};

class CoordSpace {
 public:
  CoordSpace() = default;
  explicit CoordSpace(std::vector<Coord> c) : coords_(std::move(c)) {
    for (std::size_t i = 0; i < coords_.size(); ++i) index_[{coords_[i].component, coords_[i].exponent}] = i;
  }
  std::size_t size() const { return coords_.size(); }
  const Coord& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<Coord>& coords() const { return coords_; }
  std::optional<std::size_t> find(const std::string& comp, int e) const {
    auto it = index_.find({comp, e});
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  int max_log_order() const {
    int k = 1;
    for (const auto& c : coords_) k = std::max(k, c.log_order);
    return k;
  }

 private:
  std::vector<Coord> coords_;
  std::map<std::pair<std::string, int>, std::size_t> index_;
};

namespace detail {

inline int ctz(std::uint64_t v) { return __builtin_ctzll(v); }

inline std::uint64_t inverse_odd(std::uint64_t u) {
  std::uint64_t w = 1;
  for (int i = 0; i < 6; ++i) w *= 2 - u * w;
  return w;
}

}  // namespace detail

/// Howell normal form over Z/2^K of the span of the given rows. Columns are processed
/// in the given order; returns the nonzero rows, each led by a power-of-two pivot.
inline std::vector<Vec> howell_form(std::vector<Vec> rows, int K, const std::vector<std::size_t>& order) {
  const std::uint64_t mask = K >= 64 ? ~0ULL : ((1ULL << K) - 1);
  for (auto& r : rows)
    for (auto& v : r) v &= mask;
  std::size_t top = 0;
  for (std::size_t c : order) {
    std::size_t best = rows.size();
    int best_v = K;
    for (std::size_t i = top; i < rows.size(); ++i) {
      std::uint64_t a = rows[i][c];
      if (a && detail::ctz(a) < best_v) {
        best = i;
        best_v = detail::ctz(a);
      }
    }
    if (best == rows.size()) continue;
    std::swap(rows[top], rows[best]);
    Vec& p = rows[top];
    const int v = best_v;
    std::uint64_t uinv = detail::inverse_odd(p[c] >> v);
    for (auto& x : p) x = (x * uinv) & mask;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == top || rows[i][c] == 0) continue;
      std::uint64_t q = rows[i][c] >> v;
      if (q == 0) continue;
      for (std::size_t j = 0; j < p.size(); ++j) rows[i][j] = (rows[i][j] - q * p[j]) & mask;
    }
    if (v > 0) {
      Vec aug(p.size());
      bool nz = false;
      for (std::size_t j = 0; j < p.size(); ++j) {
        aug[j] = (p[j] << (K - v)) & mask;
        nz |= aug[j] != 0;
      }
      if (nz) rows.push_back(std::move(aug));
    }
    ++top;
  }
  rows.resize(top);
  return rows;
}

inline std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> o(n);
  for (std::size_t i = 0; i < n; ++i) o[i] = i;
  return o;
}

/// Homomorphism Y -> Y' given by the images of the coordinate generators of Y.
struct Hom {
  CoordSpace dom, cod;
  std::vector<Vec> images;  // images[j][i] = component i of f(e_j), read mod 2^{k'_i}
};

struct Element {
  Vec coords;  // values mod 2^{k_i}
  int log_order = 0;
};

/// Canonical generators of a subgroup of Y spanned by the given elements.
inline std::vector<Element> canonical_generators(const CoordSpace& Y, const std::vector<Vec>& elems,
                                                 const std::vector<std::size_t>& order) {
  const int K = Y.max_log_order();
  std::vector<Vec> emb;
  for (const auto& e : elems) {
    Vec v(Y.size());
    for (std::size_t i = 0; i < Y.size(); ++i) v[i] = e[i] << (K - Y[i].log_order);
    emb.push_back(std::move(v));
  }
  std::vector<Element> out;
  for (const auto& row : howell_form(emb, K, order)) {
    Element el;
    el.coords.resize(Y.size());
    int minv = K;
    for (std::size_t i = 0; i < Y.size(); ++i) {
      std::uint64_t v = row[i];
      if (v) minv = std::min(minv, detail::ctz(v));
      el.coords[i] = v >> (K - Y[i].log_order);
    }
    el.log_order = K - minv;
    if (el.log_order > 0) out.push_back(std::move(el));
  }
  return out;
}

/// Canonical generators of ker f.
inline std::vector<Element> kernel(const Hom& f, const std::vector<std::size_t>& dom_order) {
  const std::size_t n = f.dom.size(), m = f.cod.size();
  const int K = std::max(f.dom.max_log_order(), f.cod.max_log_order());
  const std::uint64_t mask = (1ULL << K) - 1;
  // rows (F c | c) with F c in embedded codomain coordinates and c coefficient vectors
  std::vector<Vec> rows;
  for (std::size_t j = 0; j < n; ++j) {
    Vec r(m + n);
    for (std::size_t i = 0; i < m; ++i) {
      std::uint64_t v = f.images[j][i] & ((1ULL << f.cod[i].log_order) - 1);
      r[i] = (v << (K - f.cod[i].log_order)) & mask;
    }
    r[m + j] = 1;
    rows.push_back(std::move(r));
  }
  // coefficient c_j only matters mod 2^{k_j}
  for (std::size_t j = 0; j < n; ++j) {
    Vec r(m + n);
    r[m + j] = (1ULL << f.dom[j].log_order) & mask;
    if (r[m + j]) rows.push_back(std::move(r));
  }
  auto H = howell_form(rows, K, identity_order(m + n));
  std::vector<Vec> ker;
  for (const auto& r : H) {
    bool zero = true;
    for (std::size_t i = 0; i < m; ++i) zero &= r[i] == 0;
    if (!zero) continue;
    Vec c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = r[m + j] & ((1ULL << f.dom[j].log_order) - 1);
    ker.push_back(std::move(c));
  }
  return canonical_generators(f.dom, ker, dom_order);
}

/// Groups canonical generators by coordinate. Monomial generators m * e_(comp, exp) become
/// family members labelled "m comp"; labels whose only exponent is 0 become cyclic summands.
/// Returns false in the second slot if some generator is not monomial.
inline std::pair<GroupPresentation, bool> present(const CoordSpace& Y, const std::vector<Element>& gens,
                                                  int truncation) {
  GroupPresentation g;
  bool monomial = true;
  std::map<std::pair<std::string, int>, PolyFamily> fam;
  std::vector<std::pair<std::string, int>> order_seen;
  for (const auto& el : gens) {
    std::optional<std::size_t> at;
    for (std::size_t i = 0; i < Y.size(); ++i)
      if (el.coords[i]) {
        if (at) monomial = false;
        at = i;
      }
    if (!at || !monomial) {
      g.cyclic.push_back(Integer(1) << el.log_order);
      continue;
    }
    std::uint64_t mult = el.coords[*at];
    std::string label = (mult == 1 ? "" : std::to_string(mult)) + Y[*at].component;
    auto key = std::make_pair(label, el.log_order);
    if (!fam.count(key)) {
      fam[key] = PolyFamily{label, 1 << el.log_order, {}, truncation};
      order_seen.push_back(key);
    }
    fam[key].exponents.push_back(Y[*at].exponent);
  }
  for (const auto& key : order_seen) {
    auto& f = fam[key];
    std::sort(f.exponents.begin(), f.exponents.end());
    if (f.exponents == std::vector<int>{0})
      g.cyclic.push_back(f.order);
    else
      g.families.push_back(f);
  }
  g.canonicalize();
  return {g, monomial};
}

/// Reduced echelon basis over F2 (K = 1) in the given column priority.
inline std::vector<Vec> rref_gf2(const std::vector<Vec>& rows, const std::vector<std::size_t>& order) {
  return howell_form(rows, 1, order);
}

inline std::size_t leading_column(const Vec& row, const std::vector<std::size_t>& order) {
  for (std::size_t c : order)
    if (row[c]) return c;
  return row.size();
}

/// Reduces v modulo an echelon basis (entries mod 2).
inline Vec reduce_gf2(Vec v, const std::vector<Vec>& basis, const std::vector<std::size_t>& order) {
  for (const auto& b : basis) {
    std::size_t c = leading_column(b, order);
    if (c < v.size() && (v[c] & 1)) {
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = (v[j] ^ b[j]) & 1;
    }
  }
  for (auto& x : v) x &= 1;
  return v;
}

}  // namespace unil::fin
