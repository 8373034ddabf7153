#pragma once

#include "unil/integer.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace unil {

/// Finitely presented abelian 2-groups as they arise in the calculations: cyclic summands
/// plus families indexed by monomials x^e (each family summand cyclic of the given order),
/// truncated at a degree cap.
struct PolyFamily {
  std::string label;            // coordinate the family lives in, e.g. "p" or "2a"
  int order = 2;                // order of each summand
  std::vector<int> exponents;   // sorted ascending
  int truncation = 0;           // degree cap D in force when computed

  friend bool operator==(const PolyFamily&, const PolyFamily&) = default;
};

struct GroupPresentation {
  std::vector<Integer> cyclic;  // invariant factors, sorted ascending; 0 stands for Z
  std::vector<PolyFamily> families;
  std::string name;

  bool is_trivial() const {
    if (!cyclic.empty()) return false;
    for (const auto& f : families)
      if (!f.exponents.empty()) return false;
    return true;
  }
  /// log2 of the order (all pieces are 2-groups in practice); nullopt if not a 2-group.
  std::optional<int> log2_order() const {
    int t = 0;
    for (const auto& c : cyclic) {
      if (c <= 0) return std::nullopt;  // 0 stands for Z
      int v = valuation2(c);
      if (c != Integer(1) << v) return std::nullopt;
      t += v;
    }
    for (const auto& f : families) t += valuation2(Integer(f.order)) * static_cast<int>(f.exponents.size());
    return t;
  }
  void canonicalize() {
    std::sort(cyclic.begin(), cyclic.end());
    for (auto& f : families) std::sort(f.exponents.begin(), f.exponents.end());
  }
  /// Same group data; names may differ.
  bool same_structure(const GroupPresentation& o) const {
    return cyclic == o.cyclic && families == o.families;
  }
};

inline GroupPresentation trivial_group() { return {{}, {}, "0"}; }

inline GroupPresentation cyclic_group(const Integer& n) {
  if (n <= 1) return trivial_group();
  return {{n}, {}, "Z/" + n.str()};
}

/// Extension 0 -> sub -> G -> quotient -> 0 whose class is not determined.
struct ExtensionDescription {
  GroupPresentation sub;
  GroupPresentation quotient;
  bool resolved = false;
  std::vector<std::string> annotations;
};

/// Either a presented group or an extension whose class is left open.
struct GroupDescription {
  GroupPresentation group;
  std::optional<ExtensionDescription> extension;

  static GroupDescription of(GroupPresentation g) { return {std::move(g), std::nullopt}; }
  static GroupDescription ext(ExtensionDescription e) { return {{}, std::move(e)}; }

  std::string name() const {
    if (!extension) return group.name;
    return "ext(" + extension->quotient.name + " by " + extension->sub.name + ")";
  }
  std::optional<int> log2_order() const {
    if (!extension) return group.log2_order();
    auto a = extension->sub.log2_order(), b = extension->quotient.log2_order();
    if (!a || !b) return std::nullopt;
    return *a + *b;
  }
  bool is_trivial() const { return !extension && group.is_trivial(); }
};

}  // namespace unil
