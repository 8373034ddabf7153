#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace unil {

using Integer = boost::multiprecision::cpp_int;

/// 2-adic valuation of a nonzero integer.
inline int valuation2(const Integer& v) {
  if (v == 0) return -1;
  return static_cast<int>(boost::multiprecision::lsb(abs(v)));
}

}  // namespace unil
