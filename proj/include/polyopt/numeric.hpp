#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace polyopt {

/// Exact integer coefficients. Polynomial coefficients stay integral
/// throughout; rationals appear only as evaluation points.
using BigInt = boost::multiprecision::cpp_int;

/// Exact rational value, always reduced with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline Rational pow_rational(Rational base, std::uint64_t exp) {
  Rational result(1);
  while (exp > 0) {
    if (exp & 1) result *= base;
    exp >>= 1;
    if (exp > 0) base *= base;
  }
  return result;
}

inline bool is_unit(const BigInt& v) { return v == 1 || v == -1; }

}  // namespace polyopt
