#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace hc2 {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// lambda^k for integer k of either sign.
inline Rational rational_pow(const Rational& base, long k) {
  Rational r = 1;
  Rational b = k >= 0 ? base : Rational(1) / base;
  for (long i = 0; i < (k >= 0 ? k : -k); ++i) r *= b;
  return r;
}

}  // namespace hc2
