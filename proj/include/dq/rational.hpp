#pragma once
#include <gmpxx.h>

#include <string>

namespace dq {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// "3", "-3/4"
Rational rational_from_string(const std::string& s);
std::string rational_to_string(const Rational& r);

}  // namespace dq
