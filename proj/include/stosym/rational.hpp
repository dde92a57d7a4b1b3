#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace stosym {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline BigInt rat_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return rat_den(r) == 1; }

/// Writes p or p/q, with no spaces.
inline std::string rat_to_string(const Rational& r) {
  if (is_integer(r)) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

/// Integer q-th root if exact; returns false otherwise.
bool exact_root(const BigInt& value, int q, BigInt& out);

/// r^k for integer k (k may be negative; r must be nonzero then).
Rational rat_pow(const Rational& r, long k);

}  // namespace stosym
