#ifndef CAUSALKIT_RATIONAL_HPP
#define CAUSALKIT_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace causalkit {

// Exact arbitrary-precision rational. Backed by boost cpp_rational, which
// keeps the denominator positive and the fraction in lowest terms.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "num/den" or "num" (optional sign, decimal digits only).
// Throws std::invalid_argument on anything else, including den == 0.
Rational parse_rational(const std::string& text);

// Serializes as "num/den", or "num" when the denominator is 1.
std::string format_rational(const Rational& value);

inline double to_double(const Rational& value) { return static_cast<double>(value); }

}  // namespace causalkit

#endif  // CAUSALKIT_RATIONAL_HPP
